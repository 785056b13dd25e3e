#include "symerg/tower.hpp"

#include "symerg/errors.hpp"

#include <algorithm>

namespace symerg {

namespace {

bool starts_with_ones(WordView u, std::size_t m) {
    if (u.size() < m) return false;
    for (std::size_t i = 0; i < m; ++i)
        if (u[i] != kInfiniteLetter) return false;
    return true;
}

bool by_length_then_lex(const Word& a, const Word& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; }

}  // namespace

ReturnWordSet return_words(const Language& lang, int n, std::size_t horizon) {
    if (n < 1) throw InputError("return words need n >= 1");
    if (horizon == 0) horizon = lang.horizon();
    const auto m = static_cast<std::size_t>(2 * n);
    const Word block = ones(m);
    ReturnWordSet r;
    r.n = n;
    for (std::size_t len = m + 1; len <= horizon; ++len) {
        bool complete = true;
        for (const Word& u : lang.factors(len)) {
            if (!starts_with_ones(u, m)) continue;
            const auto pos = occurrences(u, block);
            if (pos.size() < 2) {
                complete = false;
                continue;
            }
            if (pos.size() == 2 && pos[0] == 1 && pos[1] == len - m + 1)
                r.words.push_back(slice(u, static_cast<std::size_t>(n), len - m));
        }
        if (complete) {
            r.certified_length = len;
            std::sort(r.words.begin(), r.words.end(), by_length_then_lex);
            if (r.words.size() < 2)
                throw DegenerateError("R_" + std::to_string(n) +
                                      " has only the trivial return word; the subshift is not almost minimal here");
            return r;
        }
    }
    throw ResourceError("return words for n=" + std::to_string(n) + " not certified complete within horizon " +
                        std::to_string(horizon));
}

std::vector<Word> decompose(WordView w, const ReturnWordSet& rn) {
    const std::size_t L = w.size();
    // ways[i]: number of parses of w[i..], capped at 2.
    std::vector<int> ways(L + 1, 0);
    std::vector<std::size_t> choice(L + 1, 0);
    ways[L] = 1;
    for (std::size_t i = L; i-- > 0;) {
        for (std::size_t c = 0; c < rn.words.size(); ++c) {
            const Word& r = rn.words[c];
            if (i + r.size() > L || !std::equal(r.begin(), r.end(), w.begin() + static_cast<std::ptrdiff_t>(i))) continue;
            if (ways[i + r.size()] == 0) continue;
            if (ways[i] == 0) choice[i] = c;
            ways[i] = std::min(2, ways[i] + ways[i + r.size()]);
        }
    }
    if (ways[0] == 0) throw StructuralError("word " + to_string(w) + " has no decomposition into R_" + std::to_string(rn.n));
    if (ways[0] > 1) throw StructuralError("word " + to_string(w) + " has several decompositions into R_" + std::to_string(rn.n));
    std::vector<Word> out;
    for (std::size_t i = 0; i < L;) {
        out.push_back(rn.words[choice[i]]);
        i += rn.words[choice[i]].size();
    }
    return out;
}

std::size_t min_nontrivial_weight(const ReturnWordSet& rn) {
    std::optional<std::size_t> best;
    for (const Word& w : rn.words) {
        if (w == Word{kInfiniteLetter}) continue;
        const std::size_t x = non_one_weight(w);
        if (!best || x < *best) best = x;
    }
    if (!best) throw DegenerateError("R_n has no nontrivial member");
    return *best;
}

KRTower::KRTower(LanguagePtr lang, const ReturnWordSet& rn, std::optional<Clopen> K) : lang_(std::move(lang)), n_(rn.n) {
    const auto n = static_cast<std::size_t>(n_);
    for (const Word& w : rn.words) {
        Column c{w, w.size(), w == Word{kInfiniteLetter}, Clopen::cylinder(lang_, ones(n), concat(w, ones(n))), 0, {}};
        if (c.base.is_empty()) throw StructuralError("return word " + to_string(w) + " gives an empty base");
        columns_.push_back(std::move(c));
    }
    std::stable_sort(columns_.begin(), columns_.end(), [](const Column& a, const Column& b) {
        if (a.infinite != b.infinite) return a.infinite;
        return by_length_then_lex(a.word, b.word);
    });
    if (columns_.empty() || !columns_.front().infinite) throw StructuralError("tower has no infinite column");
    if (!K) K = Clopen::cylinder(lang_, Word{}, Word{kInfiniteLetter}).complement();
    {
        if (!K->compact()) throw InputError("K must be compact open");
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            Column& col = columns_[c];
            col.in_K.assign(col.height, false);
            for (std::size_t j = 0; j < col.height; ++j) {
                const Clopen lev = level(c, j);
                if (lev.subset_of(*K)) {
                    col.in_K[j] = true;
                } else if (!lev.disjoint_from(*K)) {
                    throw StructuralError("tower is not K-standard: level " + std::to_string(j) + " of column " +
                                          to_string(col.word, lang_->alphabet_size()) + " meets K only partly");
                }
            }
            col.k_hits = static_cast<std::size_t>(std::count(col.in_K.begin(), col.in_K.end(), true));
            if (col.infinite && col.k_hits != 0)
                throw StructuralError("tower is not K-standard: K meets the infinite column");
        }
    }
    bool first = true;
    for (const Column& col : columns_) {
        if (col.infinite) continue;
        if (first) {
            profile_ = {col.height, col.k_hits, col.k_hits};
            first = false;
        } else {
            profile_.h = std::min(profile_.h, col.height);
            profile_.h_K = std::min(profile_.h_K, col.k_hits);
            profile_.H_K = std::max(profile_.H_K, col.k_hits);
        }
    }
}

std::size_t KRTower::level_count() const {
    std::size_t s = 0;
    for (const Column& c : columns_) s += c.height;
    return s;
}

Clopen KRTower::level(std::size_t column, std::size_t j) const {
    const Column& c = columns_.at(column);
    if (j >= c.height) throw InputError("level index beyond the column height");
    return c.base.shifted(static_cast<int>(j));
}

Clopen KRTower::base() const {
    Clopen b = columns_.front().base;
    for (std::size_t c = 1; c < columns_.size(); ++c) b = b.unite(columns_[c].base);
    return b;
}

int KRTower::radius() const {
    std::size_t H = 0;
    for (const Column& c : columns_) H = std::max(H, c.height);
    return n_ + static_cast<int>(H) - 1;
}

std::vector<std::pair<std::size_t, std::size_t>> KRTower::levels_containing(WordView u) const {
    const int R = radius();
    if (u.size() != static_cast<std::size_t>(2 * R + 1)) throw InputError("word must cover the tower radius");
    const auto n = static_cast<std::size_t>(n_);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        const Word pattern = concat(concat(ones(n), columns_[c].word), ones(n));
        for (std::size_t j = 0; j < columns_[c].height; ++j) {
            const auto start = static_cast<std::size_t>(R - n_ - static_cast<int>(j));
            if (std::equal(pattern.begin(), pattern.end(), u.begin() + static_cast<std::ptrdiff_t>(start)))
                out.emplace_back(c, j);
        }
    }
    return out;
}

KRTower kr_tower(LanguagePtr lang, int n, const std::optional<Clopen>& K) {
    const ReturnWordSet rn = return_words(*lang, n);
    return KRTower(std::move(lang), rn, K);
}

PartitionCheck tower_partition_check(const KRTower& t) {
    PartitionCheck r;
    r.depth = 2 * t.radius() + 1;
    for (const Word& u : t.language()->factors(static_cast<std::size_t>(r.depth))) {
        ++r.words_checked;
        const auto hits = t.levels_containing(u);
        if (hits.size() != 1) {
            r.failure = "word " + to_string(u) + " lies in " + std::to_string(hits.size()) + " levels";
            return r;
        }
    }
    r.pass = true;
    return r;
}

RefinementWitness refinement_witness(const KRTower& fine, const KRTower& coarse) {
    if (fine.n() != coarse.n() + 1) throw InputError("refinement witness needs consecutive towers");
    ReturnWordSet rn;
    rn.n = coarse.n();
    for (const Column& c : coarse.columns()) rn.words.push_back(c.word);
    auto coarse_index = [&](const Word& w) {
        for (std::size_t c = 0; c < coarse.columns().size(); ++c)
            if (coarse.columns()[c].word == w) return c;
        throw StructuralError("decomposition block is not a coarse column");
    };
    RefinementWitness out;
    for (std::size_t fc = 0; fc < fine.columns().size(); ++fc) {
        const auto parts = decompose(fine.columns()[fc].word, rn);
        std::size_t offset = 0;
        for (const Word& part : parts) {
            const std::size_t cc = coarse_index(part);
            for (std::size_t j = 0; j < part.size(); ++j) {
                const std::size_t fj = offset + j;
                if (!fine.level(fc, fj).subset_of(coarse.level(cc, j)))
                    throw StructuralError("fine level " + std::to_string(fj) + " of column " +
                                          to_string(fine.columns()[fc].word) + " is not inside its coarse level");
                out.map.push_back({fc, fj, cc, j});
            }
            offset += part.size();
        }
    }
    out.base_inclusion = fine.base().subset_of(coarse.base());
    if (!out.base_inclusion) throw StructuralError("base of the finer tower is not inside the coarser base");
    return out;
}

WindowPartition tower_partition(const KRTower& t) {
    std::vector<Clopen> finite;
    for (std::size_t c = 0; c < t.columns().size(); ++c) {
        if (t.columns()[c].infinite) continue;
        for (std::size_t j = 0; j < t.columns()[c].height; ++j) finite.push_back(t.level(c, j));
    }
    return WindowPartition::from_clopens(t.language(), finite);
}

namespace {

int cover_radius(const Clopen& d) { return std::max(-d.lo(), d.hi() + 1); }

}  // namespace

GammaResult gamma_sequence(LanguagePtr lang, const std::vector<Clopen>& D, int i) {
    if (i < 1) throw InputError("gamma index starts at 1");
    if (D.empty()) throw InputError("gamma sequence needs at least one base set");
    for (const Clopen& d : D)
        if (!d.compact()) throw InputError("base set " + d.str() + " meets every neighbourhood of the fixed point");
    const int n1 = std::max(1, cover_radius(D.front()));
    const KRTower t1 = kr_tower(lang, n1, std::nullopt);
    Clopen K = t1.level(0, 0).complement();
    const std::size_t used = std::min<std::size_t>(D.size(), static_cast<std::size_t>(i));
    int n = std::max(n1, i);
    for (std::size_t j = 0; j < used; ++j) {
        if (!D[j].subset_of(K)) throw InputError("base set " + D[j].str() + " is not inside K_gamma_1");
        n = std::max(n, cover_radius(D[j]));
    }
    const KRTower t = n == n1 ? t1 : kr_tower(lang, n, std::nullopt);
    std::vector<Clopen> finite;
    for (std::size_t c = 0; c < t.columns().size(); ++c) {
        for (std::size_t j = 0; j < t.columns()[c].height; ++j) {
            Clopen lev = t.level(c, j);
            if (lev.subset_of(K)) {
                finite.push_back(std::move(lev));
            } else if (!lev.disjoint_from(K)) {
                throw StructuralError("tower level straddles K_gamma_1");
            }
        }
    }
    return {WindowPartition::from_clopens(lang, finite), n, K};
}

}  // namespace symerg
