#include "symerg/partition.hpp"

#include "symerg/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <functional>
#include <map>

namespace symerg {

WindowPartition::WindowPartition(LanguagePtr lang, int lo, int hi, std::vector<Atom> labels, std::size_t atoms,
                                 std::vector<Coords> coords)
    : lang_(std::move(lang)), lo_(lo), hi_(hi), labels_(std::move(labels)), atoms_(atoms), coords_(std::move(coords)) {
    if (!lang_) throw InputError("partition without a language");
    if (lo_ > hi_) throw InputError("partition window is empty");
    const auto& ws = lang_->factors(width());
    if (labels_.size() != ws.size()) throw InputError("one label per allowed window word required");
    if (atoms_ < 2) throw InputError("a partition needs at least two atoms");
    std::vector<bool> used(atoms_ + 1, false);
    for (Atom a : labels_) {
        if (a < 1 || a > atoms_) throw InputError("atom label out of range");
        used[a] = true;
    }
    for (std::size_t a = 2; a <= atoms_; ++a)
        if (!used[a]) throw InputError("atom " + std::to_string(a) + " is empty");
    if (label(ones(width())) != 1) throw InputError("atom 1 must contain the fixed point 1^inf");
    if (!coords_.empty() && coords_.size() != atoms_) throw InputError("coordinate table size mismatch");
}

WindowPartition WindowPartition::letter_partition(LanguagePtr lang) {
    const auto& ws = lang->factors(1);
    std::vector<Atom> labels;
    for (const Word& w : ws) labels.push_back(w[0]);
    const std::size_t k = lang->alphabet_size();
    return WindowPartition(std::move(lang), 0, 0, std::move(labels), k);
}

WindowPartition WindowPartition::from_clopens(LanguagePtr lang, const std::vector<Clopen>& finite) {
    if (finite.empty()) throw InputError("a partition needs at least one finite atom");
    auto [lo, hi] = union_window(finite);
    lo = std::min(lo, 0);
    hi = std::max(hi, 0);
    std::vector<Clopen> al;
    for (const Clopen& c : finite) {
        if (!c.compact()) throw InputError("finite atoms must be compact: " + c.str());
        if (c.is_empty()) throw InputError("finite atoms must be nonempty");
        al.push_back(c.aligned(lo, hi));
    }
    const auto& ws = lang->factors(static_cast<std::size_t>(hi - lo + 1));
    std::vector<Atom> labels(ws.size(), 1);
    for (std::size_t i = 0; i < ws.size(); ++i) {
        for (std::size_t a = 0; a < al.size(); ++a) {
            if (!std::binary_search(al[a].words().begin(), al[a].words().end(), ws[i])) continue;
            if (labels[i] != 1) throw InputError("finite atoms overlap");
            labels[i] = static_cast<Atom>(a + 2);
        }
    }
    return WindowPartition(std::move(lang), lo, hi, std::move(labels), finite.size() + 1);
}

WindowPartition WindowPartition::from_json(LanguagePtr lang, const nlohmann::json& j) {
    try {
        const int lo = j.at("window").at(0).get<int>();
        const int hi = j.at("window").at(1).get<int>();
        if (lo > hi) throw InputError("partition window is empty");
        const auto& ws = lang->factors(static_cast<std::size_t>(hi - lo + 1));
        std::vector<Atom> labels(ws.size(), 0);
        std::size_t m = 0;
        for (const auto& [key, value] : j.at("labels").items()) {
            const std::size_t idx = lang->index_of(parse_word(key));
            if (idx == Language::npos) throw InputError("partition word " + key + " not in the language");
            labels[idx] = value.get<Atom>();
            m = std::max<std::size_t>(m, labels[idx]);
        }
        for (std::size_t i = 0; i < ws.size(); ++i)
            if (labels[i] == 0) throw InputError("partition leaves word " + to_string(ws[i]) + " unlabeled");
        return WindowPartition(std::move(lang), lo, hi, std::move(labels), m);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("partition JSON: ") + e.what());
    }
}

nlohmann::json WindowPartition::to_json() const {
    nlohmann::json labels = nlohmann::json::object();
    const auto& ws = words();
    for (std::size_t i = 0; i < ws.size(); ++i) labels[to_string(ws[i], lang_->alphabet_size())] = labels_[i];
    return {{"window", {lo_, hi_}}, {"atoms", atoms_}, {"labels", labels}};
}

const std::vector<Word>& WindowPartition::words() const { return lang_->factors(width()); }

Atom WindowPartition::label(WordView w) const {
    if (w.size() != width()) throw InputError("label lookup with a word of the wrong length");
    const std::size_t idx = lang_->index_of(w);
    if (idx == Language::npos) throw InputError("word " + to_string(w, lang_->alphabet_size()) + " not in the language");
    return labels_[idx];
}

Clopen WindowPartition::atom(Atom a) const {
    if (a < 1 || a > atoms_) throw InputError("atom index out of range");
    std::vector<Word> ws;
    const auto& all = words();
    for (std::size_t i = 0; i < all.size(); ++i)
        if (labels_[i] == a) ws.push_back(all[i]);
    return Clopen(lang_, lo_, hi_, std::move(ws));
}

Clopen WindowPartition::finite_support() const { return atom(1).complement(); }

Measure WindowPartition::atom_measure(const CylinderMeasure& mu, Atom a) const { return clopen_measure(mu, atom(a)); }

WindowPartition WindowPartition::aligned(int lo, int hi) const {
    if (lo > lo_ || hi < hi_) throw InputError("alignment must enlarge the window");
    if (lo == lo_ && hi == hi_) return *this;
    const auto& ws = lang_->factors(static_cast<std::size_t>(hi - lo + 1));
    const auto off = static_cast<std::size_t>(lo_ - lo);
    std::vector<Atom> labels(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) labels[i] = label(WordView(ws[i]).subspan(off, width()));
    return WindowPartition(lang_, lo, hi, std::move(labels), atoms_, coords_);
}

WindowPartition WindowPartition::pullback(int j) const {
    WindowPartition p = *this;
    p.lo_ += j;
    p.hi_ += j;
    return p;
}

WindowPartition WindowPartition::coarsened(const SubscriptMap& f) const {
    if (f.source_size() != atoms_) throw InputError("coarsening map does not match the atom count");
    std::vector<Atom> labels(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) labels[i] = f(static_cast<Letter>(labels_[i]));
    return WindowPartition(lang_, lo_, hi_, std::move(labels), f.target_size());
}

WindowPartition WindowPartition::canonical() const {
    WindowPartition cur = *this;
    cur.coords_.clear();
    auto try_drop = [&](bool left) {
        if (cur.lo_ == cur.hi_) return false;
        const auto& ws = cur.words();
        std::map<Word, Atom> proj;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            Word p = slice(ws[i], left ? 1 : 0, ws[i].size() - 1);
            auto [it, fresh] = proj.emplace(std::move(p), cur.labels_[i]);
            if (!fresh && it->second != cur.labels_[i]) return false;
        }
        const int lo = left ? cur.lo_ + 1 : cur.lo_;
        const int hi = left ? cur.hi_ : cur.hi_ - 1;
        const auto& small = lang_->factors(static_cast<std::size_t>(hi - lo + 1));
        std::vector<Atom> labels(small.size());
        for (std::size_t i = 0; i < small.size(); ++i) labels[i] = proj.at(small[i]);
        cur = WindowPartition(lang_, lo, hi, std::move(labels), cur.atoms_);
        return true;
    };
    while (try_drop(true) || try_drop(false)) {
    }
    std::vector<Atom> rename(atoms_ + 1, 0);
    rename[1] = 1;
    Atom next = 2;
    for (Atom a : cur.labels_)
        if (rename[a] == 0) rename[a] = next++;
    for (Atom& a : cur.labels_) a = rename[a];
    return cur;
}

Word WindowPartition::name(WordView host, std::size_t first, std::size_t last) const {
    Word out;
    out.reserve(last - first);
    for (std::size_t p = first; p < last; ++p) {
        const std::int64_t a = static_cast<std::int64_t>(p) + lo_;
        if (a < 0 || static_cast<std::size_t>(a) + width() > host.size()) throw InputError("name window leaves the host word");
        out.push_back(static_cast<Letter>(label(host.subspan(static_cast<std::size_t>(a), width()))));
    }
    return out;
}

WindowPartition join(const std::vector<WindowPartition>& parts) {
    if (parts.empty()) throw InputError("join of no partitions");
    const LanguagePtr& lang = parts.front().language();
    int lo = parts.front().lo(), hi = parts.front().hi();
    for (const auto& p : parts) {
        if (p.language() != lang) throw InputError("join across different languages");
        lo = std::min(lo, p.lo());
        hi = std::max(hi, p.hi());
    }
    const auto& ws = lang->factors(static_cast<std::size_t>(hi - lo + 1));
    std::vector<Coords> tuples(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
        tuples[i].reserve(parts.size());
        for (const auto& p : parts)
            tuples[i].push_back(p.label(WordView(ws[i]).subspan(static_cast<std::size_t>(p.lo() - lo), p.width())));
    }
    std::vector<Coords> distinct = tuples;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<Atom> labels(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i)
        labels[i] = static_cast<Atom>(std::lower_bound(distinct.begin(), distinct.end(), tuples[i]) - distinct.begin() + 1);
    const std::size_t m = distinct.size();
    if (m < 2) throw StructuralError("join has a single atom");
    return WindowPartition(lang, lo, hi, std::move(labels), m, std::move(distinct));
}

WindowPartition join(const WindowPartition& a, const WindowPartition& b) { return join(std::vector{a, b}); }

WindowPartition iterated_join(const WindowPartition& alpha, int l, int k) {
    if (l > k) throw InputError("iterated join needs l <= k");
    std::vector<WindowPartition> parts;
    for (int j = l; j <= k; ++j) parts.push_back(alpha.pullback(j));
    return join(parts);
}

WindowPartition block_partition(const WindowPartition& alpha, int k) {
    if (k < 1) throw InputError("block size parameter k must be positive");
    return iterated_join(alpha, -k + 1, k - 1);
}

std::optional<SubscriptMap> refinement_map(const WindowPartition& coarse, const WindowPartition& fine) {
    if (coarse.language() != fine.language()) throw InputError("partitions over different languages");
    const int lo = std::min(coarse.lo(), fine.lo());
    const int hi = std::max(coarse.hi(), fine.hi());
    const WindowPartition c = coarse.aligned(lo, hi), f = fine.aligned(lo, hi);
    std::vector<Letter> map(fine.size(), 0);
    for (std::size_t i = 0; i < f.labels().size(); ++i) {
        Letter& slot = map[f.labels()[i] - 1];
        const auto target = static_cast<Letter>(c.labels()[i]);
        if (slot != 0 && slot != target) return std::nullopt;
        slot = target;
    }
    return SubscriptMap(std::move(map), coarse.size());
}

bool refines(const WindowPartition& fine, const WindowPartition& coarse) {
    return refinement_map(coarse, fine).has_value();
}

bool same_up_to_relabeling(const WindowPartition& a, const WindowPartition& b) {
    return a.size() == b.size() && refines(a, b) && refines(b, a);
}

namespace {

// Sum over window words u of mu(u) * (#{i != 1 : u in A_i xor u in B_i}),
// where match(a) gives the b-subscript corresponding to a-subscript a.
Rational symmetric_sum(const CylinderMeasure& mu, const WindowPartition& a, const WindowPartition& b,
                       const std::function<Atom(Atom)>& match) {
    if (a.language() != b.language()) throw InputError("partitions over different languages");
    const int lo = std::min(a.lo(), b.lo());
    const int hi = std::max(a.hi(), b.hi());
    const WindowPartition x = a.aligned(lo, hi), y = b.aligned(lo, hi);
    const auto& ws = x.words();
    Rational d = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const Atom la = match(x.labels()[i]);
        const Atom lb = y.labels()[i];
        if (la == lb) continue;
        const Rational m = mu.cylinder(ws[i]).value();
        d += m * ((la != 1 ? 1 : 0) + (lb != 1 ? 1 : 0));
    }
    return d;
}

}  // namespace

Rational distance(const CylinderMeasure& mu, const WindowPartition& a, const WindowPartition& b) {
    if (a.size() != b.size())
        throw InputError("distance needs partitions with equal atom counts (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    return symmetric_sum(mu, a, b, [](Atom x) { return x; });
}

Rational distance_by_coords(const CylinderMeasure& mu, const WindowPartition& a, const WindowPartition& b) {
    if (a.coords().empty() || b.coords().empty()) throw InputError("coordinate matching needs joined partitions");
    std::map<Coords, Atom> in_b;
    for (Atom i = 1; i <= b.size(); ++i) in_b.emplace(b.coords_of(i), i);
    if (in_b.size() != a.size()) throw InputError("subscript sets differ");
    std::vector<Atom> match(a.size() + 1, 0);
    for (Atom i = 1; i <= a.size(); ++i) {
        auto it = in_b.find(a.coords_of(i));
        if (it == in_b.end()) throw InputError("subscript sets differ");
        match[i] = it->second;
    }
    return symmetric_sum(mu, a, b, [&](Atom x) { return match[x]; });
}

Remark31 remark31_check(const CylinderMeasure& mu, const WindowPartition& a, const WindowPartition& b, int k) {
    Remark31 r;
    const WindowPartition ab = block_partition(a, k), bb = block_partition(b, k);
    std::vector<Coords> ca = ab.coords(), cb = bb.coords();
    if (ca != cb) {
        r.diagnostic = "block subscript sets differ (" + std::to_string(ab.size()) + " vs " + std::to_string(bb.size()) +
                       " atoms); the hypothesis of the bound fails";
        return r;
    }
    r.applicable = true;
    r.lhs = distance_by_coords(mu, ab, bb);
    r.rhs = Rational(2 * k - 1) * Rational(static_cast<long long>(ab.size())) * distance(mu, a, b);
    r.pass = r.lhs <= r.rhs;
    return r;
}

AlphaTApprox alpha_T_approx(const CylinderMeasure& mu, const Clopen& E, const WindowPartition& alpha,
                            const Rational& eps, int range) {
    if (!E.compact()) throw InputError("alpha^T approximation needs a compact open E");
    if (eps < 0) throw InputError("eps must be nonnegative");
    AlphaTApprox out;
    const Rational mE = clopen_measure(mu, E).value();
    if (E.is_empty()) {
        out.F = Clopen::empty(E.language());
        out.within = true;
        return out;
    }
    struct Cand {
        Translate t;
        Clopen set;
        Rational gain;
    };
    std::vector<Cand> cands;
    // Exact hits first: atoms inside E without translation.
    {
        std::vector<Translate> inside;
        std::optional<Clopen> U;
        for (Atom a = 2; a <= alpha.size(); ++a) {
            Clopen A = alpha.atom(a);
            if (A.subset_of(E)) {
                inside.push_back({a, 0});
                U = U ? U->unite(A) : A;
            }
        }
        if (U && *U == E) {
            out.pieces = std::move(inside);
            out.F = *U;
            out.within = true;
            return out;
        }
    }
    for (Atom a = 2; a <= alpha.size(); ++a) {
        const Clopen A = alpha.atom(a);
        const Rational mA = clopen_measure(mu, A).value();
        for (int k = -range; k <= range; ++k) {
            Clopen C = A.shifted(k);
            const Rational inter = clopen_measure(mu, C.intersect(E)).value();
            Rational gain = 2 * inter - mA;
            if (gain > 0) cands.push_back({{a, k}, std::move(C), std::move(gain)});
        }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.gain > y.gain; });

    std::vector<std::size_t> best_pick, pick;
    Rational best_gain = 0;
    auto compatible = [&](std::size_t c) {
        for (std::size_t q : pick) {
            if (cands[q].t.atom == cands[c].t.atom) return false;
            if (!cands[q].set.disjoint_from(cands[c].set)) return false;
        }
        return true;
    };
    if (cands.size() <= 20) {
        Rational cur = 0;
        std::function<bool(std::size_t)> dfs = [&](std::size_t i) {
            if (cur > best_gain) {
                best_gain = cur;
                best_pick = pick;
                if (best_gain == mE) return true;
            }
            if (i == cands.size()) return false;
            Rational rest = 0;
            for (std::size_t j = i; j < cands.size(); ++j) rest += cands[j].gain;
            if (cur + rest <= best_gain) return false;
            if (compatible(i)) {
                pick.push_back(i);
                cur += cands[i].gain;
                if (dfs(i + 1)) return true;
                cur -= cands[i].gain;
                pick.pop_back();
            }
            return dfs(i + 1);
        };
        dfs(0);
    } else {
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (!compatible(i)) continue;
            pick.push_back(i);
            best_gain += cands[i].gain;
        }
        best_pick = pick;
    }
    out.error = mE - best_gain;
    std::optional<Clopen> F;
    for (std::size_t i : best_pick) {
        out.pieces.push_back(cands[i].t);
        F = F ? F->unite(cands[i].set) : cands[i].set;
    }
    out.F = F ? *F : Clopen::empty(E.language());
    out.within = out.error <= eps;
    return out;
}

}  // namespace symerg
