#include "symerg/measure.hpp"

#include "symerg/errors.hpp"
#include "symerg/kernels.hpp"
#include "symerg/parallel.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace symerg {

namespace {

// Occurrence data of w inside one block: count, length, and the first and
// last min(|w|-1, length) letters.
struct Block {
    Integer count;
    Integer length;
    Word prefix;
    Word suffix;
};

std::size_t count_crossing(WordView w, const Word& left, const Word& right) {
    if (left.empty() || right.empty()) return 0;
    const Word joint = concat(left, right);
    const std::size_t m = w.size();
    std::size_t c = 0;
    // Start inside `left`, end inside `right`.
    for (std::size_t s = 0; s < left.size(); ++s) {
        if (s + m <= left.size() || s + m > joint.size()) continue;
        if (std::equal(w.begin(), w.end(), joint.begin() + static_cast<std::ptrdiff_t>(s))) ++c;
    }
    return c;
}

Block combine(WordView w, const Block& x, const Block& y) {
    const std::size_t keep = w.size() - 1;
    Block out;
    out.count = x.count + y.count + count_crossing(w, x.suffix, y.prefix);
    out.length = x.length + y.length;
    if (x.prefix.size() >= keep) {
        out.prefix = x.prefix;
    } else {
        out.prefix = concat(x.prefix, y.prefix);
        if (out.prefix.size() > keep) out.prefix.resize(keep);
    }
    if (y.suffix.size() >= keep) {
        out.suffix = y.suffix;
    } else {
        out.suffix = concat(x.suffix, y.suffix);
        if (out.suffix.size() > keep) out.suffix.erase(out.suffix.begin(), out.suffix.end() - static_cast<std::ptrdiff_t>(keep));
    }
    return out;
}

std::vector<Block> depth_zero(const Substitution& sub, WordView w) {
    std::vector<Block> b(sub.alphabet_size());
    for (std::size_t a = 0; a < b.size(); ++a) {
        const auto letter = static_cast<Letter>(a + 1);
        b[a].count = (w.size() == 1 && w[0] == letter) ? 1 : 0;
        b[a].length = 1;
        if (w.size() > 1) b[a].prefix = b[a].suffix = Word{letter};
    }
    return b;
}

std::vector<Block> next_depth(const Substitution& sub, WordView w, const std::vector<Block>& cur) {
    std::vector<Block> out(cur.size());
    for (std::size_t a = 0; a < cur.size(); ++a) {
        const Word& img = sub.image(static_cast<Letter>(a + 1));
        Block acc = cur[img[0] - 1];
        for (std::size_t i = 1; i < img.size(); ++i) acc = combine(w, acc, cur[img[i] - 1]);
        out[a] = std::move(acc);
    }
    return out;
}

unsigned ceil_log2(std::size_t n) { return n <= 1 ? 0u : static_cast<unsigned>(std::bit_width(n - 1)); }

}  // namespace

std::vector<Integer> occurrence_counts(const Substitution& sub, WordView w, unsigned n) {
    if (w.empty()) throw InputError("occurrence count of the empty word");
    auto blocks = depth_zero(sub, w);
    for (unsigned k = 0; k < n; ++k) blocks = next_depth(sub, w, blocks);
    std::vector<Integer> out;
    for (const auto& b : blocks) out.push_back(b.count);
    return out;
}

SubstitutionMeasure::SubstitutionMeasure(std::shared_ptr<const SubstitutionLanguage> lang, unsigned max_depth)
    : lang_(std::move(lang)), base_(lang_), max_depth_(max_depth) {}

SubstitutionMeasure::Entry SubstitutionMeasure::compute(WordView w) const {
    if (!lang_->contains(w)) return {Rational(0), 0};
    const Substitution& sub = lang_->substitution();
    const Letter s = sub.seed();
    const Word seed_word{s};
    auto bw = depth_zero(sub, w);
    auto bs = depth_zero(sub, seed_word);
    const unsigned min_depth = ceil_log2(w.size()) + 2;
    std::vector<Integer> cw{bw[s - 1].count}, cs{bs[s - 1].count};
    std::vector<Rational> ratios;
    for (unsigned n = 1; n <= max_depth_; ++n) {
        bw = next_depth(sub, w, bw);
        bs = next_depth(sub, seed_word, bs);
        cw.push_back(bw[s - 1].count);
        cs.push_back(bs[s - 1].count);
        const Integer dw = cw[n] - cw[n - 1];
        const Integer ds = cs[n] - cs[n - 1];
        if (ds == 0) throw DegenerateError("seed letter count does not grow");
        ratios.emplace_back(dw, ds);
        const std::size_t r = ratios.size();
        // ratios[t] compares depths t and t+1.
        if (r >= 3 && r - 3 >= min_depth && ratios[r - 1] == ratios[r - 2] && ratios[r - 2] == ratios[r - 3])
            return {ratios[r - 3], static_cast<unsigned>(r - 3)};
    }
    throw FrequencyError("frequency of " + to_string(w, sub.alphabet_size()) + " did not settle by depth " +
                             std::to_string(max_depth_),
                         ratios);
}

Measure SubstitutionMeasure::cylinder(WordView w) const {
    if (is_all_ones(w)) return Measure::infinite();
    Word key(w.begin(), w.end());
    {
        std::lock_guard lock(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second.value;
    }
    Entry e = compute(w);
    std::lock_guard lock(mu_);
    return memo_.emplace(std::move(key), std::move(e)).first->second.value;
}

unsigned SubstitutionMeasure::certified_depth(WordView w) const {
    if (is_all_ones(w)) return 0;
    cylinder(w);
    std::lock_guard lock(mu_);
    return memo_.at(Word(w.begin(), w.end())).depth;
}

PushforwardMeasure::PushforwardMeasure(MeasurePtr base, SubscriptMap f)
    : base_(std::move(base)), f_(std::move(f)), image_(image_language(f_, base_->language())) {}

Measure PushforwardMeasure::cylinder(WordView u) const {
    if (is_all_ones(u)) return Measure::infinite();
    const std::size_t len = u.size();
    {
        std::lock_guard lock(mu_);
        auto it = by_length_.find(len);
        if (it != by_length_.end()) {
            auto jt = it->second.find(Word(u.begin(), u.end()));
            return jt == it->second.end() ? Rational(0) : jt->second;
        }
    }
    std::map<Word, Rational> table;
    for (const Word& w : base_->language()->factors(len)) {
        if (is_all_ones(w)) continue;
        table[f_.apply(w)] += base_->cylinder(w).value();
    }
    std::lock_guard lock(mu_);
    auto& t = by_length_.emplace(len, std::move(table)).first->second;
    auto jt = t.find(Word(u.begin(), u.end()));
    return jt == t.end() ? Rational(0) : jt->second;
}

Measure clopen_measure(const CylinderMeasure& m, const Clopen& e) {
    if (e.contains_fixed_point()) return Measure::infinite();
    Rational total = 0;
    for (const Word& w : e.words()) total += m.cylinder(w).value();
    return total;
}

bool kolmogorov_consistent(const CylinderMeasure& m, WordView w) {
    const Measure mw = m.cylinder(w);
    const auto& lang = *m.language();
    auto side = [&](bool right) -> Measure {
        Rational sum = 0;
        for (std::size_t a = 1; a <= lang.alphabet_size(); ++a) {
            Word x = right ? concat(w, Word{static_cast<Letter>(a)}) : concat(Word{static_cast<Letter>(a)}, w);
            if (!lang.contains(x)) continue;
            const Measure mx = m.cylinder(x);
            if (mx.is_infinite()) return Measure::infinite();
            sum += mx.value();
        }
        return sum;
    };
    return side(true) == mw && side(false) == mw;
}

ProductDiagonal product_vs_diagonal(const CylinderMeasure& m, const Clopen& a, const Clopen& b) {
    if (!a.compact() || !b.compact()) throw InputError("product rectangles need compact open sides");
    return {clopen_measure(m, a).value() * clopen_measure(m, b).value(), clopen_measure(m, a.intersect(b)).value()};
}

ProductDiagonal product_vs_diagonal_shifted(const CylinderMeasure& m, const Clopen& a, const Clopen& b, int k) {
    if (!a.compact() || !b.compact()) throw InputError("product rectangles need compact open sides");
    const Clopen sa = a.shifted(k), sb = b.shifted(k);
    const int lo = std::min(sa.lo(), sb.lo()) - 1;
    const int hi = std::max(sa.hi(), sb.hi()) + 1;
    const Clopen ra = sa.aligned(lo, hi), rb = sb.aligned(lo, hi);
    ProductDiagonal out{0, 0};
    for (const Word& u : ra.words()) {
        const Rational mu = m.cylinder(u).value();
        for (const Word& v : rb.words()) {
            const Rational mv = m.cylinder(v).value();
            out.product += mu * mv;
            if (u == v) out.diagonal += mu;
        }
    }
    return out;
}

namespace {

std::int64_t to_i64(const Integer& x, const char* what) {
    if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
        throw ResourceError(std::string(what) + " does not fit the scan kernel");
    return static_cast<std::int64_t>(x);
}

// Positions p (0-based) of `host` with host[p+lo .. p+hi] in E, restricted
// to p in [first, last).
std::vector<std::uint8_t> indicator(const Clopen& e, WordView host, std::size_t first, std::size_t last) {
    std::vector<std::uint8_t> ind(last - first, 0);
    std::vector<std::size_t> pos;
    for (const Word& w : e.words()) {
        kernels::find_occurrences(host, w, pos);
        for (std::size_t q : pos) {
            const auto p = static_cast<std::int64_t>(q) - e.lo();
            if (p >= static_cast<std::int64_t>(first) && p < static_cast<std::int64_t>(last)) ind[static_cast<std::size_t>(p) - first] = 1;
        }
    }
    return ind;
}

std::size_t count_in(const Clopen& e, WordView host) {
    std::size_t c = 0;
    for (const Word& w : e.words()) c += kernels::count_occurrences(host, w);
    return c;
}

}  // namespace

BirkhoffReport birkhoff_certificate(const SubstitutionLanguage& lang, const CylinderMeasure& mu, const Clopen& K,
                                    const Clopen& A, const Rational& eps, unsigned depth, unsigned jobs) {
    if (!K.compact() || !A.compact()) throw InputError("Birkhoff certificate needs compact open K and A");
    if (K.is_empty()) throw InputError("Birkhoff certificate needs a nonempty K");
    if (eps <= 0) throw InputError("eps must be positive");
    if (depth == 0) throw InputError("scan depth must be positive");
    BirkhoffReport r{K, A};
    r.depth = depth;
    r.eps = eps;
    const Word& host = lang.seed_word(depth);
    const Word& prev = lang.seed_word(depth - 1);
    r.scanned_letters = host.size();

    const Integer dk = Integer(count_in(K, host)) - Integer(count_in(K, prev));
    const Integer da = Integer(count_in(A, host)) - Integer(count_in(A, prev));
    if (dk == 0) throw DegenerateError("K does not recur in the scanned iterates");
    r.empirical_c = Rational(da, dk);
    r.measure_c = clopen_measure(mu, A).value() / clopen_measure(mu, K).value();
    r.c_matches = r.empirical_c == r.measure_c;

    // Positions whose windows for both K and A lie inside the host.
    const int lo = std::min({K.lo(), A.lo(), 0});
    const int hi = std::max({K.hi(), A.hi(), 0});
    if (host.size() < static_cast<std::size_t>(hi - lo + 2)) throw ResourceError("scan word too short");
    const auto first = static_cast<std::size_t>(-lo);
    const std::size_t last = host.size() - static_cast<std::size_t>(hi);
    const auto kin = indicator(K, host, first, last);
    const auto ain = indicator(A, host, first, last);
    const std::size_t len = last - first;
    std::vector<std::int32_t> kp(len + 1, 0), ap(len + 1, 0);
    for (std::size_t i = 0; i < len; ++i) {
        kp[i + 1] = kp[i] + kin[i];
        ap[i + 1] = ap[i] + ain[i];
    }
    r.max_k_count = kp[len];
    std::vector<std::size_t> centres;
    for (std::size_t i = 0; i < len; ++i)
        if (kin[i]) centres.push_back(i);

    kernels::BirkhoffWindowScan base;
    base.k_prefix = kp;
    base.a_prefix = ap;
    base.c_num = to_i64(numerator(r.empirical_c), "c");
    base.c_den = to_i64(denominator(r.empirical_c), "c");
    base.e_num = to_i64(numerator(eps), "eps");
    base.e_den = to_i64(denominator(eps), "eps");

    struct Best {
        std::int64_t sk = 0;
        std::size_t p = 0;
    };
    const unsigned chunks = std::max(1u, jobs);
    std::vector<Best> best(std::min<std::size_t>(chunks, std::max<std::size_t>(centres.size(), 1)));
    parallel_chunks(centres.size(), jobs, [&](std::size_t b, std::size_t e, unsigned c) {
        Best local;
        kernels::BirkhoffWindowScan s = base;
        for (std::size_t i = b; i < e; ++i) {
            s.p = static_cast<std::int64_t>(centres[i]);
            s.n_max = std::min<std::int64_t>(s.p, static_cast<std::int64_t>(len) - s.p);
            const std::int64_t v = kernels::birkhoff_max_violation(s);
            if (v > local.sk) local = {v, centres[i]};
        }
        best[c] = local;
    });
    Best top;
    for (const Best& b : best)
        if (b.sk > top.sk || (b.sk == top.sk && b.sk > 0 && b.p < top.p)) top = b;
    r.m = top.sk + 1;
    r.worst_k_count = top.sk;
    if (top.sk > 0) {
        // Deviation of the witness window: the largest violating n at top.p.
        const auto p = static_cast<std::int64_t>(top.p);
        const std::int64_t nmax = std::min<std::int64_t>(p, static_cast<std::int64_t>(len) - p);
        for (std::int64_t n = 1; n <= nmax; ++n) {
            const std::int64_t sk = kp[p + n] - kp[p - n];
            if (sk != top.sk) continue;
            const Rational dev = abs(Rational(ap[p + n] - ap[p - n], sk) - r.empirical_c);
            if (dev >= eps && dev > r.worst_deviation) r.worst_deviation = dev;
        }
    }
    // A useful certificate leaves room: some scanned window reaches m.
    r.pass = r.c_matches && r.m <= r.max_k_count / 2;
    return r;
}

}  // namespace symerg
