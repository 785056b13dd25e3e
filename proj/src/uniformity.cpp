#include "symerg/uniformity.hpp"

#include "symerg/errors.hpp"
#include "symerg/parallel.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace symerg {

namespace {

using i128 = __int128;

bool less_word(const Word& a, WordView b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); }

i128 to_i128(const Integer& x) {
    if (boost::multiprecision::abs(x) > (Integer(1) << 100)) throw ResourceError("rational too large for the section scan");
    const bool neg = x < 0;
    Integer a = neg ? Integer(-x) : x;
    i128 out = 0;
    for (int shift = 96; shift >= 0; shift -= 32) {
        out = (out << 32) | static_cast<i128>(static_cast<std::uint32_t>((a >> shift) & 0xffffffffu));
    }
    return neg ? -out : out;
}

}  // namespace

std::size_t BlockReference::find(WordView v) const {
    auto it = std::lower_bound(blocks.begin(), blocks.end(), v, less_word);
    if (it == blocks.end() || !std::equal(it->begin(), it->end(), v.begin(), v.end())) return Language::npos;
    return static_cast<std::size_t>(it - blocks.begin());
}

BlockReference reference_distribution(const CylinderMeasure& mu, const WindowPartition& alpha, int k) {
    BlockReference r;
    r.k = k;
    r.mu_K = clopen_measure(mu, alpha.finite_support()).value();
    if (r.mu_K == 0) throw DegenerateError("finite support has measure zero");
    const WindowPartition b = block_partition(alpha, k);
    std::vector<std::pair<Word, Rational>> rows;
    for (Atom a = 1; a <= b.size(); ++a) {
        const Coords& t = b.coords_of(a);
        Word v(t.begin(), t.end());
        if (is_all_ones(v)) continue;
        rows.emplace_back(std::move(v), clopen_measure(mu, b.atom(a)).value() / r.mu_K);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [v, q] : rows) {
        r.blocks.push_back(std::move(v));
        r.ref.push_back(std::move(q));
    }
    return r;
}

BlockDistribution block_empirical_in_context(WordView host, std::size_t first, std::size_t last,
                                             const BlockReference& ref, bool include_last) {
    if (first >= last || last > host.size()) throw InputError("empty or out-of-range section");
    const std::size_t k = static_cast<std::size_t>(ref.k);
    const std::size_t stop = include_last ? last : last - 1;
    std::vector<std::size_t> counts(ref.blocks.size(), 0);
    BlockDistribution d;
    d.k = ref.k;
    for (std::size_t j = first; j < stop; ++j) {
        if (host[j] != kInfiniteLetter) ++d.denominator;
        if (j + 1 < k || j + k > host.size()) continue;
        const std::size_t idx = ref.find(host.subspan(j + 1 - k, 2 * k - 1));
        if (idx != Language::npos) ++counts[idx];
    }
    if (d.denominator == 0) throw DegenerateError("section has no letter != 1 in its counted range");
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        d.support.push_back(ref.blocks[i]);
        d.freq.emplace_back(static_cast<long long>(counts[i]), static_cast<long long>(d.denominator));
    }
    return d;
}

BlockDistribution block_empirical(WordView name, const BlockReference& ref, bool include_last) {
    if (name.empty()) throw InputError("empty name");
    // Truncated edge windows: read the name alone, so windows may not leave it.
    const std::size_t k = static_cast<std::size_t>(ref.k);
    const std::size_t stop = include_last ? name.size() : name.size() - 1;
    std::vector<std::size_t> counts(ref.blocks.size(), 0);
    BlockDistribution d;
    d.k = ref.k;
    for (std::size_t j = 0; j < stop; ++j) {
        if (name[j] != kInfiniteLetter) ++d.denominator;
        if (j + 1 < k || j + k > name.size()) continue;
        const std::size_t idx = ref.find(name.subspan(j + 1 - k, 2 * k - 1));
        if (idx != Language::npos) ++counts[idx];
    }
    if (d.denominator == 0) throw DegenerateError("name has no letter != 1 in its counted range");
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        d.support.push_back(ref.blocks[i]);
        d.freq.emplace_back(static_cast<long long>(counts[i]), static_cast<long long>(d.denominator));
    }
    return d;
}

Deviation max_deviation(const BlockDistribution& d, const BlockReference& ref) {
    Deviation out;
    std::size_t s = 0;
    for (std::size_t i = 0; i < ref.blocks.size(); ++i) {
        Rational f = 0;
        while (s < d.support.size() && d.support[s] < ref.blocks[i]) ++s;
        if (s < d.support.size() && d.support[s] == ref.blocks[i]) f = d.freq[s];
        Rational dev = abs(f - ref.ref[i]);
        if (out.block.empty() || dev > out.value) {
            out.value = std::move(dev);
            out.block = ref.blocks[i];
        }
    }
    return out;
}

namespace {

struct BlockScanResult {
    std::size_t best = 0;  // max violating K points
    std::size_t s = 0, e = 0;
    bool found = false;
};

// Max K-point count over sections violating on block `b`, in O(L log L).
BlockScanResult scan_block(WordView name, const std::vector<std::int32_t>& block_at, std::int32_t b,
                           const Rational& r, const Rational& eps, int kk, bool include_last,
                           const std::vector<std::int64_t>& D) {
    const std::size_t L = name.size();
    const auto k = static_cast<std::int64_t>(kk);
    const std::int64_t t = include_last ? k - 1 : std::max<std::int64_t>(1, k - 1);
    const std::int64_t u = include_last ? 0 : 1;
    const std::int64_t g = k + t - 2;  // sections with e >= s + g have a nonempty centre range
    std::vector<std::int64_t> C(L + 1, 0);
    for (std::size_t j = 0; j < L; ++j) C[j + 1] = C[j] + (block_at[j] == b ? 1 : 0);
    // lastK[x] = largest position < x holding a letter != 1, or -1.
    std::vector<std::int64_t> lastK(L + 1, -1);
    for (std::size_t x = 1; x <= L; ++x) lastK[x] = name[x - 1] != kInfiniteLetter ? static_cast<std::int64_t>(x - 1) : lastK[x - 1];

    const i128 p = to_i128(numerator(r)), q = to_i128(denominator(r));
    const i128 a = to_i128(numerator(eps)), bb = to_i128(denominator(eps));
    const auto Cc = [&](std::int64_t x) -> i128 { return C[static_cast<std::size_t>(std::clamp<std::int64_t>(x, 0, static_cast<std::int64_t>(L)))]; };
    const auto Dd = [&](std::int64_t x) -> i128 { return D[static_cast<std::size_t>(x)]; };

    BlockScanResult res;
    auto offer = [&](std::int64_t s, std::int64_t e) {
        const auto kp = static_cast<std::size_t>(D[static_cast<std::size_t>(e + 1)] - D[static_cast<std::size_t>(s)]);
        if (!res.found || kp > res.best) res = {kp, static_cast<std::size_t>(s), static_cast<std::size_t>(e), true};
    };

    // Long sections, both directions of the absolute value.
    for (int dir = 0; dir < 2; ++dir) {
        // dir 0: b q c - (b p + a q) d >= 0 ; dir 1: (b p - a q) d - b q c >= 0
        const i128 cc = dir == 0 ? bb * q : -bb * q;
        const i128 dd = dir == 0 ? -(bb * p + a * q) : (bb * p - a * q);
        std::vector<i128> B(L), PM(L);
        for (std::size_t s = 0; s < L; ++s) {
            const auto si = static_cast<std::int64_t>(s);
            B[s] = cc * Cc(si + k - 1) + dd * Dd(si);
            PM[s] = s == 0 ? B[s] : std::min(PM[s - 1], B[s]);
        }
        for (std::size_t e = 0; e < L; ++e) {
            const auto ei = static_cast<std::int64_t>(e);
            std::int64_t smax = std::min(ei - g, lastK[static_cast<std::size_t>(ei + 1 - u)]);
            if (smax < 0) continue;
            const i128 A = cc * Cc(ei - t + 1) + dd * Dd(ei + 1 - u);
            // First s with PM[s] <= A (PM is nonincreasing).
            std::size_t lo = 0, hi = static_cast<std::size_t>(smax) + 1;
            if (PM[static_cast<std::size_t>(smax)] > A) continue;
            while (lo < hi) {
                const std::size_t mid = (lo + hi) / 2;
                if (PM[mid] <= A)
                    hi = mid;
                else
                    lo = mid + 1;
            }
            offer(static_cast<std::int64_t>(lo), ei);
        }
    }
    // Short sections: no centre fits, the block count is 0, deviation is r.
    if (g > 0 && r >= eps) {
        for (std::size_t s = 0; s < L; ++s) {
            const auto si = static_cast<std::int64_t>(s);
            for (std::int64_t e = si; e < si + g && e < static_cast<std::int64_t>(L); ++e) {
                if (D[static_cast<std::size_t>(e + 1 - u)] - D[s] > 0) offer(si, e);
            }
        }
    }
    return res;
}

SectionWitness witness_for(WordView name, const BlockReference& ref, std::size_t s, std::size_t e, bool include_last) {
    SectionWitness w;
    w.start = s;
    w.end = e;
    w.k_points = 0;
    for (std::size_t j = s; j <= e; ++j) w.k_points += name[j] != kInfiniteLetter;
    const Deviation dv = max_deviation(block_empirical(name.subspan(s, e - s + 1), ref, include_last), ref);
    w.block = dv.block;
    w.deviation = dv.value;
    return w;
}

}  // namespace

SectionScan scan_sections(WordView name, const BlockReference& ref, const Rational& eps, bool include_last,
                          unsigned jobs) {
    SectionScan out;
    const std::size_t L = name.size();
    const auto k = static_cast<std::size_t>(ref.k);
    std::vector<std::int64_t> D(L + 1, 0);
    for (std::size_t j = 0; j < L; ++j) D[j + 1] = D[j] + (name[j] != kInfiniteLetter ? 1 : 0);
    out.total_k_points = static_cast<std::size_t>(D[L]);
    // Block windows are read inside the section only (centre range shrinks).
    std::vector<std::int32_t> block_at(L, -1);
    for (std::size_t j = 0; j < L; ++j) {
        if (j + 1 < k || j + k > L) continue;
        const std::size_t idx = ref.find(name.subspan(j + 1 - k, 2 * k - 1));
        if (idx != Language::npos) block_at[j] = static_cast<std::int32_t>(idx);
    }
    const auto results = parallel_map<BlockScanResult>(ref.blocks.size(), jobs, [&](std::size_t b) {
        return scan_block(name, block_at, static_cast<std::int32_t>(b), ref.ref[b], eps, ref.k, include_last, D);
    });
    const BlockScanResult* top = nullptr;
    for (const auto& r : results)
        if (r.found && (!top || r.best > top->best)) top = &r;
    if (top) {
        out.max_violating_k_points = top->best;
        out.worst = witness_for(name, ref, top->s, top->e, include_last);
    }
    return out;
}

SectionScan scan_sections_naive(WordView name, const BlockReference& ref, const Rational& eps, bool include_last) {
    SectionScan out;
    const std::size_t L = name.size();
    const std::size_t k = static_cast<std::size_t>(ref.k);
    for (Letter a : name) out.total_k_points += a != kInfiniteLetter;
    for (std::size_t s = 0; s < L; ++s) {
        for (std::size_t e = s; e < L; ++e) {
            // Counts restricted to windows inside [s, e].
            const std::size_t stop = include_last ? e + 1 : e;
            std::size_t den = 0, kp = 0;
            std::vector<std::size_t> counts(ref.blocks.size(), 0);
            for (std::size_t j = s; j <= e; ++j) kp += name[j] != kInfiniteLetter;
            for (std::size_t j = s; j < stop; ++j) {
                den += name[j] != kInfiniteLetter;
                if (j + 1 < s + k || j + k > e + 1) continue;
                const std::size_t idx = ref.find(name.subspan(j + 1 - k, 2 * k - 1));
                if (idx != Language::npos) ++counts[idx];
            }
            if (den == 0) continue;
            bool viol = false;
            for (std::size_t i = 0; i < counts.size() && !viol; ++i)
                viol = abs(Rational(static_cast<long long>(counts[i]), static_cast<long long>(den)) - ref.ref[i]) >= eps;
            if (viol && kp > out.max_violating_k_points) {
                out.max_violating_k_points = kp;
                SectionWitness w;
                w.start = s;
                w.end = e;
                w.k_points = kp;
                out.worst = w;
            }
        }
    }
    return out;
}

UniformityCertificate uniformity_check(WordView name, const BlockReference& ref, std::size_t H, const Rational& eps,
                                       bool include_last, unsigned jobs) {
    UniformityCertificate c;
    c.H = H;
    c.k = ref.k;
    c.eps = eps;
    const SectionScan s = scan_sections(name, ref, eps, include_last, jobs);
    c.max_violating_k_points = s.max_violating_k_points;
    c.total_k_points = s.total_k_points;
    c.worst = s.worst;
    c.pass = !s.worst || s.max_violating_k_points < H;
    return c;
}

UniformityCertificate uniformity_check_fibers(const std::vector<Word>& names, const BlockReference& ref,
                                              std::size_t H, const Rational& eps, bool include_last) {
    UniformityCertificate c;
    c.H = H;
    c.k = ref.k;
    c.eps = eps;
    c.pass = true;
    for (const Word& n : names) {
        std::size_t kp = 0;
        for (Letter a : n) kp += a != kInfiniteLetter;
        c.total_k_points += kp;
        if (kp < H) continue;
        const Deviation dv = max_deviation(block_empirical(n, ref, include_last), ref);
        if (dv.value >= eps) {
            c.pass = false;
            if (!c.worst || kp > c.worst->k_points) c.worst = SectionWitness{0, n.size() - 1, kp, dv.block, dv.value};
            c.max_violating_k_points = std::max(c.max_violating_k_points, kp);
        }
    }
    return c;
}

EmpiricalN empirical_N(WordView name, const BlockReference& ref, const Rational& eps, bool include_last, unsigned jobs) {
    EmpiricalN out;
    const SectionScan s = scan_sections(name, ref, eps, include_last, jobs);
    out.total_k_points = s.total_k_points;
    out.worst = s.worst;
    out.N = s.worst ? s.max_violating_k_points + 1 : 1;
    out.found = out.N <= s.total_k_points / 2;
    return out;
}

Word host_name(const SubstitutionLanguage& lang, const WindowPartition& alpha, unsigned depth) {
    const Word& host = lang.seed_word(depth);
    const auto left = static_cast<std::size_t>(std::max(0, -alpha.lo()));
    const auto right = static_cast<std::size_t>(std::max(0, alpha.hi()));
    if (host.size() <= left + right) throw ResourceError("scan word too short for the partition window");
    return alpha.name(host, left, host.size() - right);
}

}  // namespace symerg
