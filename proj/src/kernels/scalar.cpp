#include "symerg/kernels.hpp"

#include <algorithm>
#include <cstdlib>

namespace symerg::kernels::scalar {

std::size_t count_equal(WordView w, Letter a) {
    return static_cast<std::size_t>(std::count(w.begin(), w.end(), a));
}

std::size_t count_not_equal(WordView w, Letter a) { return w.size() - count_equal(w, a); }

void find_occurrences(WordView host, WordView pattern, std::vector<std::size_t>& out) {
    out.clear();
    if (pattern.empty() || pattern.size() > host.size()) return;
    const std::size_t last = host.size() - pattern.size();
    for (std::size_t i = 0; i <= last; ++i) {
        if (std::equal(pattern.begin(), pattern.end(), host.begin() + static_cast<std::ptrdiff_t>(i)))
            out.push_back(i);
    }
}

std::int64_t birkhoff_max_violation(const BirkhoffWindowScan& s) {
    using i128 = __int128;
    std::int64_t best = 0;
    for (std::int64_t n = 1; n <= s.n_max; ++n) {
        const std::int64_t sk = s.k_prefix[static_cast<std::size_t>(s.p + n)] -
                                s.k_prefix[static_cast<std::size_t>(s.p - n)];
        if (sk <= 0) continue;
        const std::int64_t sa = s.a_prefix[static_cast<std::size_t>(s.p + n)] -
                                s.a_prefix[static_cast<std::size_t>(s.p - n)];
        i128 diff = static_cast<i128>(sa) * s.c_den - static_cast<i128>(s.c_num) * sk;
        if (diff < 0) diff = -diff;
        const i128 lhs = diff * s.e_den;
        const i128 rhs = static_cast<i128>(s.e_num) * s.c_den * sk;
        if (lhs >= rhs) best = std::max(best, sk);
    }
    return best;
}

}  // namespace symerg::kernels::scalar
