#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference
// implementation and an AVX2 variant; the variant is picked once at
// startup from CPUID and can be overridden (tests pin both and compare).

#include "symerg/word.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace symerg::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

// Best ISA supported by both the build and the running CPU.
Isa detected_isa();
// ISA currently used by the dispatching entry points below.
Isa active_isa();
// Pin the dispatch target. Requesting an unsupported ISA throws InputError.
void set_active_isa(Isa isa);
bool isa_supported(Isa isa);

// Inputs of the symmetric Birkhoff-window scan around one point p.
// `k_prefix[i]` / `a_prefix[i]` count hits of K / A strictly before i.
// For n = 1..n_max the window is [p-n, p+n-1]; it violates when
//   |S_n A / S_n K - c| >= eps,  with c = c_num/c_den, eps = e_num/e_den,
// and S_n K > 0. The scan returns the largest S_n K over violating n (0 if none).
struct BirkhoffWindowScan {
    std::span<const std::int32_t> k_prefix;
    std::span<const std::int32_t> a_prefix;
    std::int64_t p = 0;
    std::int64_t n_max = 0;
    std::int64_t c_num = 0, c_den = 1;
    std::int64_t e_num = 0, e_den = 1;
};

// Largest operand magnitude for which the AVX2 path is exact (it evaluates
// the inequality in double precision with integer-valued operands).
bool birkhoff_scan_exact_in_double(const BirkhoffWindowScan& s);

namespace scalar {
std::size_t count_equal(WordView w, Letter a);
std::size_t count_not_equal(WordView w, Letter a);
void find_occurrences(WordView host, WordView pattern, std::vector<std::size_t>& out);
std::int64_t birkhoff_max_violation(const BirkhoffWindowScan& s);
}  // namespace scalar

namespace avx2 {
std::size_t count_equal(WordView w, Letter a);
std::size_t count_not_equal(WordView w, Letter a);
void find_occurrences(WordView host, WordView pattern, std::vector<std::size_t>& out);
std::int64_t birkhoff_max_violation(const BirkhoffWindowScan& s);
}  // namespace avx2

// Dispatching entry points.
std::size_t count_equal(WordView w, Letter a);
std::size_t count_not_equal(WordView w, Letter a);
// 0-based start positions, ascending, overlapping occurrences included.
void find_occurrences(WordView host, WordView pattern, std::vector<std::size_t>& out);
std::size_t count_occurrences(WordView host, WordView pattern);
std::int64_t birkhoff_max_violation(const BirkhoffWindowScan& s);

}  // namespace symerg::kernels
