#include "symerg/errors.hpp"
#include "symerg/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace symerg::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(SYMERG_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa initial_isa() {
    if (const char* env = std::getenv("SYMERG_ISA")) {
        if (std::string_view(env) == "scalar") return Isa::scalar;
    }
    return detected_isa();
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
    static const Isa isa = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
    return isa;
}

bool isa_supported(Isa isa) { return isa == Isa::scalar || detected_isa() == Isa::avx2; }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!isa_supported(isa)) throw InputError("ISA not supported here: " + std::string(isa_name(isa)));
    active().store(isa, std::memory_order_relaxed);
}

bool birkhoff_scan_exact_in_double(const BirkhoffWindowScan& s) {
    // |sa*c_den - c_num*sk| * e_den and e_num*c_den*sk must stay below 2^53.
    constexpr double limit = 9007199254740992.0;  // 2^53
    const double sk_max = static_cast<double>(s.k_prefix.empty() ? 0 : s.k_prefix.back());
    const double sa_max = static_cast<double>(s.a_prefix.empty() ? 0 : s.a_prefix.back());
    const double cn = static_cast<double>(std::llabs(s.c_num));
    const double cd = static_cast<double>(s.c_den);
    const double lhs = (sa_max * cd + cn * sk_max) * static_cast<double>(s.e_den);
    const double rhs = static_cast<double>(s.e_num) * cd * sk_max;
    return lhs < limit && rhs < limit;
}

std::size_t count_equal(WordView w, Letter a) {
    return active_isa() == Isa::avx2 ? avx2::count_equal(w, a) : scalar::count_equal(w, a);
}

std::size_t count_not_equal(WordView w, Letter a) {
    return active_isa() == Isa::avx2 ? avx2::count_not_equal(w, a) : scalar::count_not_equal(w, a);
}

void find_occurrences(WordView host, WordView pattern, std::vector<std::size_t>& out) {
    if (active_isa() == Isa::avx2)
        avx2::find_occurrences(host, pattern, out);
    else
        scalar::find_occurrences(host, pattern, out);
}

std::size_t count_occurrences(WordView host, WordView pattern) {
    std::vector<std::size_t> pos;
    find_occurrences(host, pattern, pos);
    return pos.size();
}

std::int64_t birkhoff_max_violation(const BirkhoffWindowScan& s) {
    if (active_isa() == Isa::avx2 && birkhoff_scan_exact_in_double(s)) return avx2::birkhoff_max_violation(s);
    return scalar::birkhoff_max_violation(s);
}

}  // namespace symerg::kernels
