#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace symerg {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "p/q" with q > 0; integers print as "p/1" only when `always_fraction`.
std::string to_string(const Rational& r, bool always_fraction = true);

// Accepts "p/q", "p" or "-p/q". Throws InputError on malformed text or q == 0.
Rational parse_rational(std::string_view text);

inline Rational pow2_inv(unsigned e) {
    return Rational(Integer(1), Integer(1) << e);
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// A measure value that may be the distinguished INFINITE. Arithmetic on
// INFINITE is not provided; callers must branch on is_infinite().
class Measure {
public:
    Measure() = default;
    Measure(Rational v) : value_(std::move(v)) {}  // NOLINT(implicit)

    static Measure infinite() {
        Measure m;
        m.value_.reset();
        return m;
    }

    bool is_infinite() const { return !value_.has_value(); }
    const Rational& value() const;

    bool operator==(const Measure& o) const { return value_ == o.value_; }

    std::string str() const { return is_infinite() ? "INFINITE" : to_string(*value_); }

private:
    std::optional<Rational> value_ = Rational(0);
};

}  // namespace symerg
