#include "symerg/rational.hpp"

#include "symerg/errors.hpp"

#include <cctype>

namespace symerg {

std::string to_string(const Rational& r, bool always_fraction) {
    auto num = boost::multiprecision::numerator(r);
    auto den = boost::multiprecision::denominator(r);
    if (den == 1 && !always_fraction) return num.str();
    return num.str() + "/" + den.str();
}

namespace {

Integer parse_integer(std::string_view s, std::string_view whole) {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        neg = s[i] == '-';
        ++i;
    }
    if (i == s.size()) throw InputError("malformed rational: '" + std::string(whole) + "'");
    Integer v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw InputError("malformed rational: '" + std::string(whole) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return neg ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
    Integer p = parse_integer(text.substr(0, slash), text);
    Integer q = parse_integer(text.substr(slash + 1), text);
    if (q == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(p, q);
}

const Rational& Measure::value() const {
    if (!value_) throw StructuralError("arithmetic on INFINITE measure");
    return *value_;
}

}  // namespace symerg
