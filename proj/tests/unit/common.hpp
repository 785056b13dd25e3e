#pragma once

#include "symerg/language.hpp"
#include "symerg/measure.hpp"
#include "symerg/rational.hpp"
#include "symerg/word.hpp"

#include <memory>
#include <set>
#include <string>

namespace testing {

using namespace symerg;

inline std::shared_ptr<const SubstitutionLanguage> default_language() {
    static auto lang = std::make_shared<const SubstitutionLanguage>(Substitution::default_substitution());
    return lang;
}

inline std::shared_ptr<const SubstitutionMeasure> default_measure() {
    static auto mu = std::make_shared<const SubstitutionMeasure>(default_language());
    return mu;
}

inline Word W(const char* s) { return parse_word(s); }
inline Rational Q(const char* s) { return parse_rational(s); }

// Naive oracle: distinct length-len windows of host, plus 1^len.
inline std::set<Word> naive_factors(const Word& host, std::size_t len) {
    std::set<Word> out;
    for (std::size_t i = 0; i + len <= host.size(); ++i) out.insert(slice(host, i, len));
    out.insert(ones(len));
    return out;
}

// Naive oracle: overlapping occurrences by direct comparison.
inline std::size_t naive_count(const Word& host, const Word& pattern) {
    std::size_t c = 0;
    for (std::size_t i = 0; i + pattern.size() <= host.size(); ++i)
        if (std::equal(pattern.begin(), pattern.end(), host.begin() + static_cast<std::ptrdiff_t>(i))) ++c;
    return c;
}

inline std::string S(WordView w) { return to_string(w); }

}  // namespace testing
