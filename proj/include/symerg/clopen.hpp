#pragma once

#include "symerg/language.hpp"
#include "symerg/word.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace symerg {

// A clopen subset of the subshift: the points x with x_[lo,hi] in `words`.
// `words` is a sorted subset of factors(hi - lo + 1).
class Clopen {
public:
    Clopen(LanguagePtr lang, int lo, int hi, std::vector<Word> words);

    static Clopen empty(LanguagePtr lang);
    static Clopen whole(LanguagePtr lang);
    // The cylinder [u.v]: x_[-|u|, |v|-1] = uv. A word not in the language
    // gives the empty set.
    static Clopen cylinder(LanguagePtr lang, WordView u, WordView v);
    static Clopen cylinder_at(LanguagePtr lang, int lo, WordView w);
    // "[u.v]" or "u.v" or "v" (the last meaning [.v]); unions with "|".
    static Clopen parse(LanguagePtr lang, std::string_view text);

    const LanguagePtr& language() const { return lang_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    std::size_t width() const { return static_cast<std::size_t>(hi_ - lo_ + 1); }
    const std::vector<Word>& words() const { return words_; }

    // Same set described on the larger window [lo, hi].
    Clopen aligned(int lo, int hi) const;
    // Smallest window describing the same set.
    Clopen normalized() const;

    bool contains_word_at(WordView x, int origin) const;
    bool is_empty() const { return words_.empty(); }
    // Contains a neighbourhood of the fixed point 1^inf.
    bool contains_fixed_point() const;
    bool compact() const { return !contains_fixed_point(); }

    Clopen complement() const;
    Clopen unite(const Clopen& o) const;
    Clopen intersect(const Clopen& o) const;
    Clopen minus(const Clopen& o) const;
    // S^k E = { S^k x : x in E }, i.e. points whose coordinates [lo-k, hi-k]
    // carry the word. With T = S, T^(-k) E corresponds to shifted(-k).
    Clopen shifted(int k) const;

    bool subset_of(const Clopen& o) const;
    bool disjoint_from(const Clopen& o) const { return intersect(o).is_empty(); }
    bool operator==(const Clopen& o) const;

    std::string str() const;

private:
    LanguagePtr lang_;
    int lo_, hi_;
    std::vector<Word> words_;
};

// Common window for a family of clopen sets.
std::pair<int, int> union_window(const std::vector<Clopen>& sets);

}  // namespace symerg
