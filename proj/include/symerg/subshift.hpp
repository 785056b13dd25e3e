#pragma once

#include "symerg/language.hpp"
#include "symerg/substitution.hpp"
#include "symerg/word.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace symerg {

// A letter map f with f(1) = 1, surjective onto 1..target_size.
class SubscriptMap {
public:
    SubscriptMap(std::vector<Letter> image, std::size_t target_size);

    static SubscriptMap identity(std::size_t size);
    // "1:1,2:2,3:2"; the target alphabet is 1..max image.
    static SubscriptMap parse(std::string_view text);

    std::size_t source_size() const { return map_.size(); }
    std::size_t target_size() const { return target_; }
    Letter operator()(Letter a) const;

    Word apply(WordView w) const;
    // (*this) after `inner`: w -> this(inner(w)).
    SubscriptMap compose(const SubscriptMap& inner) const;

    std::string str() const;
    bool operator==(const SubscriptMap&) const = default;

private:
    std::vector<Letter> map_;
    std::size_t target_;
};

// Points of the subshift in one of three forms.
struct FixedPoint {};
// 1^inf u . v 1^inf, with v starting at coordinate 0.
struct CompactSupport {
    Word left;
    Word right;
};
// Nested iterates of the seed: sigma^n(s) occupies [0, |sigma^n(s)|) and each
// further iterate sigma^(m+1)(s) = sigma^m(s) ... sigma^m(s) is placed so that
// the previous block is alternately its prefix and its suffix.
struct Generated {
    Substitution sub;
    unsigned n = 0;
    std::size_t cap = kDefaultLengthCap;
};

class Point {
public:
    Point(FixedPoint p) : form_(p) {}  // NOLINT
    Point(CompactSupport p) : form_(std::move(p)) {}  // NOLINT
    Point(Generated p) : form_(std::move(p)) {}  // NOLINT

    bool is_fixed_point() const { return std::holds_alternative<FixedPoint>(form_); }
    std::string kind() const;

    // x_lo .. x_hi (inclusive).
    Word window(std::int64_t lo, std::int64_t hi) const;

    // (S^k x)_i = x_(i+k).
    Point shifted(std::int64_t k) const;
    Point coded(const SubscriptMap& f) const;

private:
    std::variant<FixedPoint, CompactSupport, Generated> form_;
    std::int64_t offset_ = 0;
    std::vector<SubscriptMap> codes_;
};

Word apply_code(const SubscriptMap& f, WordView w);
Point apply_code(const SubscriptMap& f, const Point& p);

// The factor language Z = phi(Y) of a 1-block code.
LanguagePtr image_language(const SubscriptMap& f, const LanguagePtr& base);
std::vector<Word> image_factors(const SubscriptMap& f, const LanguagePtr& base, std::size_t len);

// Product alphabet: the pair (a, b) is the letter (a-1)*|B| + b, so (1,1) -> 1.
inline Letter pair_letter(Letter a, Letter b, std::size_t b_size) {
    return static_cast<Letter>((a - 1) * b_size + b);
}
inline std::pair<Letter, Letter> unpair_letter(Letter p, std::size_t b_size) {
    return {static_cast<Letter>((p - 1) / b_size + 1), static_cast<Letter>((p - 1) % b_size + 1)};
}

// Product language, computed per length on demand.
class ProductLanguage : public Language {
public:
    ProductLanguage(LanguagePtr a, LanguagePtr b);

    std::size_t alphabet_size() const override { return a_->alphabet_size() * b_->alphabet_size(); }
    std::size_t horizon() const override;
    const std::vector<Word>& factors(std::size_t len) const override;

    const LanguagePtr& first() const { return a_; }
    const LanguagePtr& second() const { return b_; }
    Word pair(WordView u, WordView v) const;
    std::pair<Word, Word> split(WordView w) const;

private:
    LanguagePtr a_, b_;
    mutable std::mutex mu_;
    mutable std::map<std::size_t, std::vector<Word>> cache_;
};

std::vector<Word> product_language(const LanguagePtr& a, const LanguagePtr& b, std::size_t len);

}  // namespace symerg
