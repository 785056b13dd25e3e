#pragma once

#include "symerg/errors.hpp"
#include "symerg/substitution.hpp"
#include "symerg/word.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace symerg {

// A factorial, biextendable language queried length by length. Factor sets
// are returned sorted and stay valid for the lifetime of the language.
class Language {
public:
    virtual ~Language() = default;

    virtual std::size_t alphabet_size() const = 0;
    // Longest length for which factors() may be asked.
    virtual std::size_t horizon() const = 0;
    virtual const std::vector<Word>& factors(std::size_t len) const = 0;

    bool contains(WordView w) const;
    // Index of w inside factors(|w|), or npos.
    std::size_t index_of(WordView w) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

using LanguagePtr = std::shared_ptr<const Language>;

// Raised when two consecutive iteration depths never agree before the
// length cap; carries both candidate factor sets for diagnosis.
class StabilizationError : public ResourceError {
public:
    StabilizationError(const std::string& what, std::vector<Word> previous, std::vector<Word> last)
        : ResourceError(what), previous_(std::move(previous)), last_(std::move(last)) {}
    const std::vector<Word>& previous() const { return previous_; }
    const std::vector<Word>& last() const { return last_; }

private:
    std::vector<Word> previous_, last_;
};

// Distinct length-`len` factors of `host`, sorted.
std::vector<Word> distinct_factors(WordView host, std::size_t len);

inline constexpr std::size_t kDefaultHorizon = 4096;

// L = union over n of Fact(sigma^n(seed)), together with every 1^m.
class SubstitutionLanguage : public Language {
public:
    explicit SubstitutionLanguage(Substitution sub, std::size_t horizon = kDefaultHorizon,
                                  std::size_t length_cap = kDefaultLengthCap);

    std::size_t alphabet_size() const override { return sub_.alphabet_size(); }
    std::size_t horizon() const override { return horizon_; }
    const std::vector<Word>& factors(std::size_t len) const override;

    const Substitution& substitution() const { return sub_; }
    std::size_t length_cap() const { return cap_; }

    // Depth n at which factors(len) was declared stable: Fact_len agrees at
    // depths n and n+1, and n is at least 2 more than the least depth at
    // which every letter image has length >= len.
    unsigned stabilization_depth(std::size_t len) const;

    // sigma^n(seed), cached. Throws ResourceError above the length cap.
    const Word& seed_word(unsigned n) const;

private:
    struct Entry {
        std::vector<Word> words;
        unsigned depth = 0;
    };
    const Entry& entry(std::size_t len) const;

    Substitution sub_;
    std::size_t horizon_;
    std::size_t cap_;
    mutable std::mutex mu_;
    mutable std::map<std::size_t, Entry> cache_;
    mutable std::map<unsigned, Word> iterates_;
};

// Names of base factors under a sliding code with window [lo, hi]:
// factors(len) = { (code(u[j..j+hi-lo]))_j : u in base.factors(len + hi - lo) }.
class CodedLanguage : public Language {
public:
    using Code = std::function<Letter(WordView)>;

    CodedLanguage(LanguagePtr base, int lo, int hi, Code code, std::size_t alphabet_size);

    std::size_t alphabet_size() const override { return alphabet_; }
    std::size_t horizon() const override;
    const std::vector<Word>& factors(std::size_t len) const override;

    const LanguagePtr& base() const { return base_; }

private:
    LanguagePtr base_;
    int lo_, hi_;
    Code code_;
    std::size_t alphabet_;
    mutable std::mutex mu_;
    mutable std::map<std::size_t, std::vector<Word>> cache_;
};

}  // namespace symerg
