#pragma once

#include "symerg/word.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace symerg {

inline constexpr std::size_t kDefaultLengthCap = std::size_t{1} << 20;

// A substitution over letters 1..alphabet_size with a distinguished seed.
//
// Accepted substitutions satisfy:
//   * sigma(1) = 1^m with m >= 2, so 1-blocks grow without bound;
//   * sigma(a), a != 1, is nonempty and begins and ends with a letter != 1;
//   * the seed s != 1 has sigma(s) beginning and ending with s, so the words
//     sigma^n(s) are nested as prefixes and as suffixes.
class Substitution {
public:
    Substitution(std::size_t alphabet_size, std::vector<Word> images, Letter seed);

    // sigma(1) = 11, sigma(2) = 212, seed 2.
    static Substitution default_substitution();

    std::size_t alphabet_size() const { return images_.size(); }
    Letter seed() const { return seed_; }
    const Word& image(Letter a) const;

    Word substitute(WordView w) const;
    // sigma^n(a); throws ResourceError when the result would exceed `cap`.
    Word iterate(Letter a, unsigned n, std::size_t cap = kDefaultLengthCap) const;
    // |sigma^n(a)| without materialising it (saturates at SIZE_MAX).
    std::size_t iterate_length(Letter a, unsigned n) const;

    nlohmann::json to_json() const;
    static Substitution from_json(const nlohmann::json& j);
    static Substitution load(const std::string& path);

    bool operator==(const Substitution& o) const { return images_ == o.images_ && seed_ == o.seed_; }

private:
    void check_letters(WordView w) const;

    std::vector<Word> images_;
    Letter seed_;
};

}  // namespace symerg
