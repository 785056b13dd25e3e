#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symerg {

// Letters are 1..alphabet_size; letter 1 is the distinguished "infinite"
// symbol whose bi-infinite repetition is the unique fixed point.
using Letter = std::uint16_t;
using Word = std::vector<Letter>;
using WordView = std::span<const Letter>;

inline constexpr Letter kInfiniteLetter = 1;

// Digits for alphabets up to 9, otherwise comma separated integers.
std::string to_string(WordView w, std::size_t alphabet_size = 9);

// Accepts a digit string ("212") or comma separated integers ("1,10,2").
// The empty string parses to the empty word.
Word parse_word(std::string_view text);

inline Word ones(std::size_t n) { return Word(n, kInfiniteLetter); }

inline bool is_all_ones(WordView w) {
    for (Letter a : w)
        if (a != kInfiniteLetter) return false;
    return true;
}

inline Word concat(WordView a, WordView b) {
    Word out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline Word slice(WordView w, std::size_t pos, std::size_t len) {
    return Word(w.begin() + static_cast<std::ptrdiff_t>(pos),
                w.begin() + static_cast<std::ptrdiff_t>(pos + len));
}

// Number of letters different from 1, written |w|_{not 1} in the literature.
std::size_t non_one_weight(WordView w);

// All (overlapping) start positions of `pattern` in `host`, 1-based,
// ascending. Pattern must be nonempty.
std::vector<std::size_t> occurrences(WordView host, WordView pattern);

}  // namespace symerg
