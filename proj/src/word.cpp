#include "symerg/word.hpp"

#include "symerg/errors.hpp"
#include "symerg/kernels.hpp"

#include <cctype>

namespace symerg {

std::string to_string(WordView w, std::size_t alphabet_size) {
    std::string out;
    if (alphabet_size <= 9) {
        out.reserve(w.size());
        for (Letter a : w) out.push_back(static_cast<char>('0' + a));
        return out;
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(w[i]);
    }
    return out;
}

Word parse_word(std::string_view text) {
    Word w;
    if (text.find(',') == std::string_view::npos) {
        for (char c : text) {
            if (!std::isdigit(static_cast<unsigned char>(c)) || c == '0')
                throw InputError("bad letter '" + std::string(1, c) + "' in word '" + std::string(text) + "'");
            w.push_back(static_cast<Letter>(c - '0'));
        }
        return w;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        if (piece.empty()) throw InputError("empty letter in word '" + std::string(text) + "'");
        unsigned long v = 0;
        for (char c : piece) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw InputError("bad letter in word '" + std::string(text) + "'");
            v = v * 10 + static_cast<unsigned long>(c - '0');
            if (v > 65535) throw InputError("letter out of range in '" + std::string(text) + "'");
        }
        if (v == 0) throw InputError("letter 0 in word '" + std::string(text) + "'");
        w.push_back(static_cast<Letter>(v));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return w;
}

std::size_t non_one_weight(WordView w) { return kernels::count_not_equal(w, kInfiniteLetter); }

std::vector<std::size_t> occurrences(WordView host, WordView pattern) {
    if (pattern.empty()) throw InputError("occurrences: empty pattern");
    std::vector<std::size_t> pos;
    kernels::find_occurrences(host, pattern, pos);
    for (auto& p : pos) ++p;
    return pos;
}

}  // namespace symerg
