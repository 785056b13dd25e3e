#include "symerg/substitution.hpp"

#include "symerg/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <limits>

namespace symerg {

Substitution::Substitution(std::size_t alphabet_size, std::vector<Word> images, Letter seed)
    : images_(std::move(images)), seed_(seed) {
    if (alphabet_size < 2) throw InputError("alphabet size must be at least 2");
    if (images_.size() != alphabet_size) throw InputError("one image per letter required");
    for (const Word& img : images_) {
        if (img.empty()) throw InputError("substitution images must be nonempty");
        check_letters(img);
    }
    const Word& one = images_[0];
    if (one.size() < 2 || !is_all_ones(one)) throw InputError("image of 1 must be 1^m with m >= 2");
    for (std::size_t a = 2; a <= alphabet_size; ++a) {
        const Word& img = images_[a - 1];
        if (img.front() == kInfiniteLetter || img.back() == kInfiniteLetter)
            throw InputError("image of letter " + std::to_string(a) + " must begin and end with a letter != 1");
    }
    if (seed_ < 2 || seed_ > alphabet_size) throw InputError("seed must be a letter != 1");
    const Word& s = images_[seed_ - 1];
    if (s.front() != seed_ || s.back() != seed_)
        throw InputError("image of the seed must begin and end with the seed");
}

Substitution Substitution::default_substitution() { return Substitution(2, {Word{1, 1}, Word{2, 1, 2}}, 2); }

const Word& Substitution::image(Letter a) const {
    if (a < 1 || a > images_.size()) throw InputError("letter " + std::to_string(a) + " outside the alphabet");
    return images_[a - 1];
}

void Substitution::check_letters(WordView w) const {
    for (Letter a : w)
        if (a < 1 || a > images_.size()) throw InputError("letter " + std::to_string(a) + " outside the alphabet");
}

Word Substitution::substitute(WordView w) const {
    check_letters(w);
    Word out;
    for (Letter a : w) {
        const Word& img = images_[a - 1];
        out.insert(out.end(), img.begin(), img.end());
    }
    return out;
}

std::size_t Substitution::iterate_length(Letter a, unsigned n) const {
    constexpr std::size_t sat = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> len(images_.size(), 1);
    for (unsigned k = 0; k < n; ++k) {
        std::vector<std::size_t> next(images_.size(), 0);
        for (std::size_t b = 0; b < images_.size(); ++b) {
            std::size_t total = 0;
            for (Letter c : images_[b]) {
                const std::size_t add = len[c - 1];
                total = (add > sat - total) ? sat : total + add;
            }
            next[b] = total;
        }
        len = std::move(next);
    }
    return len.at(a - 1);
}

Word Substitution::iterate(Letter a, unsigned n, std::size_t cap) const {
    image(a);
    const std::size_t need = iterate_length(a, n);
    if (need > cap) {
        unsigned max_n = 0;
        while (iterate_length(a, max_n + 1) <= cap) ++max_n;
        throw ResourceError("sigma^" + std::to_string(n) + "(" + std::to_string(a) + ") has " +
                            std::to_string(need) + " letters, above the cap of " + std::to_string(cap) +
                            "; largest admissible n is " + std::to_string(max_n));
    }
    Word w{a};
    for (unsigned k = 0; k < n; ++k) w = substitute(w);
    return w;
}

nlohmann::json Substitution::to_json() const {
    nlohmann::json images = nlohmann::json::object();
    for (std::size_t a = 1; a <= images_.size(); ++a) {
        if (images_.size() <= 9)
            images[std::to_string(a)] = to_string(images_[a - 1]);
        else
            images[std::to_string(a)] = images_[a - 1];
    }
    return {{"alphabet_size", images_.size()}, {"images", images}, {"seed", seed_}};
}

Substitution Substitution::from_json(const nlohmann::json& j) {
    try {
        const auto k = j.at("alphabet_size").get<std::size_t>();
        std::vector<Word> images(k);
        const auto& im = j.at("images");
        for (std::size_t a = 1; a <= k; ++a) {
            const auto& v = im.at(std::to_string(a));
            if (v.is_string())
                images[a - 1] = parse_word(v.get<std::string>());
            else
                images[a - 1] = v.get<Word>();
        }
        return Substitution(k, std::move(images), j.at("seed").get<Letter>());
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("substitution config: ") + e.what());
    }
}

Substitution Substitution::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open substitution file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("substitution file '" + path + "': " + e.what());
    }
    return from_json(j);
}

}  // namespace symerg
