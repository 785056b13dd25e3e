#include "symerg/clopen.hpp"

#include "symerg/errors.hpp"

#include <algorithm>
#include <iterator>

namespace symerg {

Clopen::Clopen(LanguagePtr lang, int lo, int hi, std::vector<Word> words)
    : lang_(std::move(lang)), lo_(lo), hi_(hi), words_(std::move(words)) {
    if (!lang_) throw InputError("clopen set without a language");
    if (lo_ > hi_) throw InputError("clopen window is empty");
    std::sort(words_.begin(), words_.end());
    words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
    for (const Word& w : words_) {
        if (w.size() != width()) throw InputError("clopen word has the wrong length");
        if (!lang_->contains(w)) throw InputError("clopen word " + to_string(w, lang_->alphabet_size()) + " not in the language");
    }
}

Clopen Clopen::empty(LanguagePtr lang) { return Clopen(std::move(lang), 0, 0, {}); }

Clopen Clopen::whole(LanguagePtr lang) {
    auto fs = lang->factors(1);
    return Clopen(std::move(lang), 0, 0, fs);
}

Clopen Clopen::cylinder_at(LanguagePtr lang, int lo, WordView w) {
    if (w.empty()) return whole(std::move(lang));
    const int hi = lo + static_cast<int>(w.size()) - 1;
    std::vector<Word> ws;
    if (lang->contains(w)) ws.emplace_back(w.begin(), w.end());
    return Clopen(std::move(lang), lo, hi, std::move(ws));
}

Clopen Clopen::cylinder(LanguagePtr lang, WordView u, WordView v) {
    return cylinder_at(std::move(lang), -static_cast<int>(u.size()), concat(u, v));
}

Clopen Clopen::parse(LanguagePtr lang, std::string_view text) {
    std::vector<Clopen> parts;
    std::size_t start = 0;
    while (true) {
        auto bar = text.find('|', start);
        std::string_view item = text.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (item.size() >= 2 && item.front() == '[' && item.back() == ']') item = item.substr(1, item.size() - 2);
        if (item.empty()) throw InputError("empty cylinder in '" + std::string(text) + "'");
        Word u, v;
        auto dot = item.find('.');
        if (dot == std::string_view::npos) {
            v = parse_word(item);
        } else {
            u = parse_word(item.substr(0, dot));
            v = parse_word(item.substr(dot + 1));
        }
        for (Letter a : concat(u, v))
            if (a > lang->alphabet_size()) throw InputError("cylinder letter outside the alphabet");
        parts.push_back(cylinder(lang, u, v));
        if (bar == std::string_view::npos) break;
        start = bar + 1;
    }
    Clopen out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) out = out.unite(parts[i]);
    return out;
}

Clopen Clopen::aligned(int lo, int hi) const {
    if (lo > lo_ || hi < hi_) throw InputError("alignment must enlarge the window");
    if (lo == lo_ && hi == hi_) return *this;
    const auto len = static_cast<std::size_t>(hi - lo + 1);
    const auto off = static_cast<std::size_t>(lo_ - lo);
    std::vector<Word> out;
    for (const Word& w : lang_->factors(len)) {
        WordView mid = WordView(w).subspan(off, width());
        if (std::binary_search(words_.begin(), words_.end(), mid,
                               [](const auto& a, const auto& b) {
                                   return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                               }))
            out.push_back(w);
    }
    Clopen c(*this);
    c.lo_ = lo;
    c.hi_ = hi;
    c.words_ = std::move(out);
    return c;
}

Clopen Clopen::normalized() const {
    if (words_.empty()) return empty(lang_);
    Clopen cur = *this;
    // Drop an edge coordinate whenever the projected set aligns back exactly.
    auto try_drop = [&](bool left) {
        if (cur.lo_ == cur.hi_) return false;
        const int lo = left ? cur.lo_ + 1 : cur.lo_;
        const int hi = left ? cur.hi_ : cur.hi_ - 1;
        std::vector<Word> proj;
        for (const Word& w : cur.words_) proj.push_back(slice(w, left ? 1 : 0, w.size() - 1));
        Clopen cand(lang_, lo, hi, std::move(proj));
        if (cand.aligned(cur.lo_, cur.hi_).words_ == cur.words_) {
            cur = std::move(cand);
            return true;
        }
        return false;
    };
    while (try_drop(true) || try_drop(false)) {
    }
    if (cur.words_ == lang_->factors(cur.width())) return whole(lang_);
    return cur;
}

bool Clopen::contains_word_at(WordView x, int origin) const {
    const int a = origin + lo_;
    if (a < 0 || static_cast<std::size_t>(origin + hi_) >= x.size()) throw InputError("window outside the given word");
    WordView mid = x.subspan(static_cast<std::size_t>(a), width());
    return std::binary_search(words_.begin(), words_.end(), mid, [](const auto& l, const auto& r) {
        return std::lexicographical_compare(l.begin(), l.end(), r.begin(), r.end());
    });
}

bool Clopen::contains_fixed_point() const { return std::binary_search(words_.begin(), words_.end(), ones(width())); }

Clopen Clopen::complement() const {
    std::vector<Word> out;
    const auto& all = lang_->factors(width());
    std::set_difference(all.begin(), all.end(), words_.begin(), words_.end(), std::back_inserter(out));
    Clopen c(*this);
    c.words_ = std::move(out);
    return c;
}

namespace {

std::pair<Clopen, Clopen> common(const Clopen& a, const Clopen& b) {
    if (a.language() != b.language()) throw InputError("clopen sets over different languages");
    const int lo = std::min(a.lo(), b.lo());
    const int hi = std::max(a.hi(), b.hi());
    return {a.aligned(lo, hi), b.aligned(lo, hi)};
}

}  // namespace

Clopen Clopen::unite(const Clopen& o) const {
    auto [a, b] = common(*this, o);
    std::vector<Word> out;
    std::set_union(a.words_.begin(), a.words_.end(), b.words_.begin(), b.words_.end(), std::back_inserter(out));
    a.words_ = std::move(out);
    return a;
}

Clopen Clopen::intersect(const Clopen& o) const {
    auto [a, b] = common(*this, o);
    std::vector<Word> out;
    std::set_intersection(a.words_.begin(), a.words_.end(), b.words_.begin(), b.words_.end(),
                          std::back_inserter(out));
    a.words_ = std::move(out);
    return a;
}

Clopen Clopen::minus(const Clopen& o) const {
    auto [a, b] = common(*this, o);
    std::vector<Word> out;
    std::set_difference(a.words_.begin(), a.words_.end(), b.words_.begin(), b.words_.end(), std::back_inserter(out));
    a.words_ = std::move(out);
    return a;
}

Clopen Clopen::shifted(int k) const {
    Clopen c(*this);
    c.lo_ -= k;
    c.hi_ -= k;
    return c;
}

bool Clopen::subset_of(const Clopen& o) const { return minus(o).is_empty(); }

bool Clopen::operator==(const Clopen& o) const {
    if (lang_ != o.lang_) return false;
    auto [a, b] = common(*this, o);
    return a.words_ == b.words_;
}

std::string Clopen::str() const {
    if (words_.empty()) return "{}";
    std::string out;
    const std::size_t k = lang_->alphabet_size();
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (i) out += '|';
        const Word& w = words_[i];
        // Print as [u.v] when the window straddles 0, else with an offset.
        if (lo_ <= 0 && hi_ >= -1) {
            const auto cut = static_cast<std::size_t>(-lo_);
            out += '[' + to_string(slice(w, 0, cut), k) + '.' + to_string(slice(w, cut, w.size() - cut), k) + ']';
        } else {
            out += '[' + to_string(w, k) + ']' + '@' + std::to_string(lo_);
        }
    }
    return out;
}

std::pair<int, int> union_window(const std::vector<Clopen>& sets) {
    if (sets.empty()) return {0, 0};
    int lo = sets.front().lo(), hi = sets.front().hi();
    for (const Clopen& c : sets) {
        lo = std::min(lo, c.lo());
        hi = std::max(hi, c.hi());
    }
    return {lo, hi};
}

}  // namespace symerg
