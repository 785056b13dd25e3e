#include "symerg/subshift.hpp"

#include "symerg/errors.hpp"

#include <algorithm>

namespace symerg {

SubscriptMap::SubscriptMap(std::vector<Letter> image, std::size_t target_size)
    : map_(std::move(image)), target_(target_size) {
    if (map_.empty()) throw InputError("subscript map has an empty source alphabet");
    if (map_[0] != kInfiniteLetter) throw InputError("subscript map must send 1 to 1");
    std::vector<bool> hit(target_ + 1, false);
    for (Letter b : map_) {
        if (b < 1 || b > target_) throw InputError("subscript map value outside the target alphabet");
        hit[b] = true;
    }
    for (std::size_t b = 1; b <= target_; ++b)
        if (!hit[b]) throw InputError("subscript map is not surjective (misses " + std::to_string(b) + ")");
}

SubscriptMap SubscriptMap::identity(std::size_t size) {
    std::vector<Letter> m(size);
    for (std::size_t a = 0; a < size; ++a) m[a] = static_cast<Letter>(a + 1);
    return SubscriptMap(std::move(m), size);
}

SubscriptMap SubscriptMap::parse(std::string_view text) {
    std::vector<std::pair<unsigned long, unsigned long>> pairs;
    std::size_t start = 0;
    auto number = [&](std::string_view s) {
        if (s.empty() || s.size() > 5) throw InputError("bad letter map '" + std::string(text) + "'");
        unsigned long v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') throw InputError("bad letter map '" + std::string(text) + "'");
            v = v * 10 + static_cast<unsigned long>(c - '0');
        }
        return v;
    };
    while (start < text.size()) {
        auto comma = text.find(',', start);
        auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        auto colon = item.find(':');
        if (colon == std::string_view::npos) throw InputError("bad letter map entry '" + std::string(item) + "'");
        pairs.emplace_back(number(item.substr(0, colon)), number(item.substr(colon + 1)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (pairs.empty()) throw InputError("empty letter map");
    std::size_t src = 0, tgt = 0;
    for (auto [a, b] : pairs) {
        src = std::max<std::size_t>(src, a);
        tgt = std::max<std::size_t>(tgt, b);
    }
    std::vector<Letter> m(src, 0);
    for (auto [a, b] : pairs) {
        if (a == 0 || b == 0) throw InputError("letter 0 in letter map");
        if (m[a - 1] != 0) throw InputError("letter " + std::to_string(a) + " mapped twice");
        m[a - 1] = static_cast<Letter>(b);
    }
    for (std::size_t a = 0; a < src; ++a)
        if (m[a] == 0) throw InputError("letter " + std::to_string(a + 1) + " missing from letter map");
    return SubscriptMap(std::move(m), tgt);
}

Letter SubscriptMap::operator()(Letter a) const {
    if (a < 1 || a > map_.size()) throw InputError("letter " + std::to_string(a) + " outside the code's source");
    return map_[a - 1];
}

Word SubscriptMap::apply(WordView w) const {
    Word out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = (*this)(w[i]);
    return out;
}

SubscriptMap SubscriptMap::compose(const SubscriptMap& inner) const {
    if (inner.target_size() != source_size()) throw InputError("subscript maps do not compose");
    std::vector<Letter> m(inner.source_size());
    for (std::size_t a = 0; a < m.size(); ++a) m[a] = (*this)(inner(static_cast<Letter>(a + 1)));
    return SubscriptMap(std::move(m), target_);
}

std::string SubscriptMap::str() const {
    std::string out;
    for (std::size_t a = 0; a < map_.size(); ++a) {
        if (a) out += ',';
        out += std::to_string(a + 1) + ':' + std::to_string(map_[a]);
    }
    return out;
}

std::string Point::kind() const {
    if (std::holds_alternative<FixedPoint>(form_)) return "fixed";
    if (std::holds_alternative<CompactSupport>(form_)) return "compact";
    return "generated";
}

namespace {

Word generated_window(const Generated& g, std::int64_t lo, std::int64_t hi) {
    const Letter s = g.sub.seed();
    unsigned m = g.n;
    std::int64_t start = 0;
    auto len_of = [&](unsigned k) {
        const std::size_t l = g.sub.iterate_length(s, k);
        if (l > g.cap) throw ResourceError("point expansion exceeds the length cap of " + std::to_string(g.cap));
        return static_cast<std::int64_t>(l);
    };
    std::int64_t len = len_of(m);
    while (lo < start || hi >= start + len) {
        const std::int64_t next = len_of(m + 1);
        if (((m - g.n) & 1u) == 1u) start = start + len - next;
        ++m;
        len = next;
    }
    const Word block = g.sub.iterate(s, m, g.cap);
    return Word(block.begin() + (lo - start), block.begin() + (hi - start + 1));
}

}  // namespace

Word Point::window(std::int64_t lo, std::int64_t hi) const {
    if (lo > hi) throw InputError("window bounds out of order");
    lo += offset_;
    hi += offset_;
    Word out;
    if (std::holds_alternative<FixedPoint>(form_)) {
        out = ones(static_cast<std::size_t>(hi - lo + 1));
    } else if (const auto* c = std::get_if<CompactSupport>(&form_)) {
        const auto left = static_cast<std::int64_t>(c->left.size());
        const auto right = static_cast<std::int64_t>(c->right.size());
        out.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (std::int64_t i = lo; i <= hi; ++i) {
            if (i < 0 && i >= -left)
                out.push_back(c->left[static_cast<std::size_t>(left + i)]);
            else if (i >= 0 && i < right)
                out.push_back(c->right[static_cast<std::size_t>(i)]);
            else
                out.push_back(kInfiniteLetter);
        }
    } else {
        out = generated_window(std::get<Generated>(form_), lo, hi);
    }
    for (const SubscriptMap& f : codes_) out = f.apply(out);
    return out;
}

Point Point::shifted(std::int64_t k) const {
    Point p = *this;
    p.offset_ += k;
    return p;
}

Point Point::coded(const SubscriptMap& f) const {
    Point p = *this;
    p.codes_.push_back(f);
    return p;
}

Word apply_code(const SubscriptMap& f, WordView w) { return f.apply(w); }

Point apply_code(const SubscriptMap& f, const Point& p) {
    if (p.is_fixed_point()) return p;
    return p.coded(f);
}

LanguagePtr image_language(const SubscriptMap& f, const LanguagePtr& base) {
    if (f.source_size() != base->alphabet_size()) throw InputError("code source does not match the language alphabet");
    return std::make_shared<CodedLanguage>(
        base, 0, 0, [f](WordView u) { return f(u[0]); }, f.target_size());
}

std::vector<Word> image_factors(const SubscriptMap& f, const LanguagePtr& base, std::size_t len) {
    return image_language(f, base)->factors(len);
}

ProductLanguage::ProductLanguage(LanguagePtr a, LanguagePtr b) : a_(std::move(a)), b_(std::move(b)) {
    if (!a_ || !b_) throw InputError("product of a missing language");
}

std::size_t ProductLanguage::horizon() const { return std::min(a_->horizon(), b_->horizon()); }

Word ProductLanguage::pair(WordView u, WordView v) const {
    if (u.size() != v.size()) throw InputError("pair words must have equal length");
    Word out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = pair_letter(u[i], v[i], b_->alphabet_size());
    return out;
}

std::pair<Word, Word> ProductLanguage::split(WordView w) const {
    Word u(w.size()), v(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) std::tie(u[i], v[i]) = unpair_letter(w[i], b_->alphabet_size());
    return {u, v};
}

const std::vector<Word>& ProductLanguage::factors(std::size_t len) const {
    if (len > horizon()) throw ResourceError("product factor length beyond horizon");
    {
        std::lock_guard lock(mu_);
        auto it = cache_.find(len);
        if (it != cache_.end()) return it->second;
    }
    std::vector<Word> out;
    for (const Word& u : a_->factors(len))
        for (const Word& v : b_->factors(len)) out.push_back(pair(u, v));
    std::sort(out.begin(), out.end());
    std::lock_guard lock(mu_);
    return cache_.emplace(len, std::move(out)).first->second;
}

std::vector<Word> product_language(const LanguagePtr& a, const LanguagePtr& b, std::size_t len) {
    return ProductLanguage(a, b).factors(len);
}

}  // namespace symerg
