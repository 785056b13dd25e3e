#include "symerg/language.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <unordered_set>

namespace symerg {

bool Language::contains(WordView w) const { return index_of(w) != npos; }

std::size_t Language::index_of(WordView w) const {
    if (w.size() > horizon()) throw ResourceError("word length " + std::to_string(w.size()) + " beyond horizon");
    const auto& fs = factors(w.size());
    auto it = std::lower_bound(fs.begin(), fs.end(), w,
                               [](const Word& a, WordView b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); });
    if (it == fs.end() || !std::equal(it->begin(), it->end(), w.begin(), w.end())) return npos;
    return static_cast<std::size_t>(it - fs.begin());
}

std::vector<Word> distinct_factors(WordView host, std::size_t len) {
    std::vector<Word> out;
    if (len == 0) {
        out.emplace_back();
        return out;
    }
    if (len > host.size()) return out;
    const std::size_t count = host.size() - len + 1;
    // Rolling hash of every window; the set compares letters on hash hits.
    constexpr std::uint64_t base = 0x100000001b3ULL;
    std::uint64_t top = 1;
    for (std::size_t i = 1; i < len; ++i) top *= base;
    std::vector<std::uint64_t> h(count);
    std::uint64_t cur = 0;
    for (std::size_t i = 0; i < len; ++i) cur = cur * base + host[i];
    h[0] = cur;
    for (std::size_t i = 1; i < count; ++i) {
        cur = (cur - host[i - 1] * top) * base + host[i + len - 1];
        h[i] = cur;
    }
    auto hasher = [&](std::size_t p) { return static_cast<std::size_t>(h[p] ^ (h[p] >> 29)); };
    auto eq = [&](std::size_t a, std::size_t b) {
        return h[a] == h[b] && std::equal(host.begin() + a, host.begin() + a + len, host.begin() + b);
    };
    std::unordered_set<std::size_t, decltype(hasher), decltype(eq)> seen(64, hasher, eq);
    for (std::size_t p = 0; p < count; ++p) seen.insert(p);
    out.reserve(seen.size());
    for (std::size_t p : seen) out.push_back(slice(host, p, len));
    std::sort(out.begin(), out.end());
    return out;
}

SubstitutionLanguage::SubstitutionLanguage(Substitution sub, std::size_t horizon, std::size_t length_cap)
    : sub_(std::move(sub)), horizon_(horizon), cap_(length_cap) {
    if (horizon_ == 0) throw InputError("language horizon must be positive");
}

const Word& SubstitutionLanguage::seed_word(unsigned n) const {
    std::lock_guard lock(mu_);
    auto it = iterates_.find(n);
    if (it != iterates_.end()) return it->second;
    Word w = sub_.iterate(sub_.seed(), n, cap_);
    return iterates_.emplace(n, std::move(w)).first->second;
}

namespace {

std::vector<Word> with_ones(std::vector<Word> fs, std::size_t len) {
    Word o = ones(len);
    auto it = std::lower_bound(fs.begin(), fs.end(), o);
    if (it == fs.end() || *it != o) fs.insert(it, std::move(o));
    return fs;
}

// Least n with |sigma^n(a)| >= len for every letter a.
unsigned growth_depth(const Substitution& sub, std::size_t len) {
    unsigned n = 0;
    for (;;) {
        bool all = true;
        for (Letter a = 1; a <= sub.alphabet_size() && all; ++a) all = sub.iterate_length(a, n) >= len;
        if (all) return n;
        ++n;
    }
}

}  // namespace

const SubstitutionLanguage::Entry& SubstitutionLanguage::entry(std::size_t len) const {
    if (len > horizon_)
        throw ResourceError("factor length " + std::to_string(len) + " exceeds the language horizon " +
                            std::to_string(horizon_));
    {
        std::lock_guard lock(mu_);
        auto it = cache_.find(len);
        if (it != cache_.end()) return it->second;
    }
    Entry e;
    if (len == 0) {
        e.words = {Word{}};
    } else {
        const unsigned min_depth = growth_depth(sub_, len) + 2;
        std::vector<Word> before, prev;
        bool have_prev = false;
        for (unsigned n = 0;; ++n) {
            if (sub_.iterate_length(sub_.seed(), n) > cap_) {
                throw StabilizationError("factors of length " + std::to_string(len) +
                                             " did not stabilize before the length cap (depth " +
                                             std::to_string(n - 1) + ")",
                                         before, prev);
            }
            std::vector<Word> cur = with_ones(distinct_factors(seed_word(n), len), len);
            if (have_prev && cur == prev && n - 1 >= min_depth) {
                e.words = std::move(cur);
                e.depth = n - 1;
                break;
            }
            before = std::move(prev);
            prev = std::move(cur);
            have_prev = true;
        }
    }
    std::lock_guard lock(mu_);
    return cache_.emplace(len, std::move(e)).first->second;
}

const std::vector<Word>& SubstitutionLanguage::factors(std::size_t len) const { return entry(len).words; }

unsigned SubstitutionLanguage::stabilization_depth(std::size_t len) const { return entry(len).depth; }

CodedLanguage::CodedLanguage(LanguagePtr base, int lo, int hi, Code code, std::size_t alphabet_size)
    : base_(std::move(base)), lo_(lo), hi_(hi), code_(std::move(code)), alphabet_(alphabet_size) {
    if (!base_) throw InputError("coded language needs a base language");
    if (lo_ > hi_) throw InputError("coded language window is empty");
}

std::size_t CodedLanguage::horizon() const {
    const auto w = static_cast<std::size_t>(hi_ - lo_);
    return base_->horizon() > w ? base_->horizon() - w : 0;
}

const std::vector<Word>& CodedLanguage::factors(std::size_t len) const {
    if (len > horizon()) throw ResourceError("coded factor length " + std::to_string(len) + " beyond horizon");
    {
        std::lock_guard lock(mu_);
        auto it = cache_.find(len);
        if (it != cache_.end()) return it->second;
    }
    std::vector<Word> out;
    if (len == 0) {
        out.emplace_back();
    } else {
        const auto w = static_cast<std::size_t>(hi_ - lo_) + 1;
        for (const Word& u : base_->factors(len + w - 1)) {
            Word name(len);
            for (std::size_t j = 0; j < len; ++j) name[j] = code_(WordView(u).subspan(j, w));
            out.push_back(std::move(name));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    std::lock_guard lock(mu_);
    return cache_.emplace(len, std::move(out)).first->second;
}

}  // namespace symerg
