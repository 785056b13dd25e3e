#pragma once

#include "symerg/clopen.hpp"
#include "symerg/language.hpp"
#include "symerg/rational.hpp"
#include "symerg/subshift.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace symerg {

// Shift-invariant measure on cylinders, finite on compact cylinders and
// INFINITE exactly on the cylinders 1^m (including the empty word).
class CylinderMeasure {
public:
    virtual ~CylinderMeasure() = default;
    virtual const LanguagePtr& language() const = 0;
    virtual Measure cylinder(WordView w) const = 0;
};

using MeasurePtr = std::shared_ptr<const CylinderMeasure>;

// Raised when a frequency does not settle; carries the ratio trajectory.
class FrequencyError : public ResourceError {
public:
    FrequencyError(const std::string& what, std::vector<Rational> trajectory)
        : ResourceError(what), trajectory_(std::move(trajectory)) {}
    const std::vector<Rational>& trajectory() const { return trajectory_; }

private:
    std::vector<Rational> trajectory_;
};

// Occurrences of w in sigma^n(a) for every letter a, by folding the letter
// images with junction-crossing corrections.
std::vector<Integer> occurrence_counts(const Substitution& sub, WordView w, unsigned n);

// Frequencies normalised by the seed letter. The frequency of w is the limit
// of (c_w(n+1) - c_w(n)) / (c_s(n+1) - c_s(n)), c counting occurrences in
// sigma^n(seed); it is certified when three consecutive depths agree.
class SubstitutionMeasure : public CylinderMeasure {
public:
    explicit SubstitutionMeasure(std::shared_ptr<const SubstitutionLanguage> lang, unsigned max_depth = 64);

    const LanguagePtr& language() const override { return base_; }
    Measure cylinder(WordView w) const override;

    // Depth at which the frequency of w was certified.
    unsigned certified_depth(WordView w) const;

private:
    struct Entry {
        Rational value;
        unsigned depth;
    };
    Entry compute(WordView w) const;

    std::shared_ptr<const SubstitutionLanguage> lang_;
    LanguagePtr base_;
    unsigned max_depth_;
    mutable std::mutex mu_;
    mutable std::map<Word, Entry> memo_;
};

// nu([u]) = sum of mu([w]) over w in L with f(w) = u.
class PushforwardMeasure : public CylinderMeasure {
public:
    PushforwardMeasure(MeasurePtr base, SubscriptMap f);

    const LanguagePtr& language() const override { return image_; }
    Measure cylinder(WordView u) const override;
    const SubscriptMap& code() const { return f_; }

private:
    MeasurePtr base_;
    SubscriptMap f_;
    LanguagePtr image_;
    mutable std::mutex mu_;
    mutable std::map<std::size_t, std::map<Word, Rational>> by_length_;
};

Measure clopen_measure(const CylinderMeasure& m, const Clopen& e);

// Kolmogorov consistency at w: mu(w) = sum_a mu(wa) = sum_a mu(aw).
bool kolmogorov_consistent(const CylinderMeasure& m, WordView w);

struct ProductDiagonal {
    Rational product;
    Rational diagonal;
};
ProductDiagonal product_vs_diagonal(const CylinderMeasure& m, const Clopen& a, const Clopen& b);
// The rectangle (S x S)^(-1)(A x B), measured by refining both sides one
// coordinate outward and summing cylinder rectangles.
ProductDiagonal product_vs_diagonal_shifted(const CylinderMeasure& m, const Clopen& a, const Clopen& b, int k);

struct BirkhoffReport {
    Clopen K;
    Clopen A;
    unsigned depth = 0;
    std::size_t scanned_letters = 0;
    Rational empirical_c{};
    Rational measure_c{};
    bool c_matches = false;
    Rational eps{};
    // Smallest m with |S_n A / S_n K - c| < eps whenever S_n K >= m, over
    // all scanned windows [p-n, p+n-1] centred at points p of K.
    std::int64_t m = 0;
    std::int64_t max_k_count = 0;
    Rational worst_deviation{};
    std::int64_t worst_k_count = 0;
    bool pass = false;
};

BirkhoffReport birkhoff_certificate(const SubstitutionLanguage& lang, const CylinderMeasure& mu, const Clopen& K,
                                    const Clopen& A, const Rational& eps, unsigned depth, unsigned jobs = 1);

}  // namespace symerg
