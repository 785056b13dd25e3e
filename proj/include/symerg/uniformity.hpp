#pragma once

#include "symerg/measure.hpp"
#include "symerg/partition.hpp"

#include <optional>
#include <vector>

namespace symerg {

// The measure-theoretic (2k-1)-block distribution of alpha: for every
// alpha-block v != 1^(2k-1), mu(atom v of alpha_{-k+1}^{k-1}) / mu(K_alpha).
struct BlockReference {
    int k = 1;
    std::vector<Word> blocks;  // sorted
    std::vector<Rational> ref;
    Rational mu_K{};
    std::size_t find(WordView v) const;
};
BlockReference reference_distribution(const CylinderMeasure& mu, const WindowPartition& alpha, int k);

// Empirical block frequencies of a name. Position j (1-based) counts when
// its full window w_(j-k, j+k) lies inside the name; j ranges over
// 1 <= j < |w|, or 1 <= j <= |w| with include_last.
struct BlockDistribution {
    int k = 1;
    std::vector<Word> support;
    std::vector<Rational> freq;
    std::size_t denominator = 0;
};
BlockDistribution block_empirical(WordView name, const BlockReference& ref, bool include_last = false);
// Same counts for the section [first, last) of `host`, reading block
// windows from the host so that they may leave the section.
BlockDistribution block_empirical_in_context(WordView host, std::size_t first, std::size_t last,
                                             const BlockReference& ref, bool include_last = false);

struct Deviation {
    Rational value{};
    Word block;
};
Deviation max_deviation(const BlockDistribution& d, const BlockReference& ref);

struct SectionWitness {
    std::size_t start = 0;  // 0-based, inclusive
    std::size_t end = 0;    // 0-based, inclusive
    std::size_t k_points = 0;
    Word block;
    Rational deviation{};
};

// Every section [s, e] of `name` with a nonzero denominator: the largest
// number of K points (letters != 1) among sections that deviate by >= eps
// on some block.
struct SectionScan {
    std::size_t max_violating_k_points = 0;
    std::optional<SectionWitness> worst;
    std::size_t total_k_points = 0;
};
SectionScan scan_sections(WordView name, const BlockReference& ref, const Rational& eps, bool include_last = false,
                          unsigned jobs = 1);
// Reference implementation over all O(|name|^2) sections (for tests).
SectionScan scan_sections_naive(WordView name, const BlockReference& ref, const Rational& eps,
                                bool include_last = false);

struct UniformityCertificate {
    std::size_t H = 0;
    int k = 1;
    Rational eps{};
    bool pass = false;
    std::optional<SectionWitness> worst;
    std::size_t max_violating_k_points = 0;
    std::size_t total_k_points = 0;
};
UniformityCertificate uniformity_check(WordView name, const BlockReference& ref, std::size_t H, const Rational& eps,
                                       bool include_last = false, unsigned jobs = 1);
// Fibers as sections: each name is one section.
UniformityCertificate uniformity_check_fibers(const std::vector<Word>& names, const BlockReference& ref,
                                              std::size_t H, const Rational& eps, bool include_last = false);

// Smallest H passing uniformity_check on `name`; fails when that H would
// exceed half of the K points of the scanned name (no section long enough
// to witness it).
struct EmpiricalN {
    bool found = false;
    std::size_t N = 0;
    std::optional<SectionWitness> worst;
    std::size_t total_k_points = 0;
};
EmpiricalN empirical_N(WordView name, const BlockReference& ref, const Rational& eps, bool include_last = false,
                       unsigned jobs = 1);

// alpha-name of sigma^depth(seed) over the positions where alpha's window fits.
Word host_name(const SubstitutionLanguage& lang, const WindowPartition& alpha, unsigned depth);

}  // namespace symerg
