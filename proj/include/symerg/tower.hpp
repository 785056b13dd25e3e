#pragma once

#include "symerg/clopen.hpp"
#include "symerg/language.hpp"
#include "symerg/measure.hpp"
#include "symerg/partition.hpp"

#include <optional>
#include <string>
#include <vector>

namespace symerg {

// R_n: words w with 1^n w 1^n in L and 1^(2n) occurring in 1^n w 1^n only as
// prefix and suffix. Sorted by (length, lexicographic); "1" comes first.
struct ReturnWordSet {
    int n = 0;
    std::vector<Word> words;
    // Length l of 1^n w 1^n at which completeness was certified: every
    // factor of that length starting with 1^(2n) has a second occurrence.
    std::size_t certified_length = 0;
};

ReturnWordSet return_words(const Language& lang, int n, std::size_t horizon = 0);

// Unique factorisation of w into members of R_n (exhaustive parse).
std::vector<Word> decompose(WordView w, const ReturnWordSet& rn);

std::size_t min_nontrivial_weight(const ReturnWordSet& rn);

struct Column {
    Word word;
    std::size_t height = 0;
    bool infinite = false;
    Clopen base;  // [1^n . w 1^n]
    std::size_t k_hits = 0;
    std::vector<bool> in_K;  // level j inside K
};

struct HeightProfile {
    std::size_t h = 0;
    std::size_t h_K = 0;
    std::size_t H_K = 0;
};

// The K-R partition P_n: level j of the column over w is S^j [1^n . w 1^n].
// K defaults to the letter support {x_0 != 1}.
class KRTower {
public:
    KRTower(LanguagePtr lang, const ReturnWordSet& rn, std::optional<Clopen> K);

    const LanguagePtr& language() const { return lang_; }
    int n() const { return n_; }
    const std::vector<Column>& columns() const { return columns_; }
    const HeightProfile& profile() const { return profile_; }
    std::size_t level_count() const;
    Clopen level(std::size_t column, std::size_t j) const;
    Clopen base() const;
    // Window [-R, R] on which every level is readable.
    int radius() const;
    // (column, level) of the tower position holding the word u read on
    // [-radius, radius]; exactly one exists for a K-R partition.
    std::vector<std::pair<std::size_t, std::size_t>> levels_containing(WordView u) const;

private:
    LanguagePtr lang_;
    int n_;
    std::vector<Column> columns_;
    HeightProfile profile_;
};

KRTower kr_tower(LanguagePtr lang, int n, const std::optional<Clopen>& K);

struct PartitionCheck {
    bool pass = false;
    std::size_t words_checked = 0;
    int depth = 0;
    std::string failure;
};
// Every word of length 2R+1 lies in exactly one level.
PartitionCheck tower_partition_check(const KRTower& t);

struct LevelMap {
    std::size_t fine_column, fine_level, coarse_column, coarse_level;
};
struct RefinementWitness {
    std::vector<LevelMap> map;
    bool base_inclusion = false;
};
// Every level of `fine` (n+1) inside a level of `coarse` (n), located
// through decompose() and verified as clopen inclusion.
RefinementWitness refinement_witness(const KRTower& fine, const KRTower& coarse);

// Tower levels as a partition: atom 1 is the infinite level, the principal
// levels follow in column order.
WindowPartition tower_partition(const KRTower& t);

// gamma_i from compact open sets D_1, D_2, ...: the principal levels of
// P_{n_i} contained in K_{gamma_1} = principal part of P_{n_1}, with n_i the
// least n >= i whose window [-n, n-1] contains the windows of D_1..D_i.
struct GammaResult {
    WindowPartition gamma;
    int n = 0;
    Clopen support;
};
GammaResult gamma_sequence(LanguagePtr lang, const std::vector<Clopen>& D, int i);

}  // namespace symerg
