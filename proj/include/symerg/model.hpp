#pragma once

#include "symerg/measure.hpp"
#include "symerg/partition.hpp"
#include "symerg/subshift.hpp"
#include "symerg/tower.hpp"
#include "symerg/uniformity.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace symerg {

struct BuildConfig {
    Substitution sub = Substitution::default_substitution();
    std::optional<SubscriptMap> pi;  // Y -> Z; identity when absent
    int stages = 3;
    std::vector<std::string> E = {"[.2]", "[.212]", "[.2]"};    // on Y
    std::vector<std::string> D = {"[.2]", "[.212]", "[.2112]"};  // on Z
    unsigned scan_depth = 14;
    int max_tower_n = 48;
    int alpha_T_range = 32;
    bool include_last = false;
    unsigned jobs = 1;
    // Extra scans of the final partitions at (N, k, 1/2^{n_k}) for all k.
    bool final_uniformity = true;

    static BuildConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct StageParameters {
    int n = 0;
    Rational delta{};
    Rational min_ratio{};
    Rational delta_bound{};
};
// Least n > n_prev with 1/2^n < min_ratio / 3, and the largest 2^-e strictly
// below min{ 1/B, mu_K/B, 1/2^(i+2) } with B = (2i-1) * 4 * 2^n * r^(4i-1).
StageParameters choose_parameters(int i, const Rational& min_ratio, const Rational& mu_K, std::size_t r, int n_prev);

// The largest 2^-e strictly below x > 0.
Rational dyadic_below(const Rational& x);

struct FiberClass {
    Word name;  // J-name over [-(k-1), h+k-2]
    Rational measure{};
    Rational deviation{};
    bool good = false;
};

struct ColumnFibers {
    std::size_t column = 0;
    std::size_t height = 0;
    std::size_t k_points = 0;
    Rational base_measure{};
    std::vector<FiberClass> classes;
    std::optional<std::size_t> chosen;  // good class copied into bad ones
};

struct CopyLog {
    struct Entry {
        std::size_t column = 0;
        std::size_t good_class = 0;
        std::vector<std::size_t> bad_classes;
        Rational changed{};
    };
    std::vector<Entry> entries;
    Rational changed_measure{};
};

struct StageTower {
    int n = 0;
    std::optional<KRTower> tower;  // on Z
    std::vector<ColumnFibers> columns;
    Rational coverage{};    // mu(K within good fibers)
    Rational R_measure{};   // columns without a good fiber
    std::vector<std::pair<int, Rational>> trajectory;  // (n, coverage) tried
};

struct ProofBound {
    bool computable = false;
    std::string note;
    Rational eps{};
    std::size_t max_fiber_k = 0, min_fiber_k = 0;
    Rational max_fiber_deviation{};
    std::size_t m0 = 0;
    std::size_t M = 0;
    std::vector<std::pair<std::size_t, Rational>> eps_table;  // (m, eps_m)
};
ProofBound proof_bound_M(std::size_t max_k, std::size_t min_k, const Rational& fiber_dev, const Rational& eps, int k);

// min a_i/b_i <= sum a_i / sum b_i <= max a_i/b_i for positive terms.
bool mediant_holds(const std::vector<std::pair<Rational, Rational>>& terms);

struct LedgerEntry {
    int stage = 0;
    std::string property;
    bool pass = false;
    std::string detail;
};

struct Stage {
    int i = 0;
    StageParameters params;
    std::size_t r = 1;
    std::size_t N = 0;  // empirical uniformity threshold at eps = 1/2^n
    bool N_found = false;
    int k = 1;
    std::optional<Clopen> E;
    std::optional<WindowPartition> gamma;  // on Z
    int gamma_n = 0;
    std::optional<WindowPartition> beta;
    std::optional<WindowPartition> tau;
    std::optional<WindowPartition> J;
    std::vector<WindowPartition> alpha;  // alpha_{i,1..i}
    std::optional<SubscriptMap> first_coordinate;  // J_i -> alpha_{i-1,i-1}
    StageTower tower;
    CopyLog copy;
    Rational copy_distance{};
    ProofBound bound;
    std::optional<SectionScan> bound_scan;
    Rational tau_error{};
    std::vector<SubscriptMap> f_beta;  // f_{beta_j, alpha_{i,j}}, j = 1..i
};

struct BuildContext {
    BuildConfig config;
    std::shared_ptr<const SubstitutionLanguage> Y;
    LanguagePtr Z;
    SubscriptMap pi;
    std::shared_ptr<const SubstitutionMeasure> muY;
    MeasurePtr muZ;
    std::optional<Clopen> KZ;  // K_{gamma_1} on Z
    std::optional<Clopen> K;   // its pullback on Y
    Rational mu_K{};

    explicit BuildContext(BuildConfig cfg);
    Clopen pull(const Clopen& z) const;
    WindowPartition pull(const WindowPartition& z) const;
};

struct StageState {
    std::vector<Stage> stages;
    std::vector<LedgerEntry> ledger;
    bool pass = true;
    nlohmann::json final_uniformity = nlohmann::json::array();
};

// Fiber classes of a principal column of the pulled-back tower: Y-extensions
// of the column pattern grouped by their P-name over [-ctx, h-1+ctx].
std::vector<std::pair<Word, Rational>> fiber_names(const BuildContext& ctx, const KRTower& tower, std::size_t column,
                                                   const WindowPartition& P, int context);

StageTower build_tower(const BuildContext& ctx, const WindowPartition& J, const BlockReference& ref, int k,
                       const Rational& delta, std::size_t min_hK, int n_min);

// Copies the chosen good fiber's J-name over the bad fibers of its column.
// Columns with no good fiber keep their names.
std::pair<WindowPartition, CopyLog> copy_names(const BuildContext& ctx, const StageTower& t, const WindowPartition& J,
                                               const WindowPartition& beta, int k);

// Coarsening by the first join coordinate.
WindowPartition derive_lower(const WindowPartition& alpha, const SubscriptMap& first_coordinate);

StageState run_stages(const BuildContext& ctx);

struct TriangleResult {
    bool pass = true;
    std::vector<std::string> checked;
    std::vector<std::string> skipped;
    std::string failure;
};
TriangleResult triangle_check(const BuildContext& ctx, const StageState& state, int radius = 8);


}  // namespace symerg
