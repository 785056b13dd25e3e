#include "symerg/report.hpp"

#include <cstdint>
#include <cstdio>

namespace symerg {

using json = nlohmann::json;

std::string config_hash(const json& config) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json with_header(const json& config, json payload) {
    json out = {{"version", kVersion}, {"config_hash", config_hash(config)}, {"config", config}};
    for (auto& [k, v] : payload.items()) out[k] = std::move(v);
    return out;
}

std::string ledger_tsv(const StageState& state) {
    std::string out = "stage\tproperty\tresult\tdetail\n";
    for (const LedgerEntry& e : state.ledger) {
        out += std::to_string(e.stage) + "\t" + e.property + "\t" + (e.pass ? "PASS" : "FAIL") + "\t" + e.detail + "\n";
    }
    return out;
}

json stage_report(const BuildContext& ctx, const StageState& state) {
    json stages = json::array();
    for (const Stage& st : state.stages) {
        json cols = json::array();
        for (const ColumnFibers& cf : st.tower.columns) {
            json classes = json::array();
            for (const FiberClass& fc : cf.classes)
                classes.push_back({{"measure", to_string(fc.measure)},
                                   {"deviation", to_string(fc.deviation)},
                                   {"good", fc.good}});
            cols.push_back({{"column", cf.column},
                            {"height", cf.height},
                            {"k_points", cf.k_points},
                            {"base_measure", to_string(cf.base_measure)},
                            {"classes", classes}});
        }
        json traj = json::array();
        for (const auto& [n, c] : st.tower.trajectory) traj.push_back({{"n", n}, {"coverage", c < 0 ? json("h_K<N") : json(to_string(c))}});
        json copies = json::array();
        for (const auto& e : st.copy.entries)
            copies.push_back({{"column", e.column}, {"good_class", e.good_class}, {"bad_classes", e.bad_classes},
                              {"changed", to_string(e.changed)}});
        json fb = json::array();
        for (const auto& f : st.f_beta) fb.push_back(f.str());
        json eps_table = json::array();
        for (const auto& [m, e] : st.bound.eps_table) eps_table.push_back({{"m", m}, {"eps_m", to_string(e)}});
        json sizes = json::array();
        for (const auto& a : st.alpha) sizes.push_back({{"atoms", a.size()}, {"window", {a.lo(), a.hi()}}});
        stages.push_back({
            {"stage", st.i},
            {"k", st.k},
            {"n", st.params.n},
            {"delta", to_string(st.params.delta)},
            {"min_ratio", to_string(st.params.min_ratio)},
            {"r", st.r},
            {"gamma_n", st.gamma_n},
            {"E", st.E->str()},
            {"tau_error", to_string(st.tau_error)},
            {"J_atoms", st.J->size()},
            {"J_window", {st.J->lo(), st.J->hi()}},
            {"alpha", sizes},
            {"tower",
             {{"n", st.tower.n},
              {"h", st.tower.tower->profile().h},
              {"h_K", st.tower.tower->profile().h_K},
              {"H_K", st.tower.tower->profile().H_K},
              {"coverage", to_string(st.tower.coverage)},
              {"R_measure", to_string(st.tower.R_measure)},
              {"trajectory", traj},
              {"columns", cols}}},
            {"copy", {{"changed_measure", to_string(st.copy.changed_measure)}, {"entries", copies},
                      {"distance", to_string(st.copy_distance)}}},
            {"N", st.N},
            {"N_found", st.N_found},
            {"proof_bound",
             {{"computable", st.bound.computable},
              {"note", st.bound.note},
              {"eps", to_string(st.bound.eps)},
              {"m0", st.bound.m0},
              {"M", st.bound.M},
              {"max_fiber_k", st.bound.max_fiber_k},
              {"min_fiber_k", st.bound.min_fiber_k},
              {"max_fiber_deviation", to_string(st.bound.max_fiber_deviation)},
              {"eps_table", eps_table},
              {"scan_max_violating", st.bound_scan ? json(st.bound_scan->max_violating_k_points) : json(nullptr)}}},
            {"f_beta", fb},
        });
    }
    json ledger = json::array();
    for (const LedgerEntry& e : state.ledger)
        ledger.push_back({{"stage", e.stage}, {"property", e.property}, {"pass", e.pass}, {"detail", e.detail}});
    return {{"mu_K", to_string(ctx.mu_K)},
            {"K", ctx.K->str()},
            {"code", ctx.pi.str()},
            {"stages", stages},
            {"ledger", ledger},
            {"final_uniformity", state.final_uniformity},
            {"pass", state.pass}};
}

}  // namespace symerg
