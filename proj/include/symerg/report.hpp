#pragma once

#include "symerg/model.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace symerg {

inline constexpr const char* kVersion = "0.1.0";

// FNV-1a 64 of the compact JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

// {"version", "config_hash", "config", ...payload}.
nlohmann::json with_header(const nlohmann::json& config, nlohmann::json payload);

std::string ledger_tsv(const StageState& state);

nlohmann::json stage_report(const BuildContext& ctx, const StageState& state);

}  // namespace symerg
