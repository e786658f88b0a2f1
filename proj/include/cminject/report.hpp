#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cminject/campaign.hpp"

namespace cminject {

std::uint64_t fnv1a64(std::string_view s);

/// 16-hex-digit digest of a config object's canonical dump.
std::string config_hash(const nlohmann::json& config);

/// Report envelope: {tool, version, command, config_hash, config}.
/// Randomized commands add "master_seed"; every command adds "result".
nlohmann::json make_report(const std::string& command, const nlohmann::json& config);

nlohmann::json to_json(const CampaignResult& r);

/// Canonical bytes for a report: 2-space indented dump plus trailing newline.
std::string dump_report(const nlohmann::json& report);

}  // namespace cminject
