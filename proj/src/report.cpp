#include "cminject/report.hpp"

#include <array>
#include <cstdio>

#include "cminject/version.hpp"

namespace cminject {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

std::string config_hash(const nlohmann::json& config) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx",
                static_cast<unsigned long long>(fnv1a64(config.dump())));
  return std::string(buf.data());
}

nlohmann::json make_report(const std::string& command, const nlohmann::json& config) {
  nlohmann::json report;
  report["tool"] = "cminject";
  report["version"] = kVersion;
  report["command"] = command;
  report["config"] = config;
  report["config_hash"] = config_hash(config);
  return report;
}

nlohmann::json to_json(const CampaignResult& r) {
  return nlohmann::json{
      {"successes", r.successes},
      {"trials", r.trials},
      {"rate", r.rate},
      {"ci95", {r.ci_low, r.ci_high}},
      {"per_bit_failures", r.per_bit_failures},
  };
}

std::string dump_report(const nlohmann::json& report) { return report.dump(2) + "\n"; }

}  // namespace cminject
