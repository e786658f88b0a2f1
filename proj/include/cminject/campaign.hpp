#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cminject/attacker.hpp"

namespace cminject {

/// The message the attacker wants the receiver to see, against the bits
/// actually on the line.
struct MessageSpec {
  std::vector<int> intended_bits;
  std::vector<int> line_bits;
};

void validate(const MessageSpec& spec);

enum class CampaignMode {
  kIndependent,    // every bit injection drawn independently
  kGroupedApprox,  // after the first successful flip of a run, the rest of the run succeeds
};

struct CampaignConfig {
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  CampaignMode mode = CampaignMode::kGroupedApprox;
  double g = 0.5;
  FlipPair pair;
  /// Optional per-bit override of g (length must match the message).
  std::vector<double> g_schedule;
  /// Worker threads; results are bit-identical for any value.
  int threads = 1;
};

void validate(const CampaignConfig& cfg);

struct CampaignResult {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double rate = 0.0;
  double ci_low = 0.0;   // Wilson 95%
  double ci_high = 0.0;
  /// per_bit_failures[i] = trials whose first mismatched bit was i.
  std::vector<std::uint64_t> per_bit_failures;
};

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                          double z = 1.959963984540054);

/// Monte Carlo estimate of a single bit injection: draw G, decide, draw the
/// flip outcome, succeed iff the final bit equals the intended one.
/// g and pair are taken from the arguments; cfg supplies trials, seed, threads.
CampaignResult simulate_bit(int intended, int actual, double g, const FlipPair& pair,
                            const CampaignConfig& cfg);

/// (number of dominant bits, number of maximal dominant runs).
std::pair<std::size_t, std::size_t> count_dominant_groups(const std::vector<int>& bits);

/// (u^dominant_count, u^group_count): the independent-bit lower estimate and
/// the first-flip-per-run upper estimate for an idle (all-recessive) line.
std::pair<double, double> message_bounds(const std::vector<int>& bits, double u);

/// Monte Carlo message injection; success iff every bit matches intended.
CampaignResult simulate_message(const MessageSpec& spec, const CampaignConfig& cfg);

enum class CompareVerdict { kABetter, kNotSignificant };

struct CompareResult {
  CompareVerdict verdict = CompareVerdict::kNotSignificant;
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

/// One-sided Welch t-test of mean(A) > mean(B); A_better iff p < alpha.
CompareResult compare_pairs(const std::vector<double>& samples_a,
                            const std::vector<double>& samples_b, double alpha);

}  // namespace cminject
