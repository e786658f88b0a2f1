#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace cminject {

struct AttackMeta {
  double freq_hz = 0.0;
  double amplitude_vpp = 0.0;
};

/// (u, v): probability an attacking signal flips 1->0 (u) or 0->1 (v).
struct FlipPair {
  double u = 0.0;
  double v = 0.0;
  std::optional<AttackMeta> meta;
};

void validate(const FlipPair& p);

/// "Send nothing" is the pair (0, 0): never flips anything.
inline FlipPair send_nothing() { return {}; }
inline bool is_send_nothing(const FlipPair& p) { return p.u == 0.0 && p.v == 0.0; }

/// The attainable pairs of one device. SendNothing is always a candidate
/// for the optimizer whether or not it is listed.
struct FeasibleSet {
  std::vector<FlipPair> pairs;
};

/// G ~ Bernoulli(g): the attacker's guess of the transmitted bit.
struct GuessModel {
  double g = 0.5;
};

void validate(const GuessModel& m);

struct AttackDecision {
  bool radiate = false;
  FlipPair pair;  // meaningful only when radiating
};

/// One seeded draw of the guess.
int draw_guess(const GuessModel& m, std::uint64_t seed);

/// Silent iff the guess already matches the intended bit.
AttackDecision decide(int intended_bit, int guess, const FlipPair& pair);

// Per-case success rates.
// Injecting 1:  A=1 -> G + (1-G)(1-u);  A=0 -> (1-G) v.
// Injecting 0:  A=1 -> G u;             A=0 -> (1-G) + G (1-v).
double success_prob_inject1(int actual_bit, int guess, const FlipPair& pair);
double success_prob_inject0(int actual_bit, int guess, const FlipPair& pair);

/// Expectation of P1 over G ~ Bernoulli(g):
/// A=1 -> u g + 1 - u;  A=0 -> -v g + v.
double expected_p1(double g, const FlipPair& pair, int actual_bit);

/// Weighted-sum objective: target 1 -> g (1-u) + (1-g) v;
/// target 0 -> g u + (1-g)(1-v).
double pair_objective(int target_bit, double g, const FlipPair& pair);

/// Argmax of the objective over the set plus the implicit SendNothing.
/// Ties break toward smaller u (target 1) / larger u (target 0), then
/// meta-less pairs first, then (freq, amplitude) lexicographic.
FlipPair optimal_pair(const FeasibleSet& fs, double g, int target_bit);

}  // namespace cminject
