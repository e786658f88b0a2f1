#include "cminject/attacker.hpp"

#include <stdexcept>
#include <string>

#include "cminject/rng.hpp"

namespace cminject {

void validate(const FlipPair& p) {
  if (!(p.u >= 0.0 && p.u <= 1.0)) throw std::invalid_argument("flip pair: u must be in [0, 1]");
  if (!(p.v >= 0.0 && p.v <= 1.0)) throw std::invalid_argument("flip pair: v must be in [0, 1]");
}

void validate(const GuessModel& m) {
  if (!(m.g >= 0.0 && m.g <= 1.0)) throw std::invalid_argument("guess model: g must be in [0, 1]");
}

namespace {

void check_bit(int bit, const char* what) {
  if (bit != 0 && bit != 1) throw std::invalid_argument(std::string(what) + " must be 0 or 1");
}

}  // namespace

int draw_guess(const GuessModel& m, std::uint64_t seed) {
  validate(m);
  return SplitMix64(seed).next_bernoulli(m.g) ? 1 : 0;
}

AttackDecision decide(int intended_bit, int guess, const FlipPair& pair) {
  check_bit(intended_bit, "decide: intended_bit");
  check_bit(guess, "decide: guess");
  validate(pair);
  if (guess == intended_bit) return {false, {}};
  return {true, pair};
}

double success_prob_inject1(int actual_bit, int guess, const FlipPair& pair) {
  check_bit(actual_bit, "success_prob_inject1: actual_bit");
  check_bit(guess, "success_prob_inject1: guess");
  validate(pair);
  const double gd = static_cast<double>(guess);
  if (actual_bit == 1) return gd + (1.0 - gd) * (1.0 - pair.u);
  return (1.0 - gd) * pair.v;
}

double success_prob_inject0(int actual_bit, int guess, const FlipPair& pair) {
  check_bit(actual_bit, "success_prob_inject0: actual_bit");
  check_bit(guess, "success_prob_inject0: guess");
  validate(pair);
  const double gd = static_cast<double>(guess);
  if (actual_bit == 1) return gd * pair.u;
  return (1.0 - gd) + gd * (1.0 - pair.v);
}

double expected_p1(double g, const FlipPair& pair, int actual_bit) {
  if (!(g >= 0.0 && g <= 1.0)) throw std::invalid_argument("expected_p1: g must be in [0, 1]");
  check_bit(actual_bit, "expected_p1: actual_bit");
  validate(pair);
  if (actual_bit == 1) return pair.u * g + 1.0 - pair.u;
  return -pair.v * g + pair.v;
}

double pair_objective(int target_bit, double g, const FlipPair& pair) {
  check_bit(target_bit, "pair_objective: target_bit");
  if (!(g >= 0.0 && g <= 1.0)) throw std::invalid_argument("pair_objective: g must be in [0, 1]");
  validate(pair);
  if (target_bit == 1) return g * (1.0 - pair.u) + (1.0 - g) * pair.v;
  return g * pair.u + (1.0 - g) * (1.0 - pair.v);
}

namespace {

// Strict "a beats b" ordering: objective, then the u tie-break, then
// meta-less first, then (freq, amplitude).
bool beats(const FlipPair& a, const FlipPair& b, int target_bit, double g) {
  const double oa = pair_objective(target_bit, g, a);
  const double ob = pair_objective(target_bit, g, b);
  if (oa != ob) return oa > ob;
  if (a.u != b.u) return target_bit == 1 ? a.u < b.u : a.u > b.u;
  const bool am = a.meta.has_value();
  const bool bm = b.meta.has_value();
  if (am != bm) return !am;
  if (!am) return false;
  if (a.meta->freq_hz != b.meta->freq_hz) return a.meta->freq_hz < b.meta->freq_hz;
  return a.meta->amplitude_vpp < b.meta->amplitude_vpp;
}

}  // namespace

FlipPair optimal_pair(const FeasibleSet& fs, double g, int target_bit) {
  if (fs.pairs.empty()) throw std::invalid_argument("optimal_pair: feasible set must be non-empty");
  FlipPair best = send_nothing();
  for (const auto& candidate : fs.pairs) {
    validate(candidate);
    if (beats(candidate, best, target_bit, g)) best = candidate;
  }
  return best;
}

}  // namespace cminject
