#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cminject/campaign.hpp"
#include "cminject/rng.hpp"

using namespace cminject;

namespace {

CampaignConfig cfg_of(std::uint64_t trials, std::uint64_t seed, int threads = 1) {
  CampaignConfig cfg;
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.threads = threads;
  return cfg;
}

double binom_se(double p, std::uint64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

// exp(n log u) is fine here; the test-side oracle stays independent.
double pow_int(double u, std::size_t k) {
  double out = 1.0;
  for (std::size_t i = 0; i < k; ++i) out *= u;
  return out;
}

}  // namespace

TEST_CASE("a sure correct guess with nothing to flip always succeeds") {
  const CampaignResult r = simulate_bit(1, 1, 1.0, FlipPair{0.3, 0.3, {}}, cfg_of(2000, 1));
  CHECK(r.successes == 2000);
  CHECK(r.rate == 1.0);
}

TEST_CASE("forced radiation reproduces v and u") {
  const FlipPair pair{0.09, 0.83, {}};
  const CampaignResult r1 = simulate_bit(1, 0, 0.0, pair, cfg_of(100000, 2));
  CHECK(std::abs(r1.rate - 0.83) < 3.0 * binom_se(0.83, 100000));

  const FlipPair can_pair{0.74, 0.9, {}};
  const CampaignResult r0 = simulate_bit(0, 1, 1.0, can_pair, cfg_of(100000, 3));
  CHECK(std::abs(r0.rate - 0.74) < 3.0 * binom_se(0.74, 100000));
}

TEST_CASE("simulated single-bit rates match the case formulas at fixed G") {
  // g = 1 or 0 pins the guess, exposing each analytic case.
  const FlipPair pair{0.31, 0.62, {}};
  const std::uint64_t n = 60000;
  struct Case {
    int intended, actual;
    double g, expect;
  };
  const Case cases[] = {
      {1, 1, 1.0, 1.0},        // silent, already right
      {1, 0, 1.0, 0.0},        // silent, stays wrong
      {1, 1, 0.0, 1.0 - 0.31}, // radiates against itself
      {1, 0, 0.0, 0.62},       // radiates to flip
      {0, 1, 1.0, 0.31},       // radiates to flip
      {0, 0, 1.0, 1.0 - 0.62}, // radiates against itself
      {0, 0, 0.0, 1.0},        // silent, already right
      {0, 1, 0.0, 0.0},        // silent, stays wrong
  };
  std::uint64_t seed = 10;
  for (const auto& c : cases) {
    const CampaignResult r = simulate_bit(c.intended, c.actual, c.g, pair, cfg_of(n, seed++));
    CHECK(std::abs(r.rate - c.expect) <= 3.0 * binom_se(c.expect, n) + 1e-12);
  }
}

TEST_CASE("simulated rate tracks expected_p1 for intermediate g") {
  const FlipPair pair{0.09, 0.83, {}};
  const std::uint64_t n = 80000;
  for (double g : {0.25, 0.5, 0.75}) {
    for (int a : {0, 1}) {
      const CampaignResult r = simulate_bit(1, a, g, pair, cfg_of(n, 500 + static_cast<int>(g * 100) + a));
      const double expect = expected_p1(g, pair, a);
      CHECK(std::abs(r.rate - expect) < 3.0 * binom_se(expect, n));
    }
  }
}

TEST_CASE("dominant census") {
  CHECK(count_dominant_groups({1, 1, 1}) == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(count_dominant_groups({0, 0, 1, 0}) == std::pair<std::size_t, std::size_t>{3, 2});
  CHECK(count_dominant_groups({0}) == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK_THROWS_AS(count_dominant_groups({}), std::invalid_argument);
  CHECK_THROWS_AS(count_dominant_groups({0, 2}), std::invalid_argument);
}

TEST_CASE("message bounds bracket") {
  CHECK(message_bounds({1, 1, 1}, 0.74) == std::pair<double, double>{1.0, 1.0});
  const auto [lo, hi] = message_bounds({1, 0, 1}, 0.5);
  CHECK(lo == 0.5);
  CHECK(hi == 0.5);

  const auto [lo2, hi2] = message_bounds({0, 0, 1, 0}, 0.74);
  CHECK(lo2 == doctest::Approx(pow_int(0.74, 3)));
  CHECK(hi2 == doctest::Approx(pow_int(0.74, 2)));
  CHECK(lo2 <= hi2);

  CHECK_THROWS_AS(message_bounds({0, 1}, 1.5), std::invalid_argument);
}

TEST_CASE("bounds collapse exactly when every dominant run has length one") {
  SplitMix64 rng(71);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<int> bits;
    for (int i = 0; i < 24; ++i) bits.push_back(rng.next_u64() & 1);
    const auto [dom, groups] = count_dominant_groups(bits);
    const auto [lo, hi] = message_bounds(bits, 0.6);
    CHECK(lo <= hi + 1e-15);
    if (dom == groups) {
      CHECK(lo == hi);
    } else {
      CHECK(lo < hi);
    }
  }
}

TEST_CASE("a message identical to the line state always lands when guesses are right") {
  // Idle recessive line, all-recessive message, sure guess: silent throughout.
  MessageSpec idle{{1, 1, 1, 1}, {1, 1, 1, 1}};
  CampaignConfig cfg = cfg_of(5000, 4);
  cfg.g = 1.0;
  cfg.pair = {0.7, 0.9, {}};
  CHECK(simulate_message(idle, cfg).rate == 1.0);

  // Mixed line-matching message: a per-bit schedule that always guesses the
  // transmitted bit keeps the attacker silent on every bit.
  MessageSpec mixed{{1, 0, 1, 1}, {1, 0, 1, 1}};
  cfg.g_schedule = {1.0, 0.0, 1.0, 1.0};
  CHECK(simulate_message(mixed, cfg).rate == 1.0);
}

TEST_CASE("independent mode multiplies per-bit probabilities") {
  // Line idle at 1, inject 0 0 1 0 -> three independent u-flips at g = 1.
  MessageSpec spec{{0, 0, 1, 0}, {1, 1, 1, 1}};
  CampaignConfig cfg = cfg_of(200000, 5);
  cfg.mode = CampaignMode::kIndependent;
  cfg.g = 1.0;
  cfg.pair = {0.74, 0.0, {}};
  const CampaignResult r = simulate_message(spec, cfg);
  const double expect = pow_int(0.74, 3);
  CHECK(std::abs(r.rate - expect) < 3.0 * binom_se(expect, cfg.trials));
}

TEST_CASE("grouped approximation charges one factor per dominant run") {
  MessageSpec spec{{0, 0, 1, 0}, {1, 1, 1, 1}};
  CampaignConfig cfg = cfg_of(200000, 6);
  cfg.mode = CampaignMode::kGroupedApprox;
  cfg.g = 1.0;
  cfg.pair = {0.74, 0.0, {}};
  const CampaignResult r = simulate_message(spec, cfg);
  const double expect = pow_int(0.74, 2);
  CHECK(std::abs(r.rate - expect) < 3.0 * binom_se(expect, cfg.trials));
}

TEST_CASE("grouped approximation never hurts: rate at least the independent rate") {
  MessageSpec spec{{0, 0, 0, 1, 0, 0, 1, 0}, {1, 1, 1, 1, 1, 1, 1, 1}};
  CampaignConfig ind = cfg_of(150000, 7);
  ind.mode = CampaignMode::kIndependent;
  ind.g = 1.0;
  ind.pair = {0.6, 0.0, {}};
  CampaignConfig grp = ind;
  grp.mode = CampaignMode::kGroupedApprox;
  const double ri = simulate_message(spec, ind).rate;
  const double rg = simulate_message(spec, grp).rate;
  CHECK(rg >= ri - 3.0 * (binom_se(ri, ind.trials) + binom_se(rg, grp.trials)));
}

TEST_CASE("per-bit failure histogram records the first mismatch") {
  MessageSpec spec{{0, 1, 0}, {1, 1, 1}};
  CampaignConfig cfg = cfg_of(50000, 8);
  cfg.mode = CampaignMode::kIndependent;
  cfg.g = 1.0;
  cfg.pair = {0.5, 0.0, {}};
  const CampaignResult r = simulate_message(spec, cfg);
  REQUIRE(r.per_bit_failures.size() == 3);
  // Bit 0 fails with 1/2; bit 1 never fails; bit 2 fails for half the rest.
  CHECK(std::abs(static_cast<double>(r.per_bit_failures[0]) / 50000.0 - 0.5) < 0.01);
  CHECK(r.per_bit_failures[1] == 0);
  CHECK(std::abs(static_cast<double>(r.per_bit_failures[2]) / 50000.0 - 0.25) < 0.01);
  CHECK(r.successes + r.per_bit_failures[0] + r.per_bit_failures[2] == 50000);
}

TEST_CASE("campaigns are deterministic and thread-count invariant") {
  MessageSpec spec{{0, 0, 1, 0, 0}, {1, 1, 1, 1, 1}};
  CampaignConfig serial = cfg_of(40000, 99, 1);
  serial.g = 0.8;
  serial.pair = {0.7, 0.2, {}};
  CampaignConfig parallel = serial;
  parallel.threads = 7;
  const CampaignResult a = simulate_message(spec, serial);
  const CampaignResult b = simulate_message(spec, parallel);
  CHECK(a.successes == b.successes);
  CHECK(a.rate == b.rate);
  CHECK(a.ci_low == b.ci_low);
  CHECK(a.ci_high == b.ci_high);
  CHECK(a.per_bit_failures == b.per_bit_failures);

  CampaignConfig other = serial;
  other.master_seed = 100;
  CHECK(simulate_message(spec, other).successes != a.successes);
}

TEST_CASE("per-bit g schedule overrides the scalar g") {
  MessageSpec spec{{0, 0}, {1, 1}};
  CampaignConfig cfg = cfg_of(30000, 12);
  cfg.mode = CampaignMode::kIndependent;
  cfg.g = 0.0;  // would radiate never... schedule forces guesses to 1
  cfg.g_schedule = {1.0, 1.0};
  cfg.pair = {0.6, 0.0, {}};
  const CampaignResult r = simulate_message(spec, cfg);
  const double expect = 0.36;
  CHECK(std::abs(r.rate - expect) < 3.0 * binom_se(expect, cfg.trials));

  cfg.g_schedule = {1.0};
  CHECK_THROWS_AS(simulate_message(spec, cfg), std::invalid_argument);
}

TEST_CASE("wilson interval brackets the analytic rate with its nominal coverage") {
  // Exact coverage oracle by binomial enumeration at n = 50, p = 0.3.
  const std::uint64_t n = 50;
  const double p = 0.3;
  double exact_coverage = 0.0;
  double pmf = std::pow(1.0 - p, static_cast<double>(n));  // P(K = 0)
  for (std::uint64_t k = 0; k <= n; ++k) {
    const auto [lo, hi] = wilson_interval(k, n);
    if (lo <= p && p <= hi) exact_coverage += pmf;
    pmf *= (static_cast<double>(n - k) / static_cast<double>(k + 1)) * (p / (1.0 - p));
  }
  CHECK(exact_coverage >= 0.95);

  // Empirical coverage across 200 seeded campaigns, within 3 sigma of exact.
  int covered = 0;
  const int reps = 200;
  for (int s = 0; s < reps; ++s) {
    CampaignConfig cfg = cfg_of(n, 1000 + s);
    const CampaignResult r = simulate_bit(1, 0, 0.0, FlipPair{0.0, p, {}}, cfg);
    if (r.ci_low <= p && p <= r.ci_high) ++covered;
  }
  const double cov = static_cast<double>(covered) / reps;
  CHECK(std::abs(cov - exact_coverage) < 3.0 * std::sqrt(exact_coverage * (1.0 - exact_coverage) / reps));
  CHECK(cov >= 0.90);
}

TEST_CASE("wilson interval basics") {
  const auto [lo, hi] = wilson_interval(0, 10);
  CHECK(lo == 0.0);
  CHECK(hi > 0.0);
  const auto [lo2, hi2] = wilson_interval(10, 10);
  CHECK(hi2 == 1.0);
  CHECK(lo2 < 1.0);
  CHECK_THROWS_AS(wilson_interval(1, 0), std::invalid_argument);
}

TEST_CASE("welch t-test agrees with a frozen external computation") {
  const std::vector<double> a{0.82, 0.88, 0.91, 0.79, 0.85, 0.90};
  const std::vector<double> b{0.70, 0.74, 0.77, 0.69, 0.81, 0.72};
  const CompareResult r = compare_pairs(a, b, 0.05);
  CHECK(r.t == doctest::Approx(4.49648848951595).epsilon(1e-10));
  CHECK(r.df == doctest::Approx(9.98600096729427).epsilon(1e-10));
  CHECK(r.p == doctest::Approx(0.000576678504371058).epsilon(1e-8));
  CHECK(r.verdict == CompareVerdict::kABetter);
}

TEST_CASE("identical samples are never significant") {
  const std::vector<double> a{0.5, 0.6, 0.7, 0.55};
  CHECK(compare_pairs(a, a, 0.05).verdict == CompareVerdict::kNotSignificant);

  const std::vector<double> c{0.5, 0.5, 0.5};
  CHECK(compare_pairs(c, c, 0.05).verdict == CompareVerdict::kNotSignificant);  // zero variance
}

TEST_CASE("well-separated bernoulli rate samples are significant") {
  SplitMix64 rng(314);
  std::vector<double> a, b;
  for (int i = 0; i < 100; ++i) {
    a.push_back(rng.next_bernoulli(0.87) ? 1.0 : 0.0);
    b.push_back(rng.next_bernoulli(0.50) ? 1.0 : 0.0);
  }
  CHECK(compare_pairs(a, b, 0.05).verdict == CompareVerdict::kABetter);
  // And the reverse direction must not claim superiority.
  CHECK(compare_pairs(b, a, 0.05).verdict == CompareVerdict::kNotSignificant);
}

TEST_CASE("compare_pairs input validation") {
  CHECK_THROWS_AS(compare_pairs({1.0}, {1.0, 2.0}, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(compare_pairs({1.0, 2.0}, {1.0, 2.0}, 0.0), std::invalid_argument);
}
