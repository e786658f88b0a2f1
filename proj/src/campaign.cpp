#include "cminject/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "cminject/rng.hpp"

namespace cminject {

void validate(const MessageSpec& spec) {
  if (spec.intended_bits.empty()) throw std::invalid_argument("message spec: must be non-empty");
  if (spec.intended_bits.size() != spec.line_bits.size())
    throw std::invalid_argument("message spec: intended and line lengths differ");
  for (int b : spec.intended_bits)
    if (b != 0 && b != 1) throw std::invalid_argument("message spec: bits must be 0 or 1");
  for (int b : spec.line_bits)
    if (b != 0 && b != 1) throw std::invalid_argument("message spec: bits must be 0 or 1");
}

void validate(const CampaignConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("campaign: trials must be >= 1");
  if (!(cfg.g >= 0.0 && cfg.g <= 1.0)) throw std::invalid_argument("campaign: g must be in [0, 1]");
  validate(cfg.pair);
  for (double g : cfg.g_schedule)
    if (!(g >= 0.0 && g <= 1.0))
      throw std::invalid_argument("campaign: g_schedule values must be in [0, 1]");
  if (cfg.threads < 1) throw std::invalid_argument("campaign: threads must be >= 1");
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                          double z) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: trials must be >= 1");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The boundary endpoints are exactly 0 and 1; keep them free of roundoff.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

namespace {

struct Partial {
  std::uint64_t successes = 0;
  std::vector<std::uint64_t> per_bit_failures;
};

// Runs trials [0, trials) split contiguously across workers; per-trial RNG
// streams are derived from (master_seed, trial), so the aggregate is
// identical for any thread count.
template <typename TrialFn>
CampaignResult run_campaign(std::uint64_t trials, std::uint64_t master_seed, int threads,
                            std::size_t n_bits, TrialFn&& trial_fn) {
  const int workers = static_cast<int>(
      std::min<std::uint64_t>(trials, static_cast<std::uint64_t>(std::max(threads, 1))));
  std::vector<Partial> parts(workers);
  for (auto& p : parts) p.per_bit_failures.assign(n_bits, 0);

  auto run_range = [&](int w, std::uint64_t begin, std::uint64_t end) {
    Partial& part = parts[w];
    for (std::uint64_t t = begin; t < end; ++t) {
      SplitMix64 rng = trial_rng(master_seed, t);
      std::size_t first_fail = 0;
      if (trial_fn(rng, first_fail)) {
        ++part.successes;
      } else {
        ++part.per_bit_failures[first_fail];
      }
    }
  };

  if (workers == 1) {
    run_range(0, 0, trials);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = trials / workers;
    const std::uint64_t rem = trials % workers;
    std::uint64_t begin = 0;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t end = begin + chunk + (static_cast<std::uint64_t>(w) < rem ? 1 : 0);
      pool.emplace_back(run_range, w, begin, end);
      begin = end;
    }
    for (auto& th : pool) th.join();
  }

  CampaignResult result;
  result.trials = trials;
  result.per_bit_failures.assign(n_bits, 0);
  for (const auto& p : parts) {
    result.successes += p.successes;
    for (std::size_t i = 0; i < n_bits; ++i) result.per_bit_failures[i] += p.per_bit_failures[i];
  }
  result.rate = static_cast<double>(result.successes) / static_cast<double>(trials);
  std::tie(result.ci_low, result.ci_high) = wilson_interval(result.successes, trials);
  return result;
}

void check_bit(int bit, const char* what) {
  if (bit != 0 && bit != 1) throw std::invalid_argument(std::string(what) + " must be 0 or 1");
}

}  // namespace

CampaignResult simulate_bit(int intended, int actual, double g, const FlipPair& pair,
                            const CampaignConfig& cfg) {
  check_bit(intended, "simulate_bit: intended");
  check_bit(actual, "simulate_bit: actual");
  if (!(g >= 0.0 && g <= 1.0)) throw std::invalid_argument("simulate_bit: g must be in [0, 1]");
  validate(pair);
  validate(cfg);

  return run_campaign(cfg.trials, cfg.master_seed, cfg.threads, 1,
                      [&](SplitMix64& rng, std::size_t& first_fail) {
                        const int guess = rng.next_bernoulli(g) ? 1 : 0;
                        int final_bit = actual;
                        if (guess != intended) {
                          const double p_flip = actual == 1 ? pair.u : pair.v;
                          if (rng.next_bernoulli(p_flip)) final_bit = 1 - actual;
                        }
                        first_fail = 0;
                        return final_bit == intended;
                      });
}

std::pair<std::size_t, std::size_t> count_dominant_groups(const std::vector<int>& bits) {
  if (bits.empty()) throw std::invalid_argument("count_dominant_groups: bits must be non-empty");
  std::size_t dominant = 0;
  std::size_t groups = 0;
  int prev = 1;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("count_dominant_groups: bits must be 0 or 1");
    if (b == 0) {
      ++dominant;
      if (prev == 1) ++groups;
    }
    prev = b;
  }
  return {dominant, groups};
}

std::pair<double, double> message_bounds(const std::vector<int>& bits, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("message_bounds: u must be in [0, 1]");
  const auto [dominant, groups] = count_dominant_groups(bits);
  const auto p = [&](std::size_t k) {
    return k == 0 ? 1.0 : std::pow(u, static_cast<double>(k));
  };
  return {p(dominant), p(groups)};
}

CampaignResult simulate_message(const MessageSpec& spec, const CampaignConfig& cfg) {
  validate(spec);
  validate(cfg);
  if (!cfg.g_schedule.empty() && cfg.g_schedule.size() != spec.intended_bits.size())
    throw std::invalid_argument("simulate_message: g_schedule length must match the message");

  const std::size_t n_bits = spec.intended_bits.size();
  const bool grouped = cfg.mode == CampaignMode::kGroupedApprox;

  return run_campaign(
      cfg.trials, cfg.master_seed, cfg.threads, n_bits,
      [&](SplitMix64& rng, std::size_t& first_fail) {
        // Runs are maximal stretches of identical (actual, intended, action).
        // Reaching bit i means every earlier bit matched, so inside a
        // flip-run the previous flip is known to have succeeded.
        int prev_key = -1;
        for (std::size_t i = 0; i < n_bits; ++i) {
          const int intended = spec.intended_bits[i];
          const int actual = spec.line_bits[i];
          const double gi = cfg.g_schedule.empty() ? cfg.g : cfg.g_schedule[i];
          const int guess = rng.next_bernoulli(gi) ? 1 : 0;
          const bool radiate = guess != intended;
          const int key = (actual << 2) | (intended << 1) | static_cast<int>(radiate);

          int final_bit = actual;
          if (radiate) {
            const double p_flip = actual == 1 ? cfg.pair.u : cfg.pair.v;
            bool flip;
            if (grouped && key == prev_key && actual != intended) {
              flip = true;  // the run's first successful flip carries the rest
            } else {
              flip = rng.next_bernoulli(p_flip);
            }
            if (flip) final_bit = 1 - actual;
          }
          if (final_bit != intended) {
            first_fail = i;
            return false;
          }
          prev_key = key;
        }
        return true;
      });
}

CompareResult compare_pairs(const std::vector<double>& samples_a,
                            const std::vector<double>& samples_b, double alpha) {
  if (samples_a.size() < 2 || samples_b.size() < 2)
    throw std::invalid_argument("compare_pairs: each sample set needs at least 2 values");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("compare_pairs: alpha must be in (0, 1)");
  for (double x : samples_a)
    if (!std::isfinite(x)) throw std::invalid_argument("compare_pairs: samples must be finite");
  for (double x : samples_b)
    if (!std::isfinite(x)) throw std::invalid_argument("compare_pairs: samples must be finite");

  const double na = static_cast<double>(samples_a.size());
  const double nb = static_cast<double>(samples_b.size());
  const double ma = std::accumulate(samples_a.begin(), samples_a.end(), 0.0) / na;
  const double mb = std::accumulate(samples_b.begin(), samples_b.end(), 0.0) / nb;
  double va = 0.0, vb = 0.0;
  for (double x : samples_a) va += (x - ma) * (x - ma);
  for (double x : samples_b) vb += (x - mb) * (x - mb);
  va /= na - 1.0;
  vb /= nb - 1.0;

  const double se2 = va / na + vb / nb;
  CompareResult result;
  if (se2 == 0.0) {
    // Degenerate: both samples constant.
    if (ma > mb) {
      result.verdict = CompareVerdict::kABetter;
      result.t = std::numeric_limits<double>::infinity();
      result.p = 0.0;
    }
    return result;
  }

  result.t = (ma - mb) / std::sqrt(se2);
  result.df = se2 * se2 /
              (va * va / (na * na * (na - 1.0)) + vb * vb / (nb * nb * (nb - 1.0)));
  const boost::math::students_t dist(result.df);
  result.p = boost::math::cdf(boost::math::complement(dist, result.t));
  result.verdict = result.p < alpha ? CompareVerdict::kABetter : CompareVerdict::kNotSignificant;
  return result;
}

}  // namespace cminject
