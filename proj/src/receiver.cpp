#include "cminject/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cminject/fft.hpp"
#include "cminject/rng.hpp"

namespace cminject {

void validate(const ReceiverParams& p) {
  if (!(p.clamp_min <= p.v_l && p.v_l < p.v_h && p.v_h <= p.clamp_max))
    throw std::invalid_argument("receiver: need clamp_min <= v_l < v_h <= clamp_max");
  if (!(p.bit_period > 0.0)) throw std::invalid_argument("receiver: bit_period must be > 0");
  if (!(p.accumulation_tau > 0.0))
    throw std::invalid_argument("receiver: accumulation_tau must be > 0");
  if (!(p.sample_phase >= 0.0 && p.sample_phase < 1.0))
    throw std::invalid_argument("receiver: sample_phase must be in [0, 1)");
}

Waveform esd_clamp(const Waveform& w, const ReceiverParams& p) {
  validate(w);
  validate(p);
  Waveform out = w;
  for (double& s : out.samples) s = std::clamp(s, p.clamp_min, p.clamp_max);
  return out;
}

double rectified_amplitude(const Waveform& w, double nominal, double oscillation_freq_hz) {
  validate(w);
  const std::size_t n = w.samples.size();
  std::vector<double> osc(n);
  for (std::size_t i = 0; i < n; ++i) osc[i] = w.samples[i] - nominal;
  if (oscillation_freq_hz > 0.0) {
    if (oscillation_freq_hz >= w.sample_rate / 2.0)
      throw std::invalid_argument("rectified_amplitude: frequency must be below Nyquist");
    // Half-rectified sine of surviving amplitude a has fundamental a/2.
    return 2.0 * tone_amplitude(osc, w.sample_rate, oscillation_freq_hz);
  }
  // Frequency-free half-wave extractor: mean of a half-sine lobe is a/pi,
  // and a symmetric unclipped oscillation averages to zero.
  double mean = 0.0;
  for (double x : osc) mean += x;
  mean /= static_cast<double>(n);
  return M_PI * std::abs(mean);
}

Waveform accumulate_offset(const Waveform& w, double nominal, const ReceiverParams& p,
                           double oscillation_freq_hz) {
  validate(w);
  validate(p);
  const double a_rect = rectified_amplitude(w, nominal, oscillation_freq_hz);
  const double dir = nominal >= 0.5 * (p.v_h + p.v_l) ? -1.0 : 1.0;
  const double target = dir * p.offset_gain * a_rect;
  Waveform out = w;
  const double dt = 1.0 / w.sample_rate;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const double t = static_cast<double>(i) * dt;
    out.samples[i] += target * (1.0 - std::exp(-t / p.accumulation_tau));
  }
  return out;
}

BitTrace detect_bits(const Waveform& w, const ReceiverParams& p, int initial_bit) {
  validate(w);
  validate(p);
  if (initial_bit != 0 && initial_bit != 1)
    throw std::invalid_argument("detect_bits: initial_bit must be 0 or 1");
  const double fs = w.sample_rate;
  const auto n_bits =
      static_cast<std::size_t>(std::floor(w.duration() / p.bit_period + 1e-9));
  if (n_bits == 0)
    throw std::invalid_argument("detect_bits: waveform shorter than one bit period");

  BitTrace trace;
  trace.bits.reserve(n_bits);
  trace.latch_times.reserve(n_bits);
  int bit = initial_bit;
  for (std::size_t k = 0; k < n_bits; ++k) {
    const double t = (static_cast<double>(k) + p.sample_phase) * p.bit_period;
    auto idx = static_cast<std::size_t>(std::llround(t * fs));
    idx = std::min(idx, w.samples.size() - 1);
    const double v = w.samples[idx];
    if (v >= p.v_h) {
      bit = 1;
    } else if (v <= p.v_l) {
      bit = 0;
    }
    trace.bits.push_back(bit);
    trace.latch_times.push_back(t);
  }
  return trace;
}

double flip_probability(int nominal_bit, double attack_amplitude_vpp, double attack_freq_hz,
                        const SubtractorParams& sp, const ReceiverParams& rp,
                        std::uint64_t trials, std::uint64_t seed, double sample_rate) {
  if (nominal_bit != 0 && nominal_bit != 1)
    throw std::invalid_argument("flip_probability: nominal_bit must be 0 or 1");
  if (!(attack_amplitude_vpp >= 0.0))
    throw std::invalid_argument("flip_probability: amplitude must be >= 0");
  if (trials < 1) throw std::invalid_argument("flip_probability: trials must be >= 1");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("flip_probability: sample_rate must be > 0");
  validate(sp);
  validate(rp);
  if (attack_freq_hz > 0.0 && attack_freq_hz >= kNyquistMargin * sample_rate)
    throw std::invalid_argument("flip_probability: attack frequency violates the Nyquist rule");

  const auto n = static_cast<std::size_t>(std::llround(rp.bit_period * sample_rate));
  if (n < 16) throw std::invalid_argument("flip_probability: fewer than 16 samples per bit");

  // The line carries the nominal bit; the common mode idles at zero so the
  // injected tone is the only common-mode content (the in-band baseline is
  // rejected regardless).
  const double nominal = nominal_bit == 1 ? rp.v_dd : 0.0;
  ModePair base;
  base.v_dm = constant_wave(nominal / sp.g_dm, sample_rate, n);
  base.v_cm = constant_wave(0.0, sample_rate, n);
  const DifferentialPair line = recompose(base);
  const Waveform attack =
      sine_wave(attack_amplitude_vpp / 2.0, attack_freq_hz, sample_rate, n);
  const ModePair modes = decompose(inject_common_mode(line, attack));

  std::uint64_t flips = 0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const Waveform o = subtractor_output(modes, sp, attack_freq_hz, derive_seed(seed, trial));
    const Waveform clamped = esd_clamp(o, rp);
    const Waveform buffered = accumulate_offset(clamped, nominal, rp, attack_freq_hz);
    const BitTrace trace = detect_bits(buffered, rp, nominal_bit);
    if (trace.bits.front() != nominal_bit) ++flips;
  }
  return static_cast<double>(flips) / static_cast<double>(trials);
}

}  // namespace cminject
