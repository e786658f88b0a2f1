#include "cminject/subtractor.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "cminject/fft.hpp"
#include "cminject/rng.hpp"

namespace cminject {

double CommonModeGainCurve::attenuation_db(double freq_hz) const {
  double att = floor_db;
  if (freq_hz > corner_hz && corner_hz > 0.0) {
    att -= slope_db_per_decade * std::log10(freq_hz / corner_hz);
  }
  for (const auto& b : bumps) {
    const double d = (freq_hz - b.center_hz) / b.width_hz;
    att -= b.height_db * std::exp(-d * d);
  }
  return std::max(att, min_attenuation_db);
}

double CommonModeGainCurve::gain(double freq_hz) const {
  return std::pow(10.0, -attenuation_db(freq_hz) / 20.0);
}

void validate(const SubtractorParams& p) {
  if (!(p.g_dm > 0.0)) throw std::invalid_argument("subtractor: g_dm must be > 0");
  if (!(p.noise_sigma >= 0.0)) throw std::invalid_argument("subtractor: noise_sigma must be >= 0");
  if (!(p.g_cm_curve.corner_hz > 0.0))
    throw std::invalid_argument("subtractor: corner frequency must be > 0");
  for (const auto& b : p.g_cm_curve.bumps) {
    if (!(b.width_hz > 0.0)) throw std::invalid_argument("subtractor: bump width must be > 0");
  }
}

void validate(const TransferParams& p) {
  if (!(p.gain >= 0.0)) throw std::invalid_argument("transfer: gain must be >= 0");
  if (!(p.bandpass_width > 0.0)) throw std::invalid_argument("transfer: bandpass_width must be > 0");
  if (!(p.bandpass_center > 0.0))
    throw std::invalid_argument("transfer: bandpass_center must be > 0");
  if (!(p.delay >= 0.0)) throw std::invalid_argument("transfer: delay must be >= 0");
}

double distortion(const SubtractorParams& p, double v_cm) {
  double out = 0.0;
  double power = v_cm * v_cm;
  for (double c : p.distortion_coeffs) {
    out += c * power;
    power *= v_cm;
  }
  return out;
}

Waveform apply_transfer(const Waveform& attack, const TransferParams& t) {
  validate(attack);
  validate(t);
  const std::size_t n = attack.samples.size();
  const double fs = attack.sample_rate;

  std::vector<std::complex<double>> buf(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = {attack.samples[i], 0.0};
  auto spec = dft(buf, false);

  // Order-2 Butterworth band-pass magnitude; exactly 1 at the center.
  const double q = t.bandpass_center / t.bandpass_width;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t kf = std::min(k, n - k);
    const double f = static_cast<double>(kf) * fs / static_cast<double>(n);
    double b = 0.0;
    if (f > 0.0) {
      const double x = q * (f / t.bandpass_center - t.bandpass_center / f);
      b = 1.0 / std::sqrt(1.0 + x * x * x * x);
    }
    spec[k] *= t.gain * b;
  }
  auto filtered = dft(spec, true);

  const auto shift = static_cast<std::size_t>(std::llround(t.delay * fs));
  Waveform out;
  out.sample_rate = fs;
  out.samples.assign(n, 0.0);
  for (std::size_t i = shift; i < n; ++i) out.samples[i] = filtered[i - shift].real();
  return out;
}

Waveform subtractor_output(const ModePair& modes, const SubtractorParams& p,
                           double attack_freq_hz, std::uint64_t seed) {
  validate(modes);
  validate(p);
  if (!(attack_freq_hz >= 0.0))
    throw std::invalid_argument("subtractor_output: attack frequency must be >= 0");
  const double fs = modes.v_dm.sample_rate;
  if (attack_freq_hz > 0.0 && attack_freq_hz >= kNyquistMargin * fs)
    throw std::invalid_argument("subtractor_output: attack frequency violates the Nyquist rule");

  const double g_cm = p.g_cm_curve.gain(attack_freq_hz);
  const std::size_t n = modes.v_dm.samples.size();
  SplitMix64 rng(seed);
  Waveform out;
  out.sample_rate = fs;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double vcm = modes.v_cm.samples[i];
    double o = p.g_dm * modes.v_dm.samples[i] + g_cm * vcm + distortion(p, vcm);
    if (p.noise_sigma > 0.0) o += rng.next_gaussian(p.noise_sigma);
    out.samples[i] = o;
  }
  return out;
}

double sinad(const Waveform& w, double fundamental_hz) {
  validate(w);
  const double fs = w.sample_rate;
  if (!(fundamental_hz > 0.0)) throw std::invalid_argument("sinad: fundamental must be > 0");
  if (fundamental_hz >= fs / 2.0)
    throw std::invalid_argument("sinad: fundamental must be below Nyquist");
  const std::size_t n = w.samples.size();
  if (static_cast<double>(n) / fs < 2.0 / fundamental_hz)
    throw std::invalid_argument("sinad: need at least two periods of the fundamental");

  // Least-squares fit of DC + fundamental; leakage-free for any record
  // length, so the residual is exactly noise plus distortion.
  const double step = 2.0 * M_PI * fundamental_hz / fs;
  double scc = 0.0, sss = 0.0, scs = 0.0, sc = 0.0, ss = 0.0;
  double sxc = 0.0, sxs = 0.0, sx = 0.0;
  std::vector<double> c(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = std::cos(step * static_cast<double>(i));
    s[i] = std::sin(step * static_cast<double>(i));
    scc += c[i] * c[i];
    sss += s[i] * s[i];
    scs += c[i] * s[i];
    sc += c[i];
    ss += s[i];
    sxc += w.samples[i] * c[i];
    sxs += w.samples[i] * s[i];
    sx += w.samples[i];
  }
  const double nn = static_cast<double>(n);
  // Solve [scc scs sc; scs sss ss; sc ss n] [alpha beta mu]' = [sxc sxs sx]'.
  const double det = scc * (sss * nn - ss * ss) - scs * (scs * nn - ss * sc) +
                     sc * (scs * ss - sss * sc);
  if (det == 0.0) throw std::invalid_argument("sinad: degenerate fit basis");
  const double alpha = (sxc * (sss * nn - ss * ss) - scs * (sxs * nn - ss * sx) +
                        sc * (sxs * ss - sss * sx)) /
                       det;
  const double beta = (scc * (sxs * nn - ss * sx) - sxc * (scs * nn - ss * sc) +
                       sc * (scs * sx - sxs * sc)) /
                      det;
  const double mu = (scc * (sss * sx - sxs * ss) - scs * (scs * sx - sxs * sc) +
                     sxc * (scs * ss - sss * sc)) /
                    det;

  double p_s = 0.0, p_nd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fit = alpha * c[i] + beta * s[i];
    p_s += fit * fit;
    const double r = w.samples[i] - fit - mu;
    p_nd += r * r;
  }
  p_s /= nn;
  p_nd /= nn;
  if (p_nd <= 1e-12 * p_s || p_nd == 0.0) return kSinadCapDb;
  return std::min(10.0 * std::log10(p_s / p_nd), kSinadCapDb);
}

}  // namespace cminject
