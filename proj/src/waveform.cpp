#include "cminject/waveform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cminject {

void validate(const Waveform& w) {
  if (!(w.sample_rate > 0.0)) throw std::invalid_argument("waveform: sample_rate must be > 0");
  if (w.samples.empty()) throw std::invalid_argument("waveform: samples must be non-empty");
  for (double s : w.samples) {
    if (!std::isfinite(s)) throw std::invalid_argument("waveform: sample values must be finite");
  }
}

namespace {

void check_matched(const Waveform& a, const Waveform& b, const char* what) {
  if (a.sample_rate != b.sample_rate)
    throw std::invalid_argument(std::string(what) + ": sample rates differ");
  if (a.samples.size() != b.samples.size())
    throw std::invalid_argument(std::string(what) + ": lengths differ");
}

}  // namespace

void validate(const DifferentialPair& p) {
  validate(p.d_plus);
  validate(p.d_minus);
  check_matched(p.d_plus, p.d_minus, "differential pair");
}

void validate(const ModePair& m) {
  validate(m.v_dm);
  validate(m.v_cm);
  check_matched(m.v_dm, m.v_cm, "mode pair");
}

ModePair decompose(const DifferentialPair& pair) {
  validate(pair);
  const std::size_t n = pair.d_plus.samples.size();
  ModePair out;
  out.v_dm.sample_rate = out.v_cm.sample_rate = pair.d_plus.sample_rate;
  out.v_dm.samples.resize(n);
  out.v_cm.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dp = pair.d_plus.samples[i];
    const double dm = pair.d_minus.samples[i];
    out.v_dm.samples[i] = dp - dm;
    out.v_cm.samples[i] = (dp + dm) / 2.0;
  }
  return out;
}

DifferentialPair recompose(const ModePair& modes) {
  validate(modes);
  const std::size_t n = modes.v_dm.samples.size();
  DifferentialPair out;
  out.d_plus.sample_rate = out.d_minus.sample_rate = modes.v_dm.sample_rate;
  out.d_plus.samples.resize(n);
  out.d_minus.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double half = modes.v_dm.samples[i] / 2.0;
    out.d_plus.samples[i] = modes.v_cm.samples[i] + half;
    out.d_minus.samples[i] = modes.v_cm.samples[i] - half;
  }
  return out;
}

DifferentialPair inject_common_mode(const DifferentialPair& pair, const Waveform& injected) {
  validate(pair);
  validate(injected);
  check_matched(pair.d_plus, injected, "inject_common_mode");
  const std::size_t n = pair.d_plus.samples.size();
  DifferentialPair out = pair;
  for (std::size_t i = 0; i < n; ++i) {
    out.d_plus.samples[i] += injected.samples[i];
    out.d_minus.samples[i] += injected.samples[i];
  }
  return out;
}

Waveform constant_wave(double level, double sample_rate, std::size_t n) {
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(n, level);
  return w;
}

Waveform sine_wave(double amplitude, double freq_hz, double sample_rate, std::size_t n,
                   double phase) {
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(n);
  const double step = 2.0 * M_PI * freq_hz / sample_rate;
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = amplitude * std::sin(step * static_cast<double>(i) + phase);
  }
  return w;
}

}  // namespace cminject
