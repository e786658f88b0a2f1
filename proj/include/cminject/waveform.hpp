#pragma once

#include <cstddef>
#include <vector>

namespace cminject {

/// Uniformly sampled voltage signal. Sample i sits at t = i / sample_rate.
struct Waveform {
  std::vector<double> samples;
  double sample_rate = 0.0;  // Hz

  std::size_t size() const { return samples.size(); }
  double duration() const {
    return sample_rate > 0.0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

/// A differential pair (D+, D-); both wires share rate and length.
struct DifferentialPair {
  Waveform d_plus;
  Waveform d_minus;
};

/// The same pair expressed as differential mode (the information) and
/// common mode (the channel an injection rides on).
struct ModePair {
  Waveform v_dm;
  Waveform v_cm;
};

// All throw std::invalid_argument on violated invariants.
void validate(const Waveform& w);
void validate(const DifferentialPair& p);
void validate(const ModePair& m);

/// v_dm[i] = d_plus[i] - d_minus[i], v_cm[i] = (d_plus[i] + d_minus[i]) / 2.
ModePair decompose(const DifferentialPair& pair);

/// d_plus[i] = v_cm[i] + v_dm[i]/2, d_minus[i] = v_cm[i] - v_dm[i]/2.
DifferentialPair recompose(const ModePair& modes);

/// Adds the same injected signal to both wires. The differential mode is
/// untouched; the common mode gains the injected signal.
DifferentialPair inject_common_mode(const DifferentialPair& pair, const Waveform& injected);

Waveform constant_wave(double level, double sample_rate, std::size_t n);
Waveform sine_wave(double amplitude, double freq_hz, double sample_rate, std::size_t n,
                   double phase = 0.0);

}  // namespace cminject
