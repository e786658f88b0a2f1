#pragma once

#include <cstdint>
#include <vector>

#include "cminject/waveform.hpp"

namespace cminject {

/// Usable band of a sampled signal: frequency content must stay below
/// kNyquistMargin * sample_rate. Violations are parameter errors, never
/// silent aliasing.
inline constexpr double kNyquistMargin = 0.4;

/// SINAD values above the cap are reported as the cap.
inline constexpr double kSinadCapDb = 120.0;

/// A resonance where common-mode rejection is locally worse.
struct RejectionBump {
  double center_hz = 0.0;
  double height_db = 0.0;   // attenuation reduction at the center
  double width_hz = 1.0;    // gaussian width
};

/// Common-mode gain versus frequency, parameterized as attenuation in dB:
/// a flat floor below corner_hz, degrading by slope_db_per_decade above it,
/// minus any resonant bumps, never below min_attenuation_db.
struct CommonModeGainCurve {
  double floor_db = 90.0;
  double corner_hz = 1e6;
  double slope_db_per_decade = 20.0;
  double min_attenuation_db = 0.0;
  std::vector<RejectionBump> bumps;

  double attenuation_db(double freq_hz) const;
  double gain(double freq_hz) const;  // linear scale, 10^(-attenuation/20)
};

/// Differential-amplifier model: o = g_dm*v_dm + g_cm(f)*v_cm + F(v_cm) + n.
struct SubtractorParams {
  double g_dm = 1.0;
  CommonModeGainCurve g_cm_curve;
  /// F(x) = sum_i distortion_coeffs[i] * x^(i+2); empty means no distortion.
  std::vector<double> distortion_coeffs;
  double noise_sigma = 0.0;  // volts
};

/// Injection path abstraction: gain, delay, band-limiting.
struct TransferParams {
  double gain = 1.0;
  double delay = 0.0;            // seconds, rounded to whole samples
  double bandpass_center = 1.0;  // Hz
  double bandpass_width = 1.0;   // Hz
};

void validate(const SubtractorParams& p);
void validate(const TransferParams& p);

double distortion(const SubtractorParams& p, double v_cm);

/// Delayed, gain-scaled, band-limited copy of the attack. A pure tone at
/// bandpass_center scales by exactly `gain` (order-2 Butterworth skirt).
Waveform apply_transfer(const Waveform& attack, const TransferParams& t);

/// Eq-of-the-model subtractor output with seeded white gaussian noise.
/// attack_freq_hz selects the common-mode gain; 0 means no attack content
/// (the in-band floor applies).
Waveform subtractor_output(const ModePair& modes, const SubtractorParams& p,
                           double attack_freq_hz, std::uint64_t seed);

/// 10*log10(P_fundamental / P_noise+distortion), DC excluded, capped at
/// kSinadCapDb when the residual vanishes.
double sinad(const Waveform& w, double fundamental_hz);

}  // namespace cminject
