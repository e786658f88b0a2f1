#pragma once

#include <cstdint>
#include <vector>

#include "cminject/subtractor.hpp"
#include "cminject/waveform.hpp"

namespace cminject {

/// Digital-side parameters. Defaults model an nRF52833-class input:
/// V_DD = 3 V, V_H = 2.1 V, V_L = 0.9 V, rails at [0, V_DD], 500 kbit/s
/// bit period, mid-bit latch, accumulation completing well within a bit.
struct ReceiverParams {
  double v_dd = 3.0;
  double v_h = 2.1;
  double v_l = 0.9;
  double clamp_min = 0.0;
  double clamp_max = 3.0;
  double accumulation_tau = 2e-7;  // seconds
  double offset_gain = 3.0;        // volts of equivalent DC offset per volt of rectified amplitude
  double bit_period = 2e-6;        // seconds
  double sample_phase = 0.5;       // fraction of bit_period at which the bit is latched
};

void validate(const ReceiverParams& p);

struct BitTrace {
  std::vector<int> bits;
  std::vector<double> latch_times;  // seconds
};

/// out[i] = min(max(w[i], clamp_min), clamp_max). Idempotent, monotone.
Waveform esd_clamp(const Waveform& w, const ReceiverParams& p);

/// Amplitude of the oscillation of (w - nominal) that survived rectification.
/// With a frequency hint the fundamental is recovered by correlation (a
/// half-rectified sine of surviving amplitude a has fundamental a/2); with
/// no hint, pi*|mean| is used (a/pi for the same signal, zero for a
/// symmetric unclipped oscillation).
double rectified_amplitude(const Waveform& w, double nominal, double oscillation_freq_hz = 0.0);

/// Adds the first-order equivalent-DC-offset trajectory to w: the offset
/// grows toward -offset_gain*A_rect for a nominal-high line (toward V_L)
/// or +offset_gain*A_rect for a nominal-low line (toward V_H), with time
/// constant accumulation_tau.
Waveform accumulate_offset(const Waveform& w, double nominal, const ReceiverParams& p,
                           double oscillation_freq_hz = 0.0);

/// Two-threshold hysteresis detector, latching at (k + sample_phase) * bit_period.
BitTrace detect_bits(const Waveform& w, const ReceiverParams& p, int initial_bit);

/// Fraction of trials in which the full physics chain (inject -> subtractor
/// -> clamp -> accumulate -> detect) latches the wrong bit. Estimates u for
/// nominal_bit = 1 and v for nominal_bit = 0. attack_amplitude_vpp is the
/// peak-to-peak drive on the pair; trials use independent seeded noise
/// derived from (seed, trial index).
double flip_probability(int nominal_bit, double attack_amplitude_vpp, double attack_freq_hz,
                        const SubtractorParams& sp, const ReceiverParams& rp,
                        std::uint64_t trials, std::uint64_t seed, double sample_rate);

}  // namespace cminject
