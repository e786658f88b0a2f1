#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace cminject {

/// In-place iterative radix-2 transform; a.size() must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

/// DFT of arbitrary length (Bluestein chirp-z for non-power-of-two sizes).
/// Inverse includes the 1/n scale.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x, bool inverse);

/// Single-sided amplitude of the component at freq_hz: 2|sum x_i e^{-iwt_i}| / n.
double tone_amplitude(const std::vector<double>& x, double sample_rate, double freq_hz);

/// (freq_hz, amplitude) of the strongest non-DC bin.
std::pair<double, double> dominant_tone(const std::vector<double>& x, double sample_rate);

}  // namespace cminject
