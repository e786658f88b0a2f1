#include "cminject/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace cminject {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// exp(sign * i * pi * (j^2 mod 2n) / n); the modular reduction keeps the
// angle small so the chirp stays accurate for large j.
std::complex<double> chirp(std::uint64_t j, std::uint64_t n, double sign) {
  const std::uint64_t r = (j % (2 * n)) * (j % (2 * n)) % (2 * n);
  const double angle = sign * M_PI * static_cast<double>(r) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft_pow2: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x, bool inverse) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  if (is_pow2(n)) {
    auto a = x;
    fft_pow2(a, inverse);
    return a;
  }
  // Bluestein: X_k = conj-chirp_k * ((x * chirp) convolved with conj-chirp).
  const double sign = inverse ? 1.0 : -1.0;
  const std::size_t m = next_pow2(2 * n - 1);
  std::vector<std::complex<double>> a(m, {0.0, 0.0});
  std::vector<std::complex<double>> b(m, {0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = x[j] * chirp(j, n, sign);
    const auto c = chirp(j, n, -sign);
    b[j] = c;
    if (j != 0) b[m - j] = c;
  }
  fft_pow2(a, false);
  fft_pow2(b, false);
  for (std::size_t j = 0; j < m; ++j) a[j] *= b[j];
  fft_pow2(a, true);
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp(k, n, sign);
  if (inverse) {
    for (auto& v : out) v /= static_cast<double>(n);
  }
  return out;
}

double tone_amplitude(const std::vector<double>& x, double sample_rate, double freq_hz) {
  const std::size_t n = x.size();
  if (n == 0) return 0.0;
  const double step = -2.0 * M_PI * freq_hz / sample_rate;
  const std::complex<double> w(std::cos(step), std::sin(step));
  std::complex<double> rot(1.0, 0.0);
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i] * rot;
    rot *= w;
  }
  return 2.0 * std::abs(acc) / static_cast<double>(n);
}

std::pair<double, double> dominant_tone(const std::vector<double>& x, double sample_rate) {
  const std::size_t n = x.size();
  if (n < 2) return {0.0, 0.0};
  std::vector<std::complex<double>> buf(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = {x[i], 0.0};
  auto spec = dft(buf, false);
  std::size_t best = 0;
  double best_mag = 0.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double mag = std::abs(spec[k]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  if (best == 0) return {0.0, 0.0};
  return {static_cast<double>(best) * sample_rate / static_cast<double>(n),
          2.0 * best_mag / static_cast<double>(n)};
}

}  // namespace cminject
