// Discrete Fourier calculus on the uniform 2π-periodic grid t_i = 2πi/N.
//
// Coefficient convention: ĉ(k) = (1/N) Σ_i s_i e^{-ik t_i}, synthesis
// s_i = Σ_k ĉ(k) e^{ik t_i}. Coefficients are stored in FFT bin order;
// bin b carries the signed mode k = b for b < N/2 and k = b - N otherwise.
#ifndef TORUSCAUCHY_DFT_HPP
#define TORUSCAUCHY_DFT_HPP

#include <complex>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace toruscauchy {

using Complex = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

inline void require_grid(std::size_t n) {
  if (!is_power_of_two(n) || n < 8)
    throw std::invalid_argument("grid size must be a power of two >= 8");
}

inline double grid_point(std::size_t i, std::size_t n) {
  return kTwoPi * static_cast<double>(i) / static_cast<double>(n);
}

inline int signed_mode(std::size_t bin, std::size_t n) {
  return bin < n / 2 ? static_cast<int>(bin) : static_cast<int>(bin) - static_cast<int>(n);
}

namespace detail {

// Twiddles computed one by one from std::polar rather than by recurrence;
// the leakage of a pure tone stays at a few ulps, which the singular-witness
// residual budget (1e-10 over 2048-point grids) depends on.
inline const std::vector<Complex>& twiddle_table(std::size_t n) {
  thread_local std::map<std::size_t, std::vector<Complex>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<Complex> w(n);
    for (std::size_t j = 0; j < n; ++j)
      w[j] = std::polar(1.0, -kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    it = cache.emplace(n, std::move(w)).first;
  }
  return it->second;
}

inline void fft_inplace(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const auto& w = twiddle_table(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const Complex tw = inverse ? std::conj(w[j * stride]) : w[j * stride];
        const Complex u = a[i + j];
        const Complex v = a[i + j + len / 2] * tw;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
}

}  // namespace detail

inline std::vector<Complex> dft(std::span<const Complex> samples) {
  require_grid(samples.size());
  std::vector<Complex> a(samples.begin(), samples.end());
  detail::fft_inplace(a, false);
  const double inv = 1.0 / static_cast<double>(a.size());
  for (auto& v : a) v *= inv;
  return a;
}

inline std::vector<Complex> idft(std::span<const Complex> coeffs) {
  require_grid(coeffs.size());
  std::vector<Complex> a(coeffs.begin(), coeffs.end());
  detail::fft_inplace(a, true);
  return a;
}

// Samples of d/dt via multiplication by ik in coefficient space. Exact for
// bandlimited grid functions.
inline std::vector<Complex> spectral_derivative(std::span<const Complex> samples) {
  auto c = dft(samples);
  const std::size_t n = c.size();
  for (std::size_t b = 0; b < n; ++b) {
    const double k = static_cast<double>(signed_mode(b, n));
    c[b] *= Complex(0.0, k);
  }
  return idft(c);
}

// Samples of F(t) = Σ_{k≠0} v̂(k)(e^{ikt}-1)/(ik): the antiderivative of the
// zero-mean part of v, pinned to F(0) = 0. The mean of v is ignored.
inline std::vector<Complex> spectral_antiderivative(std::span<const Complex> samples) {
  auto c = dft(samples);
  const std::size_t n = c.size();
  Complex at_zero(0.0, 0.0);
  c[0] = Complex(0.0, 0.0);
  for (std::size_t b = 1; b < n; ++b) {
    const double k = static_cast<double>(signed_mode(b, n));
    c[b] /= Complex(0.0, k);
    at_zero += c[b];
  }
  auto f = idft(c);
  for (auto& v : f) v -= at_zero;
  return f;
}

// Periodic trapezoid rule over one full period; spectrally accurate for
// smooth periodic integrands.
inline Complex periodic_integral(std::span<const Complex> samples) {
  Complex s(0.0, 0.0);
  for (const auto& v : samples) s += v;
  return s * (kTwoPi / static_cast<double>(samples.size()));
}

inline double sup_norm(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace toruscauchy

#endif  // TORUSCAUCHY_DFT_HPP
