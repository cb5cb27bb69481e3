// Smooth 2π-periodic coefficient functions c(t), held simultaneously as
// uniform grid samples and discrete Fourier coefficients.
#ifndef TORUSCAUCHY_COEFFICIENTS_HPP
#define TORUSCAUCHY_COEFFICIENTS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "toruscauchy/dft.hpp"

namespace toruscauchy {

// Callable antiderivative Φ_c(t) = c₀·t + Σ_{k≠0} ĉ(k)(e^{ikt}-1)/(ik).
// Φ_c(0) = 0 and Φ_c(t + 2π) = Φ_c(t) + 2π c₀.
class Antiderivative {
 public:
  Antiderivative(Complex mean, std::vector<std::pair<int, Complex>> oscillatory_terms,
                 std::vector<Complex> grid_values, std::vector<Complex> periodic_grid_values)
      : mean_(mean),
        terms_(std::move(oscillatory_terms)),
        grid_(std::move(grid_values)),
        periodic_grid_(std::move(periodic_grid_values)) {}

  Complex mean() const { return mean_; }

  Complex operator()(double t) const {
    Complex v = mean_ * t;
    for (const auto& [k, a] : terms_) {
      const Complex e = std::exp(Complex(0.0, k * t));
      v += a * (e - 1.0) / Complex(0.0, static_cast<double>(k));
    }
    return v;
  }

  // Φ_c at grid point t_i (precomputed).
  Complex at_grid(std::size_t i) const { return grid_[i]; }

  // The periodic part Ψ_c(t_i) = Φ_c(t_i) - c₀·t_i.
  Complex periodic_at_grid(std::size_t i) const { return periodic_grid_[i]; }

  std::size_t grid_size() const { return grid_.size(); }

 private:
  Complex mean_;
  std::vector<std::pair<int, Complex>> terms_;
  std::vector<Complex> grid_;
  std::vector<Complex> periodic_grid_;
};

class PeriodicCoefficient {
 public:
  static PeriodicCoefficient from_samples(std::vector<Complex> samples) {
    require_grid(samples.size());
    auto fourier = dft(samples);
    return PeriodicCoefficient(std::move(samples), std::move(fourier));
  }

  // Bandlimited construction from (k, ĉ(k)) pairs with |k| ≤ N/2.
  static PeriodicCoefficient from_fourier(const std::vector<std::pair<int, Complex>>& modes,
                                          std::size_t grid_size) {
    require_grid(grid_size);
    std::vector<Complex> coeffs(grid_size, Complex(0.0, 0.0));
    const int half = static_cast<int>(grid_size / 2);
    for (const auto& [k, v] : modes) {
      if (k < -half || k > half)
        throw std::invalid_argument("from_fourier: mode outside bandlimit |k| <= N/2");
      const std::size_t bin = k >= 0 ? static_cast<std::size_t>(k)
                                     : grid_size - static_cast<std::size_t>(-k);
      coeffs[bin % grid_size] += v;
    }
    auto samples = idft(coeffs);
    return PeriodicCoefficient(std::move(samples), std::move(coeffs));
  }

  static PeriodicCoefficient constant(Complex value, std::size_t grid_size) {
    return from_fourier({{0, value}}, grid_size);
  }

  std::size_t grid_size() const { return samples_.size(); }
  const std::vector<Complex>& samples() const { return samples_; }
  const std::vector<Complex>& fourier() const { return fourier_; }

  Complex mean() const { return fourier_[0]; }

  Complex fourier_mode(int k) const {
    const int n = static_cast<int>(samples_.size());
    if (k < -n / 2 || k > n / 2) return Complex(0.0, 0.0);
    const std::size_t bin = k >= 0 ? static_cast<std::size_t>(k)
                                   : static_cast<std::size_t>(n + k);
    return fourier_[bin % samples_.size()];
  }

  // Real and imaginary parts a(t_i), b(t_i) with c = a + i b.
  double real_at(std::size_t i) const { return samples_[i].real(); }
  double imag_at(std::size_t i) const { return samples_[i].imag(); }

  // sup_k≠0 |ĉ(k)| relative to the coefficient scale; detects t-constants.
  double fourier_tail() const {
    double tail = 0.0, scale = std::abs(fourier_[0]);
    for (std::size_t b = 1; b < fourier_.size(); ++b) tail = std::max(tail, std::abs(fourier_[b]));
    return tail / std::max(scale, 1.0);
  }

  bool is_constant(double tol = 1e-12) const { return fourier_tail() <= tol; }

  PeriodicCoefficient derivative() const {
    auto c = fourier_;
    for (std::size_t b = 0; b < c.size(); ++b)
      c[b] *= Complex(0.0, static_cast<double>(signed_mode(b, c.size())));
    auto s = idft(c);
    return PeriodicCoefficient(std::move(s), std::move(c));
  }

  Antiderivative antiderivative() const {
    const std::size_t n = samples_.size();
    std::vector<std::pair<int, Complex>> terms;
    for (std::size_t b = 1; b < n; ++b) {
      if (std::abs(fourier_[b]) > 0.0) terms.emplace_back(signed_mode(b, n), fourier_[b]);
    }
    // Grid values of the periodic part via the (e^{ikt}-1)/(ik) series.
    std::vector<Complex> osc(n, Complex(0.0, 0.0));
    Complex at_zero(0.0, 0.0);
    for (std::size_t b = 1; b < n; ++b) {
      osc[b] = fourier_[b] / Complex(0.0, static_cast<double>(signed_mode(b, n)));
      at_zero += osc[b];
    }
    auto periodic = idft(osc);
    std::vector<Complex> grid(n), periodic_grid(n);
    for (std::size_t i = 0; i < n; ++i) {
      periodic_grid[i] = periodic[i] - at_zero;
      grid[i] = fourier_[0] * grid_point(i, n) + periodic_grid[i];
    }
    return Antiderivative(fourier_[0], std::move(terms), std::move(grid), std::move(periodic_grid));
  }

 private:
  PeriodicCoefficient(std::vector<Complex> samples, std::vector<Complex> fourier)
      : samples_(std::move(samples)), fourier_(std::move(fourier)) {}

  std::vector<Complex> samples_;
  std::vector<Complex> fourier_;
};

// Mollifier profile exp(1 - 1/(1-s²)) rescaled to the given interval:
// vanishes outside, positive inside, equal to 1 at the midpoint.
inline double mollifier_bump(double t, std::pair<double, double> support) {
  const double mid = 0.5 * (support.first + support.second);
  const double half = 0.5 * (support.second - support.first);
  const double s = (t - mid) / half;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

// Two real nonnegative bump functions with disjoint supports inside [0, 2π],
// peak-normalized to 1 at the interval midpoints, sampled on the t-grid.
inline std::pair<PeriodicCoefficient, PeriodicCoefficient> bump_pair(
    std::pair<double, double> support_a, std::pair<double, double> support_b,
    std::size_t grid_size) {
  require_grid(grid_size);
  auto check = [](std::pair<double, double> s, const char* name) {
    if (!(s.first >= 0.0 && s.second <= kTwoPi && s.first < s.second))
      throw std::invalid_argument(std::string("bump_pair: ") + name +
                                  " must be a nonempty interval inside [0, 2π]");
  };
  check(support_a, "support_a");
  check(support_b, "support_b");
  const bool disjoint = support_a.second < support_b.first || support_b.second < support_a.first;
  if (!disjoint) throw std::invalid_argument("supports must be disjoint");

  auto sample_bump = [grid_size](std::pair<double, double> sup) {
    std::vector<Complex> v(grid_size, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < grid_size; ++i)
      v[i] = mollifier_bump(grid_point(i, grid_size), sup);
    return PeriodicCoefficient::from_samples(std::move(v));
  };
  return {sample_bump(support_a), sample_bump(support_b)};
}

}  // namespace toruscauchy

#endif  // TORUSCAUCHY_COEFFICIENTS_HPP
