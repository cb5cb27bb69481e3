// Cauchy factors D_t + c(t)P(D_x), ordered products thereof, and their
// spectral action on partial-Fourier fields û(t, ξ).
//
// Convention: D_t = -i ∂_t, so per mode (F u)^(t,ξ) = -i ∂_t û + M(t,ξ) û
// with M(t,ξ) = c(t) p(ξ). The symbol of a constant-coefficient factor in
// (τ,ξ) is taken as τ - M₀(ξ); since τ ranges over all of Z, gap statistics
// are unaffected by the sign of the convention.
#ifndef TORUSCAUCHY_OPERATORS_HPP
#define TORUSCAUCHY_OPERATORS_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "toruscauchy/coefficients.hpp"
#include "toruscauchy/dft.hpp"
#include "toruscauchy/lattice.hpp"
#include "toruscauchy/symbols.hpp"

namespace toruscauchy {

class CauchyFactor {
 public:
  CauchyFactor(PeriodicCoefficient coefficient, ToroidalSymbol symbol)
      : coefficient_(std::move(coefficient)),
        symbol_(std::move(symbol)),
        phi_(coefficient_.antiderivative()) {}

  const PeriodicCoefficient& coefficient() const { return coefficient_; }
  const ToroidalSymbol& symbol() const { return symbol_; }
  std::size_t grid_size() const { return coefficient_.grid_size(); }

  // M(t_i, ξ) = c(t_i) p(ξ).
  Complex multiplier(std::size_t t_index, const LatticePoint& xi) const {
    return coefficient_.samples()[t_index] * symbol_(xi);
  }

  std::vector<Complex> multiplier_slice(const LatticePoint& xi) const {
    const Complex p = symbol_(xi);
    std::vector<Complex> m(coefficient_.grid_size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = coefficient_.samples()[i] * p;
    return m;
  }

  // M₀(ξ) = c₀ p(ξ).
  Complex mean_multiplier(const LatticePoint& xi) const {
    return coefficient_.mean() * symbol_(xi);
  }

  // Φ(t_i, ξ) = Φ_c(t_i) p(ξ), the antiderivative of M(·, ξ) with Φ(0, ξ) = 0.
  Complex phase_at_grid(std::size_t t_index, const LatticePoint& xi) const {
    return phi_.at_grid(t_index) * symbol_(xi);
  }

  // Ψ(t_i, ξ) = Φ(t_i, ξ) - M₀(ξ) t_i, the 2π-periodic part of the phase.
  std::vector<Complex> periodic_phase_slice(const LatticePoint& xi) const {
    const Complex p = symbol_(xi);
    std::vector<Complex> v(coefficient_.grid_size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = phi_.periodic_at_grid(i) * p;
    return v;
  }

  Complex phase(double t, const LatticePoint& xi) const { return phi_(t) * symbol_(xi); }

  const Antiderivative& coefficient_antiderivative() const { return phi_; }

  // The normal-form factor D_t + c₀ P(D_x).
  CauchyFactor freeze_mean() const {
    return CauchyFactor(PeriodicCoefficient::constant(coefficient_.mean(), grid_size()), symbol_);
  }

 private:
  PeriodicCoefficient coefficient_;
  ToroidalSymbol symbol_;
  Antiderivative phi_;
};

// Ordered factor list [F_1, ..., F_m]; application order is
// F_1 ∘ F_2 ∘ ... ∘ F_m (the last factor acts first).
class ProductOperator {
 public:
  explicit ProductOperator(std::vector<CauchyFactor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("ProductOperator: at least one factor required");
    for (const auto& f : factors_)
      if (f.grid_size() != factors_.front().grid_size())
        throw std::invalid_argument("ProductOperator: factors must share the t-grid");
  }

  std::size_t order() const { return factors_.size(); }
  const std::vector<CauchyFactor>& factors() const { return factors_; }
  const CauchyFactor& factor(std::size_t j) const { return factors_.at(j); }
  std::size_t grid_size() const { return factors_.front().grid_size(); }

  ProductOperator freeze_means() const {
    std::vector<CauchyFactor> fs;
    fs.reserve(factors_.size());
    for (const auto& f : factors_) fs.push_back(f.freeze_mean());
    return ProductOperator(std::move(fs));
  }

 private:
  std::vector<CauchyFactor> factors_;
};

// û(t_i, ξ) over a t-grid × lattice window, stored mode-major.
class SpectralField {
 public:
  SpectralField(LatticeWindow window, std::size_t n_t)
      : window_(std::move(window)), n_t_(n_t), data_(window_.size() * n_t, Complex(0.0, 0.0)) {
    require_grid(n_t);
  }

  const LatticeWindow& window() const { return window_; }
  std::size_t n_t() const { return n_t_; }

  std::span<Complex> mode(std::size_t mode_index) {
    return {data_.data() + mode_index * n_t_, n_t_};
  }
  std::span<const Complex> mode(std::size_t mode_index) const {
    return {data_.data() + mode_index * n_t_, n_t_};
  }
  std::span<Complex> mode(const LatticePoint& xi) { return mode(window_.index_of(xi)); }
  std::span<const Complex> mode(const LatticePoint& xi) const { return mode(window_.index_of(xi)); }

  Complex& at(std::size_t t_index, std::size_t mode_index) {
    return data_[mode_index * n_t_ + t_index];
  }
  Complex at(std::size_t t_index, std::size_t mode_index) const {
    return data_[mode_index * n_t_ + t_index];
  }

  double sup_norm() const { return toruscauchy::sup_norm(data_); }

  double mode_sup(std::size_t mode_index) const { return toruscauchy::sup_norm(mode(mode_index)); }

  SpectralField& operator+=(const SpectralField& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  SpectralField& operator*=(Complex a) {
    for (auto& v : data_) v *= a;
    return *this;
  }

  void check_same_shape(const SpectralField& o) const {
    if (n_t_ != o.n_t_ || window_.size() != o.window_.size() || window_.dim() != o.window_.dim() ||
        window_.radius() != o.window_.radius())
      throw std::invalid_argument("SpectralField: grid mismatch");
  }

 private:
  LatticeWindow window_;
  std::size_t n_t_;
  std::vector<Complex> data_;
};

// Lattice modes are independent; results land in disjoint slices of the
// output field.
inline SpectralField apply_factor(const CauchyFactor& factor, const SpectralField& u) {
  if (factor.grid_size() != u.n_t())
    throw std::invalid_argument("apply_factor: t-grid mismatch between factor and field");
  SpectralField out(u.window(), u.n_t());
  const auto& points = u.window().points();
  for (std::size_t m = 0; m < points.size(); ++m) {
    const auto slice = u.mode(m);
    auto du = spectral_derivative(slice);
    const Complex p = factor.symbol()(points[m]);
    auto o = out.mode(m);
    for (std::size_t i = 0; i < u.n_t(); ++i) {
      const Complex mult = factor.coefficient().samples()[i] * p;
      o[i] = Complex(0.0, -1.0) * du[i] + mult * slice[i];
    }
  }
  return out;
}

inline SpectralField apply_product(const ProductOperator& op, const SpectralField& u) {
  SpectralField v = u;
  for (std::size_t j = op.order(); j-- > 0;) v = apply_factor(op.factor(j), v);
  return v;
}

// L_ρ = [F_{ρ(1)}, ..., F_{ρ(m)}]; ρ is given 1-based.
inline ProductOperator permute(const ProductOperator& op, const std::vector<std::size_t>& rho) {
  const std::size_t m = op.order();
  if (rho.size() != m) throw std::invalid_argument("permute: permutation size mismatch");
  std::vector<bool> seen(m, false);
  for (auto r : rho) {
    if (r < 1 || r > m || seen[r - 1]) throw std::invalid_argument("permute: not a permutation of {1..m}");
    seen[r - 1] = true;
  }
  std::vector<CauchyFactor> fs;
  fs.reserve(m);
  for (auto r : rho) fs.push_back(op.factor(r - 1));
  return ProductOperator(std::move(fs));
}

// Relative sup-norm of (F_j F_k - F_k F_j) u; ~0 signals commutation on u.
inline double commutator_residual(const CauchyFactor& fj, const CauchyFactor& fk,
                                  const SpectralField& u) {
  SpectralField jk = apply_factor(fj, apply_factor(fk, u));
  SpectralField kj = apply_factor(fk, apply_factor(fj, u));
  const double scale = std::max({jk.sup_norm(), kj.sup_norm(), 1e-30});
  jk -= kj;
  return jk.sup_norm() / scale;
}

inline Complex constant_symbol(const CauchyFactor& factor, std::int64_t tau,
                               const LatticePoint& xi) {
  if (!factor.coefficient().is_constant())
    throw std::invalid_argument("symbol undefined for variable coefficients");
  return static_cast<double>(tau) - factor.mean_multiplier(xi);
}

// L(τ, ξ) = ∏_j (τ - α_j p_j(ξ)) for constant-coefficient products.
inline Complex constant_symbol(const ProductOperator& op, std::int64_t tau,
                               const LatticePoint& xi) {
  Complex v(1.0, 0.0);
  for (const auto& f : op.factors()) v *= constant_symbol(f, tau, xi);
  return v;
}

namespace detail {

// Horner evaluation of the monic polynomial τ^m + c_1 τ^{m-1} + ... + c_m.
inline Complex monic_poly_eval(const std::vector<Complex>& coeffs, Complex z) {
  Complex v(1.0, 0.0);
  for (const auto& c : coeffs) v = v * z + c;
  return v;
}

}  // namespace detail

// Roots in τ of τ^m + Σ_{j=1..m} p_j(ξ) τ^{m-j}, multiplicities repeated.
// Closed form for m ≤ 2, companion-matrix eigenvalues otherwise. Roots are
// sorted by (Re, Im) for deterministic output.
inline std::vector<Complex> symbol_roots(const std::vector<ToroidalSymbol>& coeff_symbols,
                                         const LatticePoint& xi) {
  const std::size_t m = coeff_symbols.size();
  if (m == 0) throw std::invalid_argument("symbol_roots: at least one coefficient required");
  std::vector<Complex> c(m);
  for (std::size_t j = 0; j < m; ++j) c[j] = coeff_symbols[j](xi);

  std::vector<Complex> roots;
  if (m == 1) {
    roots = {-c[0]};
  } else if (m == 2) {
    const Complex disc = std::sqrt(c[0] * c[0] - 4.0 * c[1]);
    roots = {(-c[0] + disc) * 0.5, (-c[0] - disc) * 0.5};
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<int>(m), static_cast<int>(m));
    for (std::size_t j = 0; j < m; ++j) companion(0, static_cast<int>(j)) = -c[j];
    for (std::size_t j = 1; j < m; ++j) companion(static_cast<int>(j), static_cast<int>(j - 1)) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("symbol_roots: eigenvalue computation failed");
    for (int j = 0; j < static_cast<int>(m); ++j) roots.push_back(solver.eigenvalues()(j));
  }

  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  for (const auto& r : roots) {
    const Complex value = detail::monic_poly_eval(c, r);
    const double tol = 1e-8 * std::pow(std::max(1.0, std::abs(r)), static_cast<double>(m));
    if (std::abs(value) > tol)
      throw std::runtime_error("symbol_roots: root residual exceeds tolerance");
  }
  return roots;
}

// Relative sup-norm residual of apply(·, u) - f, safe at f = 0.
inline double residual(const CauchyFactor& factor, const SpectralField& u, const SpectralField& f) {
  SpectralField r = apply_factor(factor, u);
  r -= f;
  return r.sup_norm() / std::max(f.sup_norm(), 1e-30);
}

inline double residual(const ProductOperator& op, const SpectralField& u, const SpectralField& f) {
  SpectralField r = apply_product(op, u);
  r -= f;
  return r.sup_norm() / std::max(f.sup_norm(), 1e-30);
}

}  // namespace toruscauchy

#endif  // TORUSCAUCHY_OPERATORS_HPP
