// Per-mode closed-form solution of factor equations and chained product
// solves.
//
// The physical equation (F u)^ = -i ∂_t û + M û = f̂ is rescaled once to the
// first-order form ∂_t û + iM û = ĝ with ĝ = i f̂; the per-mode routines
// below work on ĝ. For t-constant M and ĝ the solution is ĝ/(iM).
//
// Off resonance the solution is
//   û(t) = (e^{2πiM₀} - 1)^{-1} ∫₀^{2π} exp(i∫_t^{t+s} M) ĝ(t+s) ds,
// evaluated in Fourier space: with e^{iΦ(r)} = e^{iM₀ r} ψ(r), ψ periodic,
// and Σ_k q̂_k e^{ikr} the expansion of ψĝ, each term integrates in closed
// form to q̂_k e^{ikt} (e^{2πi(M₀+k)} - 1)/(i(M₀+k)). This is exact for
// bandlimited ψĝ; a composite-Simpson fallback over 4N panels is available
// for data with significant spectral tails.
//
// On resonance (M₀ ∈ Z) the solution is
//   û(t) = e^{-iΦ(t)} ∫₀^t e^{iΦ(s)} v̂(s) ds,
// admissible exactly when the weighted period average of v̂ vanishes.
#ifndef TORUSCAUCHY_SOLVER_HPP
#define TORUSCAUCHY_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "toruscauchy/diophantine.hpp"
#include "toruscauchy/operators.hpp"

namespace toruscauchy {

enum class ModeStatus { NonResonant, ResonantOk, ResonantIncompatible };

inline const char* to_string(ModeStatus s) {
  switch (s) {
    case ModeStatus::NonResonant: return "NONRESONANT";
    case ModeStatus::ResonantOk: return "RESONANT_OK";
    case ModeStatus::ResonantIncompatible: return "RESONANT_INCOMPATIBLE";
  }
  return "?";
}

enum class Orientation { Forward, Reverse };
enum class QuadratureMethod { Spectral, Simpson };

struct SolverOptions {
  double tol_z = 1e-9;              // resonant-branch routing tolerance on dist(M₀, Z)
  double tol_compat = 1e-8;         // relative compatibility threshold
  double near_resonant_gap = 1e-6;  // flag (but still solve) below this torus gap
  Orientation orientation = Orientation::Forward;
  QuadratureMethod method = QuadratureMethod::Spectral;
};

struct ModeSolveOutcome {
  LatticePoint xi;
  ModeStatus status = ModeStatus::NonResonant;
  bool near_resonant = false;
  Complex denominator{0.0, 0.0};    // e^{2πiM₀(ξ)} - 1 on nonresonant modes
  Complex compatibility{0.0, 0.0};  // weighted period average on resonant modes
  double residual = 0.0;            // relative first-order residual
};

namespace detail {

inline bool mode_is_resonant(Complex m0, double tol_z) {
  return std::abs(m0.real() - std::nearbyint(m0.real())) <= tol_z && std::abs(m0.imag()) <= tol_z;
}

// Grid index of (m₀ t_i) mod 2π for integer m₀: exact phase reduction, so
// e^{i m₀ t_i} carries no accumulated argument error even for large m₀.
inline std::size_t reduced_phase_index(std::int64_t m0, std::size_t i, std::size_t n) {
  const auto nn = static_cast<std::int64_t>(n);
  const std::int64_t m = ((m0 % nn) + nn) % nn;
  return static_cast<std::size_t>((m * static_cast<std::int64_t>(i)) % nn);
}

// Swing of the imaginary part of the periodic phase Ψ(·, ξ). The integrating
// factor e^{iΨ} ranges over e^{±swing/2}-sized magnitudes; beyond ~e^{12} the
// double-precision Fourier route starts eating into the 1e-8 residual
// budget and the solve is rerun with 256-bit floats.
inline double imag_swing(const std::vector<Complex>& psi_phase) {
  double lo = 0.0, hi = 0.0;
  for (const auto& v : psi_phase) {
    lo = std::min(lo, v.imag());
    hi = std::max(hi, v.imag());
  }
  return hi - lo;
}

constexpr double kBigFloatSwingThreshold = 12.0;
constexpr double kMaxSupportedSwing = 300.0;

inline void check_swing(double swing) {
  if (swing > kMaxSupportedSwing)
    throw std::runtime_error(
        "imaginary phase swing exceeds the supported precision range (increase n_t or shrink "
        "the window)");
}

// e^{iΨ(t_i, ξ)} with complex Ψ.
inline std::vector<Complex> phase_factor(const std::vector<Complex>& psi) {
  std::vector<Complex> out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) out[i] = std::exp(Complex(0.0, 1.0) * psi[i]);
  return out;
}

// Zero-padded Fourier interpolation onto a grid refined by `factor`.
inline std::vector<Complex> refine_grid(std::span<const Complex> samples, std::size_t factor) {
  const std::size_t n = samples.size();
  auto c = dft(samples);
  std::vector<Complex> padded(n * factor, Complex(0.0, 0.0));
  for (std::size_t b = 0; b < n; ++b) {
    const int k = signed_mode(b, n);
    if (k == -static_cast<int>(n / 2)) {
      // Split the Nyquist coefficient over ±N/2 to keep the interpolant smooth.
      padded[n * factor - n / 2] += 0.5 * c[b];
      padded[n / 2] += 0.5 * c[b];
    } else {
      const std::size_t bin = k >= 0 ? static_cast<std::size_t>(k)
                                     : n * factor - static_cast<std::size_t>(-k);
      padded[bin] = c[b];
    }
  }
  return idft(padded);
}


// ---- 256-bit spectral kernels ------------------------------------------

// Radix-2 FFT over BigComplex; n is a power of two.
inline void fft_big(std::vector<BigComplex>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const BigFloat angle = (inverse ? 2 : -2) * big_pi() / static_cast<int>(len);
    const BigComplex wlen{cos(angle), sin(angle)};
    for (std::size_t i = 0; i < n; i += len) {
      BigComplex w{BigFloat(1), BigFloat(0)};
      for (std::size_t j = 0; j < len / 2; ++j) {
        const BigComplex u = a[i + j];
        const BigComplex v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w = w * wlen;
      }
    }
  }
}

inline std::vector<BigComplex> dft_big(std::vector<BigComplex> samples) {
  fft_big(samples, false);
  const BigFloat inv = BigFloat(1) / static_cast<int>(samples.size());
  for (auto& v : samples) v = BigComplex{v.re * inv, v.im * inv};
  return samples;
}

inline std::vector<BigComplex> idft_big(std::vector<BigComplex> coeffs) {
  fft_big(coeffs, true);
  return coeffs;
}

inline BigComplex lift(Complex z) { return {BigFloat(z.real()), BigFloat(z.imag())}; }

inline Complex lower(const BigComplex& z) {
  return {z.re.convert_to<double>(), z.im.convert_to<double>()};
}

// e^{2πiz} - 1 with the integer part of Re z removed first.
inline BigComplex expm1_two_pi_i_big(const BigComplex& z) {
  const BigFloat r = z.re - BigFloat(std::nearbyint(z.re.convert_to<double>()));
  const BigFloat two_pi = 2 * big_pi();
  const BigComplex e = big_exp({-two_pi * z.im, two_pi * r});
  return {e.re - 1, e.im};
}

// Smallest refinement (1, 2, 4 or 8) at which the weighted data's spectral
// tail fits the budget, probed in double precision (magnitudes up to
// e^{swing} stay representable for the supported swing range).
inline std::size_t pick_refinement(const std::vector<Complex>& base_phase,
                                   std::span<const Complex> base_data, double swing,
                                   std::int64_t tone) {
  const double budget = std::exp(-(swing + 23.0));
  std::size_t refine = 1;
  for (; refine < 8; refine *= 2) {
    const std::size_t n_s = base_phase.size() * refine;
    const auto phase = refine == 1 ? base_phase : refine_grid(base_phase, refine);
    const auto data = refine == 1
                          ? std::vector<Complex>(base_data.begin(), base_data.end())
                          : refine_grid(base_data, refine);
    std::vector<Complex> q(n_s);
    for (std::size_t i = 0; i < n_s; ++i) {
      const double theta = grid_point(reduced_phase_index(tone, i, n_s), n_s);
      q[i] = std::exp(Complex(0.0, 1.0) * (theta + phase[i])) * data[i];
    }
    auto qd = dft(q);
    double peak = 0.0, tail = 0.0;
    for (std::size_t b = 0; b < n_s; ++b) {
      const double mag = std::abs(qd[b]);
      peak = std::max(peak, mag);
      const int k = signed_mode(b, n_s);
      if (static_cast<std::size_t>(k < 0 ? -k : k) > n_s / 4) tail = std::max(tail, mag);
    }
    if (peak == 0.0 || tail <= peak * budget) break;
  }
  return refine;
}

inline std::vector<Complex> solve_mode_nonresonant_big(const std::vector<Complex>& psi_phase,
                                                       std::span<const Complex> g, Complex m0,
                                                       bool forward) {
  const std::size_t n = g.size();
  const double swing = imag_swing(psi_phase);
  const std::size_t refine = pick_refinement(psi_phase, g, swing, 0);
  const std::size_t n_s = n * refine;

  const auto phase_fine = refine == 1 ? psi_phase : refine_grid(psi_phase, refine);
  const auto g_fine =
      refine == 1 ? std::vector<Complex>(g.begin(), g.end()) : refine_grid(g, refine);
  std::vector<BigComplex> psi(n_s), q(n_s);
  for (std::size_t i = 0; i < n_s; ++i) {
    psi[i] = big_exp({BigFloat(-phase_fine[i].imag()), BigFloat(phase_fine[i].real())});
    q[i] = psi[i] * lift(g_fine[i]);
  }
  auto qh = dft_big(std::move(q));

  const BigComplex m0b = lift(m0);
  const BigComplex denom = forward ? expm1_two_pi_i_big(m0b)
                                   : BigComplex{BigFloat(0), BigFloat(0)} -
                                         expm1_two_pi_i_big({-m0b.re, -m0b.im});
  for (std::size_t b = 0; b < n_s; ++b) {
    const BigFloat k(signed_mode(b, n_s));
    const BigComplex shifted{m0b.re + k, m0b.im};
    const BigComplex div =
        forward ? BigComplex{-shifted.im, shifted.re} : BigComplex{shifted.im, -shifted.re};
    const BigComplex num = forward ? expm1_two_pi_i_big(shifted)
                                   : expm1_two_pi_i_big({-shifted.re, -shifted.im});
    qh[b] = qh[b] * num / div / denom;
  }
  // Subsampling back to the base grid aliases the refined bins mod n, so the
  // inverse transform can run at base size on the folded coefficients.
  std::vector<BigComplex> folded(n, BigComplex{BigFloat(0), BigFloat(0)});
  for (std::size_t b = 0; b < n_s; ++b) folded[b % n] = folded[b % n] + qh[b];
  auto series = idft_big(std::move(folded));
  const std::size_t stride = n_s / n;
  std::vector<Complex> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = lower(series[i] / psi[i * stride]);
  return u;
}

struct ResonantBigResult {
  Complex compatibility;
  std::vector<Complex> u;
};

// Sol-6 kernel at 256-bit precision: weight = e^{i(m₀t + Ψ)}, cumulative
// spectral antiderivative of the zero-mean weighted data. Oversamples like
// the nonresonant kernel so the weighted data's tail is resolved.
inline ResonantBigResult solve_mode_resonant_big(const std::vector<Complex>& psi_phase,
                                                 std::span<const Complex> v, std::int64_t m0_int) {
  const std::size_t n = v.size();
  const double swing = imag_swing(psi_phase);
  const std::size_t refine = pick_refinement(psi_phase, v, swing, m0_int);
  const std::size_t n_s = n * refine;
  const BigFloat two_pi = 2 * big_pi();

  const auto phase_fine = refine == 1 ? psi_phase : refine_grid(psi_phase, refine);
  const auto v_fine =
      refine == 1 ? std::vector<Complex>(v.begin(), v.end()) : refine_grid(v, refine);
  std::vector<BigComplex> weight(n_s), r(n_s);
  for (std::size_t i = 0; i < n_s; ++i) {
    const BigFloat theta =
        two_pi * static_cast<int>(reduced_phase_index(m0_int, i, n_s)) / static_cast<int>(n_s);
    weight[i] = big_exp({BigFloat(-phase_fine[i].imag()), theta + BigFloat(phase_fine[i].real())});
    r[i] = weight[i] * lift(v_fine[i]);
  }
  auto rh = dft_big(std::move(r));

  ResonantBigResult out;
  out.compatibility = lower(rh[0]) * kTwoPi;
  BigComplex at_zero{BigFloat(0), BigFloat(0)};
  rh[0] = {BigFloat(0), BigFloat(0)};
  for (std::size_t b = 1; b < n_s; ++b) {
    const BigComplex ik{BigFloat(0), BigFloat(signed_mode(b, n_s))};
    rh[b] = rh[b] / ik;
    at_zero = at_zero + rh[b];
  }
  std::vector<BigComplex> folded(n, BigComplex{BigFloat(0), BigFloat(0)});
  for (std::size_t b = 0; b < n_s; ++b) folded[b % n] = folded[b % n] + rh[b];
  auto cumulative = idft_big(std::move(folded));
  const std::size_t stride = n_s / n;
  out.u.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.u[i] = lower((cumulative[i] - at_zero) / weight[i * stride]);
  return out;
}

}  // namespace detail

// Sol-4 / its reverse-orientation twin on a nonresonant mode; takes the
// first-order right side ĝ.
inline std::vector<Complex> solve_mode_nonresonant(const CauchyFactor& factor,
                                                   const LatticePoint& xi,
                                                   std::span<const Complex> g,
                                                   const SolverOptions& opts = {}) {
  const std::size_t n = factor.grid_size();
  if (g.size() != n) throw std::invalid_argument("solve_mode_nonresonant: grid mismatch");
  const Complex m0 = factor.mean_multiplier(xi);
  if (torus_gap(m0) <= opts.tol_z)
    throw std::invalid_argument("resonant mode routed incorrectly");

  const auto psi_phase = factor.periodic_phase_slice(xi);
  const bool forward = opts.orientation == Orientation::Forward;

  if (opts.method == QuadratureMethod::Spectral) {
    const double swing = detail::imag_swing(psi_phase);
    detail::check_swing(swing);
    if (swing > detail::kBigFloatSwingThreshold)
      return detail::solve_mode_nonresonant_big(psi_phase, g, m0, forward);

    const auto psi = detail::phase_factor(psi_phase);
    std::vector<Complex> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = psi[i] * g[i];
    auto qh = dft(q);
    const Complex denom = forward ? expm1_two_pi_i(m0) : -expm1_two_pi_i(-m0);
    for (std::size_t b = 0; b < n; ++b) {
      const double k = static_cast<double>(signed_mode(b, n));
      const Complex term = forward
                               ? expm1_two_pi_i(m0 + k) / (Complex(0.0, 1.0) * (m0 + k))
                               : expm1_two_pi_i(-(m0 + k)) / (Complex(0.0, -1.0) * (m0 + k));
      qh[b] *= term / denom;
    }
    auto series = idft(qh);
    for (std::size_t i = 0; i < n; ++i) series[i] /= psi[i];
    return series;
  }

  // Composite Simpson over 4N panels; Ψ and ĝ are Fourier-interpolated onto
  // the refined grid. Intended for right sides with genuine spectral tails.
  const std::size_t refine = 4;
  const std::size_t nn = n * refine;
  const auto psi_fine = detail::refine_grid(psi_phase, refine);
  const auto g_fine = detail::refine_grid(g, refine);
  const double h = kTwoPi / static_cast<double>(nn);
  const Complex denom = forward ? expm1_two_pi_i(m0) : -expm1_two_pi_i(-m0);
  std::vector<Complex> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t base = i * refine;
    auto integrand = [&](std::size_t j) {
      // j-th refined node of s; wraps t ± s onto the periodic grid.
      const double s = h * static_cast<double>(j);
      const std::size_t idx = forward ? (base + j) % nn : (base + nn - (j % nn)) % nn;
      const Complex inner = forward
                                ? m0 * s + psi_fine[idx] - psi_fine[base]
                                : -(m0 * s + psi_fine[base] - psi_fine[idx]);
      return std::exp(Complex(0.0, 1.0) * inner) * g_fine[idx];
    };
    Complex acc = integrand(0) + integrand(nn);
    for (std::size_t j = 1; j < nn; j += 2) acc += 4.0 * integrand(j);
    for (std::size_t j = 2; j < nn; j += 2) acc += 2.0 * integrand(j);
    u[i] = acc * (h / 3.0) / denom;
  }
  return u;
}

// Weighted period average ∫₀^{2π} e^{iΦ(t,ξ)} v̂(t,ξ) dt (periodic trapezoid;
// the integrand is 2π-periodic precisely because ξ is resonant).
inline Complex compatibility_integral(const CauchyFactor& factor, const LatticePoint& xi,
                                      std::span<const Complex> v, double tol_z = 1e-9) {
  const std::size_t n = factor.grid_size();
  if (v.size() != n) throw std::invalid_argument("compatibility_integral: grid mismatch");
  const Complex m0 = factor.mean_multiplier(xi);
  if (!detail::mode_is_resonant(m0, tol_z))
    throw std::invalid_argument("compatibility_integral: mode is not resonant (contract violation)");
  const auto m0_int = static_cast<std::int64_t>(std::llround(m0.real()));
  if (std::abs(m0_int) >= static_cast<std::int64_t>(n / 2))
    throw std::invalid_argument("resonant mean beyond the t-grid Nyquist; refine n_t");
  const auto psi = factor.periodic_phase_slice(xi);
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = grid_point(detail::reduced_phase_index(m0_int, i, n), n);
    acc += std::exp(Complex(0.0, 1.0) * (theta + psi[i])) * v[i];
  }
  return acc * (kTwoPi / static_cast<double>(n));
}

struct ResonantModeSolution {
  ModeStatus status = ModeStatus::ResonantOk;
  Complex compatibility{0.0, 0.0};
  std::vector<Complex> u;  // empty when incompatible
};

// Sol-6 on a resonant mode; the averaged multiplier is snapped to its nearest
// integer so every phase below is exactly 2π-periodic.
inline ResonantModeSolution solve_mode_resonant(const CauchyFactor& factor, const LatticePoint& xi,
                                                std::span<const Complex> v,
                                                const SolverOptions& opts = {}) {
  const std::size_t n = factor.grid_size();
  if (v.size() != n) throw std::invalid_argument("solve_mode_resonant: grid mismatch");
  const Complex m0 = factor.mean_multiplier(xi);
  if (!detail::mode_is_resonant(m0, opts.tol_z))
    throw std::invalid_argument("solve_mode_resonant: mode is not resonant (contract violation)");
  const auto m0_int = static_cast<std::int64_t>(std::llround(m0.real()));
  if (std::abs(m0_int) >= static_cast<std::int64_t>(n / 2))
    throw std::invalid_argument("resonant mean beyond the t-grid Nyquist; refine n_t");

  const auto psi_phase = factor.periodic_phase_slice(xi);
  const double swing = detail::imag_swing(psi_phase);
  detail::check_swing(swing);

  ResonantModeSolution out;
  if (swing > detail::kBigFloatSwingThreshold) {
    auto big = detail::solve_mode_resonant_big(psi_phase, v, m0_int);
    out.compatibility = big.compatibility;
    if (std::abs(out.compatibility) > opts.tol_compat * (1.0 + sup_norm(v))) {
      out.status = ModeStatus::ResonantIncompatible;
      return out;
    }
    out.u = std::move(big.u);
    return out;
  }

  std::vector<Complex> weight(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = grid_point(detail::reduced_phase_index(m0_int, i, n), n);
    weight[i] = std::exp(Complex(0.0, 1.0) * (theta + psi_phase[i]));
    r[i] = weight[i] * v[i];
  }

  out.compatibility = periodic_integral(r);
  if (std::abs(out.compatibility) > opts.tol_compat * (1.0 + sup_norm(v))) {
    out.status = ModeStatus::ResonantIncompatible;
    return out;
  }
  // Cumulative integral of the (numerically) zero-mean periodic integrand.
  auto cumulative = spectral_antiderivative(r);
  out.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.u[i] = cumulative[i] / weight[i];
  return out;
}

struct FactorSolveResult {
  SpectralField field;
  std::vector<ModeSolveOutcome> outcomes;
  bool partial = false;  // some resonant mode was incompatible (zero-filled)
};

// Solves F u = f (physical right side); dispatches every lattice mode to the
// resonant or nonresonant branch and reports per-mode outcomes.
inline FactorSolveResult solve_factor(const CauchyFactor& factor, const SpectralField& f,
                                      const SolverOptions& opts = {}) {
  if (factor.grid_size() != f.n_t())
    throw std::invalid_argument("solve_factor: t-grid mismatch between factor and field");
  const std::size_t n = f.n_t();
  FactorSolveResult result{SpectralField(f.window(), n), {}, false};
  const auto& points = f.window().points();
  result.outcomes.reserve(points.size());

  for (std::size_t m = 0; m < points.size(); ++m) {
    const auto& xi = points[m];
    const auto fhat = f.mode(m);
    std::vector<Complex> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = Complex(0.0, 1.0) * fhat[i];

    ModeSolveOutcome outcome;
    outcome.xi = xi;
    const Complex m0 = factor.mean_multiplier(xi);
    std::vector<Complex> u;
    if (detail::mode_is_resonant(m0, opts.tol_z)) {
      auto sol = solve_mode_resonant(factor, xi, g, opts);
      outcome.status = sol.status;
      outcome.compatibility = sol.compatibility;
      if (sol.status == ModeStatus::ResonantIncompatible) {
        result.partial = true;  // zero-filled, flagged
      } else {
        u = std::move(sol.u);
      }
    } else {
      outcome.status = ModeStatus::NonResonant;
      outcome.denominator = expm1_two_pi_i(m0);
      outcome.near_resonant = torus_gap(m0) <= opts.near_resonant_gap;
      u = solve_mode_nonresonant(factor, xi, g, opts);
    }

    if (!u.empty()) {
      // First-order residual ∂_t û + iM û - ĝ, relative to ‖ĝ‖.
      auto du = spectral_derivative(u);
      const auto mult = factor.multiplier_slice(xi);
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(du[i] + Complex(0.0, 1.0) * mult[i] * u[i] - g[i]));
      outcome.residual = worst / std::max(sup_norm(g), 1e-30);
      auto dst = result.field.mode(m);
      std::copy(u.begin(), u.end(), dst.begin());
    }
    result.outcomes.push_back(std::move(outcome));
  }
  return result;
}

struct ChainObstruction {
  std::size_t factor_index = 0;  // 1-based
  std::vector<LatticePoint> modes;
};

struct StageSummary {
  std::size_t factor_index = 0;  // 1-based
  bool partial = false;
  std::size_t resonant_modes = 0;
  std::size_t near_resonant_modes = 0;
  double max_residual = 0.0;
  std::vector<ModeSolveOutcome> outcomes;
};

struct ProductSolveResult {
  SpectralField field;
  bool ok = true;
  std::optional<ChainObstruction> obstruction;
  std::vector<StageSummary> stages;
};

// Solves L u = f by factor chaining: F₁ v₁ = f, F₂ v₂ = v₁, ..., F_m u = v_{m-1}.
// A partial stage aborts the chain with a structured obstruction record.
inline ProductSolveResult solve_product(const ProductOperator& op, const SpectralField& f,
                                        const SolverOptions& opts = {}) {
  ProductSolveResult result{SpectralField(f.window(), f.n_t()), true, {}, {}};
  SpectralField v = f;
  for (std::size_t j = 0; j < op.order(); ++j) {
    auto stage = solve_factor(op.factor(j), v, opts);
    StageSummary summary;
    summary.factor_index = j + 1;
    summary.partial = stage.partial;
    for (const auto& o : stage.outcomes) {
      if (o.status != ModeStatus::NonResonant) ++summary.resonant_modes;
      if (o.near_resonant) ++summary.near_resonant_modes;
      summary.max_residual = std::max(summary.max_residual, o.residual);
    }
    summary.outcomes = std::move(stage.outcomes);
    result.stages.push_back(std::move(summary));
    if (stage.partial) {
      ChainObstruction obs;
      obs.factor_index = j + 1;
      for (const auto& o : result.stages.back().outcomes)
        if (o.status == ModeStatus::ResonantIncompatible) obs.modes.push_back(o.xi);
      result.obstruction = std::move(obs);
      result.ok = false;
      result.field = std::move(stage.field);  // solvable part of the failing stage
      return result;
    }
    v = std::move(stage.field);
  }
  result.field = std::move(v);
  return result;
}

}  // namespace toruscauchy

#endif  // TORUSCAUCHY_SOLVER_HPP
