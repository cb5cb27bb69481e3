// Gap functions, generalized Siegel scanning, resonant sets and the exact /
// high-precision oracles (Liouville sums, continued fractions).
//
// Convention for the combined size: |(τ,ξ)| = |τ| + |ξ| with Euclidean |ξ|.
// The scan checks only the minimizing τ* for each ξ; at any other integer τ
// the gap is at least 1/2, so the envelope is unaffected.
#ifndef TORUSCAUCHY_DIOPHANTINE_HPP
#define TORUSCAUCHY_DIOPHANTINE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "toruscauchy/bigmath.hpp"
#include "toruscauchy/coefficients.hpp"
#include "toruscauchy/lattice.hpp"
#include "toruscauchy/operators.hpp"
#include "toruscauchy/symbols.hpp"

namespace toruscauchy {

// d(z) = min_{τ∈Z} |τ - z|, attained at τ* = round(Re z) (ties to even; the
// distance does not depend on the tie choice).
inline std::pair<std::int64_t, double> integer_gap(Complex z) {
  const double re = z.real();
  const double tau = std::nearbyint(re);  // FE_TONEAREST: half-even
  const double d = std::hypot(re - tau, z.imag());
  return {static_cast<std::int64_t>(tau), d};
}

struct BigGap {
  BigInt nearest;
  BigFloat distance;
};

inline BigGap integer_gap_big(const BigComplex& z) {
  BigInt tau = round_half_even(z.re);
  BigFloat dre = z.re - BigFloat(tau);
  return {tau, sqrt(dre * dre + z.im * z.im)};
}

struct RationalGap {
  BigInt nearest;
  BigRational distance;  // exact |x - τ*|
};

inline RationalGap integer_gap_rational(const BigRational& x) {
  BigInt tau = round_half_even(x);
  BigRational d = x - BigRational(tau);
  if (d < 0) d = -d;
  return {tau, d};
}

// |1 - e^{2πiz}|, computed from the reduced argument so near-resonant values
// keep full relative accuracy. For real z this equals 2|sin(πz)|.
inline double torus_gap(Complex z) {
  const double r = z.real() - std::nearbyint(z.real());
  const double em = -std::expm1(-kTwoPi * z.imag());  // 1 - e^{-2πy}
  const double s = std::sin(std::numbers::pi * r);
  const double e = std::exp(-kTwoPi * z.imag());
  return std::sqrt(em * em + 4.0 * e * s * s);
}

// e^{2πiz} - 1 without cancellation near resonances (e^{2πi·round(Re z)} = 1
// exactly, so only the reduced argument enters).
inline Complex expm1_two_pi_i(Complex z) {
  const double r = z.real() - std::nearbyint(z.real());
  const double y = z.imag();
  const double c = std::cos(kTwoPi * r), s = std::sin(kTwoPi * r);
  const double em = std::expm1(-kTwoPi * y);  // e^{-2πy} - 1
  const double sh = std::sin(std::numbers::pi * r);
  return {em * c - 2.0 * sh * sh, (1.0 + em) * s};
}

// ---------------------------------------------------------------------------
// Exact symbol values
// ---------------------------------------------------------------------------

// p(ξ) as an exact quantity where the evaluation rule permits: a rational, or
// a provably irrational square root (enough to decide integrality).
struct ExactSymbolValue {
  enum class Kind { Rational, IrrationalSqrt, Unavailable } kind = Kind::Unavailable;
  BigRational value;  // Kind::Rational
};

inline ExactSymbolValue exact_symbol_value(const ToroidalSymbol& symbol, const LatticePoint& xi) {
  // Only integer real scales keep the evaluation exact.
  const Complex sc = symbol.scale();
  if (sc.imag() != 0.0 || sc.real() != std::nearbyint(sc.real())) return {};
  const BigInt scale(static_cast<std::int64_t>(sc.real()));
  const BigInt s(xi.square_norm());

  auto sqrt_value = [&](const BigInt& radicand, const BigInt& multiplier) -> ExactSymbolValue {
    BigInt root = sqrt(radicand);
    if (root * root == radicand) return {ExactSymbolValue::Kind::Rational, BigRational(multiplier * root)};
    if (multiplier == 0) return {ExactSymbolValue::Kind::Rational, BigRational(0)};
    return {ExactSymbolValue::Kind::IrrationalSqrt, BigRational(0)};
  };

  switch (symbol.kind()) {
    case SymbolKind::Coordinate:
      return {ExactSymbolValue::Kind::Rational, BigRational(scale * BigInt(xi[symbol.coordinate_axis()]))};
    case SymbolKind::Laplacian:
      return {ExactSymbolValue::Kind::Rational, BigRational(scale * s)};
    case SymbolKind::SqrtLaplacian:
      return sqrt_value(s, scale);
    case SymbolKind::Power: {
      const double nu = symbol.order();
      if (nu < 0.0 || nu != std::nearbyint(nu)) return {};
      const auto e = static_cast<unsigned>(nu);
      if (xi.is_zero()) return {ExactSymbolValue::Kind::Rational, BigRational(scale)};  // norm guard
      if (e % 2 == 0) return {ExactSymbolValue::Kind::Rational, BigRational(scale * pow(s, e / 2))};
      return sqrt_value(s, scale * pow(s, (e - 1) / 2));
    }
    case SymbolKind::ExampleAlpha: {
      const std::int64_t x = xi[0];
      if (x >= 0) return {ExactSymbolValue::Kind::Rational, BigRational(0)};
      if (x % 2 != 0) return {ExactSymbolValue::Kind::Rational, BigRational(BigInt(scale), BigInt(x))};
      return {ExactSymbolValue::Kind::Rational, BigRational(scale * BigInt(-x))};
    }
    case SymbolKind::ExampleBeta: {
      const std::int64_t x = xi[0];
      return {ExactSymbolValue::Kind::Rational, BigRational(scale * BigInt(x < 0 ? 1 : x))};
    }
    default:
      return {};
  }
}

// ---------------------------------------------------------------------------
// Siegel scanning
// ---------------------------------------------------------------------------

// A sequence ξ ↦ c(ξ) presented at the precision it genuinely has.
class SiegelSource {
 public:
  virtual ~SiegelSource() = default;

  virtual BigComplex eval(const LatticePoint& xi) const = 0;

  // Probes at 1-D lattice points far beyond any enumerable window.
  virtual bool supports_big_probes() const { return false; }
  virtual BigComplex eval_big(const BigInt&) const {
    throw std::logic_error("SiegelSource: big probes unsupported by this source");
  }
  // Exact rational value at a big probe, when the sequence is rational.
  virtual std::optional<BigRational> eval_exact_big(const BigInt&) const { return std::nullopt; }
};

// c(ξ) = λ·p(ξ) for a declared constant λ; evaluates at the best precision
// the declaration supports.
class FactorMeanSource final : public SiegelSource {
 public:
  FactorMeanSource(ScalarValue mean, ToroidalSymbol symbol)
      : mean_(std::move(mean)), symbol_(std::move(symbol)), mean_hp_(mean_.high_precision()) {}

  static FactorMeanSource from_factor(const CauchyFactor& factor,
                                      std::optional<ScalarValue> declared_mean = {}) {
    ScalarValue mean = declared_mean ? *declared_mean : ScalarValue::from_double(factor.coefficient().mean());
    return FactorMeanSource(std::move(mean), factor.symbol());
  }

  BigComplex eval(const LatticePoint& xi) const override {
    const auto exact = exact_symbol_value(symbol_, xi);
    if (exact.kind == ExactSymbolValue::Kind::Rational) {
      const BigFloat p = to_bigfloat(exact.value);
      return {mean_hp_.re * p, mean_hp_.im * p};
    }
    if (symbol_.kind() == SymbolKind::SqrtLaplacian || symbol_.kind() == SymbolKind::Power) {
      // |ξ| is exact in BigFloat even when irrational as a real number.
      const BigFloat norm = sqrt(BigFloat(xi.square_norm()));
      const BigFloat guarded = norm < 1 ? BigFloat(1) : norm;
      const Complex sc = symbol_.scale();
      BigFloat p = symbol_.kind() == SymbolKind::SqrtLaplacian
                       ? norm
                       : pow(guarded, BigFloat(symbol_.order()));
      return {mean_hp_.re * BigFloat(sc.real()) * p - mean_hp_.im * BigFloat(sc.imag()) * p,
              mean_hp_.re * BigFloat(sc.imag()) * p + mean_hp_.im * BigFloat(sc.real()) * p};
    }
    const Complex p = symbol_(xi);
    return {mean_hp_.re * BigFloat(p.real()) - mean_hp_.im * BigFloat(p.imag()),
            mean_hp_.re * BigFloat(p.imag()) + mean_hp_.im * BigFloat(p.real())};
  }

  bool supports_big_probes() const override {
    return symbol_.kind() == SymbolKind::Coordinate && mean_.is_real();
  }

  BigComplex eval_big(const BigInt& xi) const override {
    if (!supports_big_probes()) return SiegelSource::eval_big(xi);
    const Complex sc = symbol_.scale();
    const BigFloat p = BigFloat(sc.real()) * BigFloat(xi);
    return {mean_hp_.re * p, mean_hp_.im * p};
  }

  std::optional<BigRational> eval_exact_big(const BigInt& xi) const override {
    if (!mean_.is_exact_rational() || mean_.rational_im() != 0) return std::nullopt;
    if (symbol_.kind() != SymbolKind::Coordinate) return std::nullopt;
    const Complex sc = symbol_.scale();
    if (sc.imag() != 0.0 || sc.real() != std::nearbyint(sc.real())) return std::nullopt;
    return mean_.rational_re() * BigRational(BigInt(static_cast<std::int64_t>(sc.real())) * xi);
  }

 private:
  ScalarValue mean_;
  ToroidalSymbol symbol_;
  BigComplex mean_hp_;
};

// Arbitrary double-precision sequence (explicit maps, tables, tests).
class ExplicitSource final : public SiegelSource {
 public:
  explicit ExplicitSource(std::function<Complex(const LatticePoint&)> f) : f_(std::move(f)) {}
  BigComplex eval(const LatticePoint& xi) const override {
    const Complex v = f_(xi);
    return {BigFloat(v.real()), BigFloat(v.imag())};
  }

 private:
  std::function<Complex(const LatticePoint&)> f_;
};

struct SiegelRecord {
  std::string xi_label;
  double xi_norm = 0.0;
  Complex value{0.0, 0.0};  // c(ξ), double image
  double tau_star = 0.0;    // nearest integer (double image)
  double gap = 0.0;         // d(ξ)
  double log10_gap = 0.0;   // -inf when d(ξ) = 0
  double local_exponent = std::numeric_limits<double>::quiet_NaN();
  bool resonant = false;
  bool is_probe = false;
};

enum class SiegelClassification { Satisfied, LiouvilleSuspect, Resonant };

inline const char* to_string(SiegelClassification c) {
  switch (c) {
    case SiegelClassification::Satisfied: return "SATISFIED";
    case SiegelClassification::LiouvilleSuspect: return "LIOUVILLE_SUSPECT";
    case SiegelClassification::Resonant: return "RESONANT";
  }
  return "?";
}

struct SiegelShellStat {
  int shell = 0;  // dyadic shell 2^{j-1} < |ξ| ≤ 2^j
  double max_exponent = 0.0;
};

struct SiegelReport {
  std::vector<SiegelRecord> records;
  double fitted_exponent = std::numeric_limits<double>::quiet_NaN();  // M̂
  SiegelClassification classification = SiegelClassification::Satisfied;
  std::size_t resonant_count_beyond_zero = 0;
  std::size_t window_size = 0;
  std::vector<SiegelShellStat> shells;
};

struct SiegelOptions {
  double resonance_tol = 1e-9;
  // RESONANT asks for a window-proportional recurrence of exact hits, so a
  // finite resonant set does not trip the classification.
  double resonant_fraction = 1.0 / 32.0;
  std::size_t resonant_min_count = 3;
  // LIOUVILLE_SUSPECT: local exponent climbing by more than this across
  // three successive populated dyadic shells.
  double liouville_step = 1.0;
};

namespace detail {

inline double bigfloat_log10(const BigFloat& x) {
  return (log(x) / log(BigFloat(10))).convert_to<double>();
}

struct GapAnalysis {
  BigFloat tau_abs;
  BigFloat gap;        // may be exactly zero
  bool exact_zero = false;
  double tau_double = 0.0;
};

inline void finish_record(SiegelRecord& rec, const GapAnalysis& g, const BigFloat& xi_norm,
                          const SiegelOptions& opts, bool exact_source) {
  rec.tau_star = g.tau_double;
  rec.gap = g.gap.convert_to<double>();
  if (g.exact_zero || (!exact_source && g.gap <= BigFloat(opts.resonance_tol))) {
    rec.resonant = true;
    rec.gap = 0.0;  // below resolution: treated as an exact hit
    rec.log10_gap = -std::numeric_limits<double>::infinity();
    return;
  }
  rec.log10_gap = bigfloat_log10(g.gap);
  const BigFloat size = g.tau_abs + xi_norm;
  if (size >= 2 && g.gap > 0) {
    rec.local_exponent = (-log(g.gap) / log(size)).convert_to<double>();
  }
}

}  // namespace detail

// Scans c(ξ) over the window (plus optional far probes) for the generalized
// Siegel condition |τ - c(ξ)| ≥ C|(τ,ξ)|^{-M}. The fitted exponent M̂ is the
// running max of m(ξ) = -log d(ξ)/log(|τ*|+|ξ|) over |ξ| ≥ 2.
inline SiegelReport siegel_scan(const SiegelSource& source, const LatticeWindow& window,
                                const std::vector<BigInt>& extra_points = {},
                                const SiegelOptions& opts = {}) {
  if (window.size() == 0) throw std::invalid_argument("siegel_scan: empty window");
  SiegelReport report;
  report.window_size = window.size();

  std::map<int, double> shell_max;
  auto note_shell = [&shell_max](double norm, double exponent) {
    if (!(norm >= 2.0) || !std::isfinite(exponent)) return;
    const int shell = static_cast<int>(std::ceil(std::log2(norm)));
    auto it = shell_max.find(shell);
    if (it == shell_max.end() || exponent > it->second) shell_max[shell] = exponent;
  };

  for (const auto& xi : window.points()) {
    SiegelRecord rec;
    rec.xi_label = xi.to_string();
    rec.xi_norm = xi.norm();
    const BigComplex z = source.eval(xi);
    rec.value = {z.re.convert_to<double>(), z.im.convert_to<double>()};
    BigGap g = integer_gap_big(z);
    detail::GapAnalysis a{abs(BigFloat(g.nearest)), g.distance, false,
                          BigFloat(g.nearest).convert_to<double>()};
    detail::finish_record(rec, a, BigFloat(xi.norm()), opts, false);
    if (rec.resonant && !xi.is_zero()) ++report.resonant_count_beyond_zero;
    if (rec.xi_norm >= 2.0) note_shell(rec.xi_norm, rec.local_exponent);
    report.records.push_back(std::move(rec));
  }

  for (const auto& xi : extra_points) {
    SiegelRecord rec;
    rec.is_probe = true;
    rec.xi_label = xi.str();
    const BigFloat xi_norm = abs(BigFloat(xi));
    rec.xi_norm = xi_norm.convert_to<double>();
    detail::GapAnalysis a;
    if (auto exact = source.eval_exact_big(xi)) {
      RationalGap g = integer_gap_rational(*exact);
      rec.value = {to_bigfloat(*exact).convert_to<double>(), 0.0};
      a = {abs(BigFloat(g.nearest)), to_bigfloat(g.distance), g.distance == 0,
           BigFloat(g.nearest).convert_to<double>()};
      detail::finish_record(rec, a, xi_norm, opts, true);
    } else {
      const BigComplex z = source.eval_big(xi);
      rec.value = {z.re.convert_to<double>(), z.im.convert_to<double>()};
      BigGap g = integer_gap_big(z);
      a = {abs(BigFloat(g.nearest)), g.distance, false, BigFloat(g.nearest).convert_to<double>()};
      detail::finish_record(rec, a, xi_norm, opts, false);
    }
    if (rec.resonant && xi != 0) ++report.resonant_count_beyond_zero;
    if (rec.xi_norm >= 2.0) note_shell(rec.xi_norm, rec.local_exponent);
    report.records.push_back(std::move(rec));
  }

  double fitted = std::numeric_limits<double>::quiet_NaN();
  for (const auto& rec : report.records) {
    if (rec.xi_norm >= 2.0 && std::isfinite(rec.local_exponent)) {
      if (!std::isfinite(fitted) || rec.local_exponent > fitted) fitted = rec.local_exponent;
    }
  }
  report.fitted_exponent = fitted;

  for (const auto& [shell, m] : shell_max) report.shells.push_back({shell, m});

  const std::size_t resonant_threshold =
      std::max<std::size_t>(opts.resonant_min_count,
                            static_cast<std::size_t>(std::ceil(opts.resonant_fraction *
                                                               static_cast<double>(window.size()))));
  if (report.resonant_count_beyond_zero >= resonant_threshold) {
    report.classification = SiegelClassification::Resonant;
    return report;
  }
  for (std::size_t i = 0; i + 2 < report.shells.size(); ++i) {
    const double d1 = report.shells[i + 1].max_exponent - report.shells[i].max_exponent;
    const double d2 = report.shells[i + 2].max_exponent - report.shells[i + 1].max_exponent;
    if (d1 > opts.liouville_step && d2 > opts.liouville_step) {
      report.classification = SiegelClassification::LiouvilleSuspect;
      return report;
    }
  }
  report.classification = SiegelClassification::Satisfied;
  return report;
}

struct SimultaneousReport {
  bool in_gs_infinity = true;  // every sequence SATISFIED
  std::vector<SiegelReport> per_source;
};

inline SimultaneousReport simultaneous_scan(
    const std::vector<const SiegelSource*>& sources, const LatticeWindow& window,
    const std::vector<BigInt>& extra_points = {}, const SiegelOptions& opts = {}) {
  SimultaneousReport rep;
  for (const auto* src : sources) {
    rep.per_source.push_back(siegel_scan(*src, window, extra_points, opts));
    if (rep.per_source.back().classification != SiegelClassification::Satisfied)
      rep.in_gs_infinity = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Resonant sets
// ---------------------------------------------------------------------------

enum class ResonanceMode { Float, Exact };

struct ResonantSet {
  std::vector<LatticePoint> members;  // window enumeration order
  int dimension = 1;                  // the window the set is exhaustive on
  std::int64_t window_radius = 0;
  ResonanceMode mode = ResonanceMode::Float;
  double tol = 1e-9;
};

// Z_M = {ξ : M₀(ξ) ∈ Z}. Exact mode decides membership in rational
// arithmetic and requires the declared mean (and the symbol) to be exactly
// representable.
inline ResonantSet resonant_set(const CauchyFactor& factor, const LatticeWindow& window,
                                ResonanceMode mode, double tol = 1e-9,
                                const std::optional<ScalarValue>& declared_mean = {}) {
  ResonantSet set;
  set.dimension = window.dim();
  set.window_radius = window.radius();
  set.mode = mode;
  set.tol = tol;
  if (mode == ResonanceMode::Float) {
    for (const auto& xi : window.points()) {
      const Complex m0 = factor.mean_multiplier(xi);
      if (std::abs(m0.real() - std::nearbyint(m0.real())) <= tol && std::abs(m0.imag()) <= tol)
        set.members.push_back(xi);
    }
    return set;
  }

  if (!declared_mean || !declared_mean->is_exact_rational())
    throw std::invalid_argument("exact mode requested on irrational declared data");
  const BigRational& a = declared_mean->rational_re();
  const BigRational& b = declared_mean->rational_im();
  for (const auto& xi : window.points()) {
    const auto p = exact_symbol_value(factor.symbol(), xi);
    bool member = false;
    if (p.kind == ExactSymbolValue::Kind::Rational) {
      // M₀ = (a + ib)·p with real rational p: integral iff b·p = 0 and a·p ∈ Z.
      const BigRational re = a * p.value, im = b * p.value;
      member = (im == 0) && (denominator(re) == 1);
    } else if (p.kind == ExactSymbolValue::Kind::IrrationalSqrt) {
      // q·√s with rational q ≠ 0 is irrational; membership only via q = 0.
      member = (a == 0 && b == 0);
    } else {
      throw std::invalid_argument("exact mode requested on irrational declared data");
    }
    if (member) set.members.push_back(xi);
  }
  return set;
}

// ---------------------------------------------------------------------------
// Number-theoretic oracles
// ---------------------------------------------------------------------------

// Σ_{k=1..depth} base^{-k!} as an exact rational.
inline BigRational liouville_number(int base, int depth) {
  return ScalarValue::liouville(base, depth).rational_re();
}

struct Convergent {
  BigInt p;
  BigInt q;
};

// Continued-fraction convergents of x, starting from ⌊x⌋/1. Terminates early
// when the remainder is rational to working precision.
inline std::vector<Convergent> best_rational_approximations(BigFloat x, std::size_t count) {
  std::vector<Convergent> out;
  BigInt h_prev(1), k_prev(0);
  BigInt h_prev2(0), k_prev2(1);
  const BigFloat eps = pow(BigFloat(2), -200);
  while (out.size() < count) {
    const BigFloat fl = floor(x);
    const BigInt a = fl.convert_to<BigInt>();
    const BigInt h = a * h_prev + h_prev2;
    const BigInt k = a * k_prev + k_prev2;
    out.push_back({h, k});
    h_prev2 = h_prev;
    k_prev2 = k_prev;
    h_prev = h;
    k_prev = k;
    const BigFloat frac = x - fl;
    if (frac < eps) break;  // rational within working precision
    x = 1 / frac;
  }
  return out;
}

}  // namespace toruscauchy

#endif  // TORUSCAUCHY_DIOPHANTINE_HPP
