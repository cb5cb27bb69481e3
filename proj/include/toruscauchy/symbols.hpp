// Toroidal symbols p(ξ): Fourier multipliers with a declared growth order ν
// and bound constant C, i.e. |p(ξ)| ≤ C·max(|ξ|,1)^ν on the lattice.
#ifndef TORUSCAUCHY_SYMBOLS_HPP
#define TORUSCAUCHY_SYMBOLS_HPP

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "toruscauchy/dft.hpp"
#include "toruscauchy/lattice.hpp"

namespace toruscauchy {

enum class SymbolKind {
  Power,          // |ξ|^ν (with norm guard at ξ = 0)
  Coordinate,     // ξ_axis
  SqrtLaplacian,  // |ξ|
  Laplacian,      // |ξ|²
  Table,          // explicit values on a window
  ExampleAlpha,   // piecewise real part of the mixed-growth example (n = 1)
  ExampleBeta,    // piecewise imaginary part of the same example (n = 1)
  ExampleAlphaBeta,
};

namespace detail {

// α(ξ) = 1/ξ for negative odd ξ, |ξ| for negative even ξ, 0 otherwise.
inline double example_alpha(std::int64_t xi) {
  if (xi >= 0) return 0.0;
  if (xi % 2 != 0) return 1.0 / static_cast<double>(xi);
  return static_cast<double>(-xi);
}

// β(ξ) = 1 for negative ξ, ξ otherwise.
inline double example_beta(std::int64_t xi) {
  return xi < 0 ? 1.0 : static_cast<double>(xi);
}

}  // namespace detail

class ToroidalSymbol {
 public:
  static ToroidalSymbol power(double order) {
    ToroidalSymbol s(SymbolKind::Power, order, 1.0);
    return s;
  }

  static ToroidalSymbol coordinate(int axis = 0) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("coordinate symbol: axis out of range");
    ToroidalSymbol s(SymbolKind::Coordinate, 1.0, 1.0);
    s.axis_ = axis;
    return s;
  }

  static ToroidalSymbol sqrt_laplacian() { return ToroidalSymbol(SymbolKind::SqrtLaplacian, 1.0, 1.0); }
  static ToroidalSymbol laplacian() { return ToroidalSymbol(SymbolKind::Laplacian, 2.0, 1.0); }

  static ToroidalSymbol table(LatticeWindow window, std::vector<Complex> values,
                              double order, double bound_constant) {
    if (values.size() != window.size())
      throw std::invalid_argument("table symbol: one value per window point required");
    ToroidalSymbol s(SymbolKind::Table, order, bound_constant);
    s.table_ = std::make_shared<TableData>(TableData{std::move(window), std::move(values)});
    return s;
  }

  static ToroidalSymbol example_alpha() { return ToroidalSymbol(SymbolKind::ExampleAlpha, 1.0, 1.0); }
  static ToroidalSymbol example_beta() { return ToroidalSymbol(SymbolKind::ExampleBeta, 1.0, 1.0); }
  static ToroidalSymbol example_alpha_beta() {
    return ToroidalSymbol(SymbolKind::ExampleAlphaBeta, 1.0, std::sqrt(2.0));
  }

  // Same rule multiplied by a complex constant; order is kept, the bound
  // constant absorbs |factor|.
  ToroidalSymbol scaled(Complex factor) const {
    ToroidalSymbol s = *this;
    s.scale_ *= factor;
    s.bound_constant_ *= std::abs(factor);
    return s;
  }

  SymbolKind kind() const { return kind_; }
  double order() const { return order_; }
  double bound_constant() const { return bound_constant_; }
  Complex scale() const { return scale_; }

  Complex operator()(const LatticePoint& xi) const {
    switch (kind_) {
      case SymbolKind::Power:
        return scale_ * std::pow(xi.norm_guard(), order_);
      case SymbolKind::Coordinate:
        if (axis_ >= xi.dim()) throw std::invalid_argument("coordinate symbol: axis exceeds dimension");
        return scale_ * static_cast<double>(xi[axis_]);
      case SymbolKind::SqrtLaplacian:
        return scale_ * xi.norm();
      case SymbolKind::Laplacian:
        return scale_ * static_cast<double>(xi.square_norm());
      case SymbolKind::Table: {
        if (!table_->window.contains(xi))
          throw std::out_of_range("symbol undefined at ξ = " + xi.to_string());
        return scale_ * table_->values[table_->window.index_of(xi)];
      }
      case SymbolKind::ExampleAlpha:
        return scale_ * detail::example_alpha(xi[0]);
      case SymbolKind::ExampleBeta:
        return scale_ * detail::example_beta(xi[0]);
      case SymbolKind::ExampleAlphaBeta:
        return scale_ * Complex(detail::example_alpha(xi[0]), detail::example_beta(xi[0]));
    }
    throw std::logic_error("unreachable symbol kind");
  }

  double real_part(const LatticePoint& xi) const { return (*this)(xi).real(); }
  double imag_part(const LatticePoint& xi) const { return (*this)(xi).imag(); }

  int coordinate_axis() const { return axis_; }

 private:
  struct TableData {
    LatticeWindow window;
    std::vector<Complex> values;
  };

  ToroidalSymbol(SymbolKind kind, double order, double bound_constant)
      : kind_(kind), order_(order), bound_constant_(bound_constant) {}

  SymbolKind kind_;
  double order_;
  double bound_constant_;
  Complex scale_{1.0, 0.0};
  int axis_ = 0;
  std::shared_ptr<const TableData> table_;
};

struct SymbolBoundReport {
  bool holds = true;
  LatticePoint worst_point;
  double worst_ratio = 0.0;  // max over the window of |p(ξ)| / norm_guard(ξ)^ν
};

inline SymbolBoundReport verify_symbol_bound(const ToroidalSymbol& symbol,
                                             const LatticeWindow& window,
                                             double bound_constant, double order) {
  if (window.size() == 0) throw std::invalid_argument("verify_symbol_bound: empty window");
  SymbolBoundReport report;
  report.worst_point = window.points().front();
  for (const auto& xi : window.points()) {
    const double ratio = std::abs(symbol(xi)) / std::pow(xi.norm_guard(), order);
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_point = xi;
    }
  }
  report.holds = report.worst_ratio <= bound_constant * (1.0 + 1e-12);
  return report;
}

}  // namespace toruscauchy

#endif  // TORUSCAUCHY_SYMBOLS_HPP
