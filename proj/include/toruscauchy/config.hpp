// Run configuration: a single JSON document declaring the grid, the operator
// as an ordered factor list, task-specific blocks and tolerances. Unknown
// keys are rejected and all schema violations are reported at once.
#ifndef TORUSCAUCHY_CONFIG_HPP
#define TORUSCAUCHY_CONFIG_HPP

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "toruscauchy/bigmath.hpp"
#include "toruscauchy/coefficients.hpp"
#include "toruscauchy/operators.hpp"
#include "toruscauchy/solver.hpp"
#include "toruscauchy/symbols.hpp"

namespace toruscauchy::cli {

using json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& errors) {
    std::string all = "configuration invalid:";
    for (const auto& e : errors) all += "\n  " + e;
    return all;
  }
  std::vector<std::string> errors_;
};

struct FactorDecl {
  PeriodicCoefficient coefficient;
  ToroidalSymbol symbol;
  std::optional<ScalarValue> declared_mean;
  bool assume_hormander = false;
};

struct RhsSpec {
  enum class Kind { None, FourierTable, RandomBandlimited };
  Kind kind = Kind::None;
  // FourierTable: per-ξ lists of (k, value).
  std::vector<std::pair<std::vector<std::int64_t>, std::vector<std::pair<int, Complex>>>> entries;
  int bandlimit = 16;
  bool zero_mean_mode = true;  // zero out the ξ = 0 slice of random data
};

struct RunConfig {
  int dimension = 1;
  std::size_t n_t = 256;
  std::int64_t window_radius = 64;
  std::uint64_t seed = 12345;
  double tol_z = 1e-9;
  double tol_compat = 1e-8;

  std::vector<FactorDecl> factors;
  RhsSpec rhs;
  std::vector<BigInt> extra_points;
  std::size_t scan_factor_index = 1;  // 1-based
  Orientation orientation = Orientation::Forward;
  QuadratureMethod method = QuadratureMethod::Spectral;
  std::size_t singular_factor_index = 1;  // 1-based
  double singular_sparsity = 1.0;
  bool singular_chain = false;
  std::vector<ToroidalSymbol> roots_symbols;
  bool emit_scan_csv = false;

  ProductOperator build_operator() const {
    if (factors.empty()) throw std::runtime_error("config declares no operator factors");
    std::vector<CauchyFactor> fs;
    fs.reserve(factors.size());
    for (const auto& f : factors) fs.emplace_back(f.coefficient, f.symbol);
    return ProductOperator(std::move(fs));
  }
};

namespace detail {

class Parser {
 public:
  RunConfig parse(const std::string& text) {
    json root;
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError({std::string("not valid JSON: ") + e.what()});
    }
    if (!root.is_object()) throw ConfigError({"top level must be an object"});

    RunConfig cfg;
    check_keys(root, "",
               {"dimension", "n_t", "window", "seed", "tolerances", "operator", "rhs",
                "extra_points", "scan", "solve", "singular", "roots", "emit_scan_csv"});

    cfg.dimension = static_cast<int>(get_int(root, "", "dimension", 1, 1, 3));
    cfg.n_t = static_cast<std::size_t>(get_int(root, "", "n_t", 256, 8, 1 << 20));
    if (!is_power_of_two(cfg.n_t)) error("n_t: must be a power of two >= 8");
    cfg.window_radius = get_int(root, "", "window", 64, 1, 1 << 30);
    cfg.seed = static_cast<std::uint64_t>(get_int(root, "", "seed", 12345, 0, std::numeric_limits<std::int64_t>::max()));
    cfg.emit_scan_csv = get_bool(root, "", "emit_scan_csv", false);

    if (root.contains("tolerances")) {
      const auto& t = root["tolerances"];
      if (!t.is_object()) {
        error("tolerances: must be an object");
      } else {
        check_keys(t, "tolerances.", {"tol_z", "tol_compat"});
        cfg.tol_z = get_positive(t, "tolerances.", "tol_z", 1e-9);
        cfg.tol_compat = get_positive(t, "tolerances.", "tol_compat", 1e-8);
      }
    }

    if (root.contains("operator")) parse_operator(root["operator"], cfg);
    if (root.contains("rhs")) parse_rhs(root["rhs"], cfg);
    if (root.contains("extra_points")) parse_extra_points(root["extra_points"], cfg);
    if (root.contains("scan")) parse_scan(root["scan"], cfg);
    if (root.contains("solve")) parse_solve(root["solve"], cfg);
    if (root.contains("singular")) parse_singular(root["singular"], cfg);
    if (root.contains("roots")) parse_roots(root["roots"], cfg);

    if (!errors_.empty()) throw ConfigError(errors_);
    return cfg;
  }

 private:
  void error(std::string msg) { errors_.push_back(std::move(msg)); }

  void check_keys(const json& obj, const std::string& prefix, const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      bool ok = false;
      for (const auto& a : allowed) ok = ok || a == key;
      if (!ok) error(prefix + key + ": unknown key");
    }
  }

  std::int64_t get_int(const json& obj, const std::string& prefix, const std::string& key,
                       std::int64_t fallback, std::int64_t lo, std::int64_t hi) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) {
      error(prefix + key + ": must be an integer");
      return fallback;
    }
    const auto v = obj[key].get<std::int64_t>();
    if (v < lo || v > hi) {
      error(prefix + key + ": out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      return fallback;
    }
    return v;
  }

  bool get_bool(const json& obj, const std::string& prefix, const std::string& key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) {
      error(prefix + key + ": must be a boolean");
      return fallback;
    }
    return obj[key].get<bool>();
  }

  double get_positive(const json& obj, const std::string& prefix, const std::string& key,
                      double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) {
      error(prefix + key + ": must be a number");
      return fallback;
    }
    const double v = obj[key].get<double>();
    if (!(v > 0.0)) {
      error(prefix + key + ": must be positive");
      return fallback;
    }
    return v;
  }

  Complex get_complex(const json& v, const std::string& path, bool* ok) {
    *ok = true;
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      return Complex(v[0].get<double>(), v[1].get<double>());
    error(path + ": expected a number or [re, im]");
    *ok = false;
    return Complex(0.0, 0.0);
  }

  void parse_operator(const json& op, RunConfig& cfg) {
    if (!op.is_object()) {
      error("operator: must be an object");
      return;
    }
    check_keys(op, "operator.", {"factors"});
    if (!op.contains("factors") || !op["factors"].is_array() || op["factors"].empty()) {
      error("operator.factors: must be a nonempty array");
      return;
    }
    std::size_t idx = 0;
    for (const auto& f : op["factors"]) {
      const std::string path = "operator.factors[" + std::to_string(idx++) + "]";
      if (!f.is_object()) {
        error(path + ": must be an object");
        continue;
      }
      check_keys(f, path + ".", {"coefficient", "symbol", "assume_hormander"});
      auto coeff = parse_coefficient(f.contains("coefficient") ? f["coefficient"] : json(),
                                     path + ".coefficient", cfg);
      auto symbol = parse_symbol(f.contains("symbol") ? f["symbol"] : json(), path + ".symbol", cfg);
      bool hormander = false;
      if (f.contains("assume_hormander")) {
        if (!f["assume_hormander"].is_boolean())
          error(path + ".assume_hormander: must be a boolean");
        else
          hormander = f["assume_hormander"].get<bool>();
      }
      if (coeff && symbol)
        cfg.factors.push_back({std::move(coeff->first), std::move(*symbol),
                               std::move(coeff->second), hormander});
    }
  }

  std::optional<std::pair<PeriodicCoefficient, std::optional<ScalarValue>>> parse_coefficient(
      const json& c, const std::string& path, RunConfig& cfg) {
    if (!c.is_object() || !c.contains("kind") || !c["kind"].is_string()) {
      error(path + ": must be an object with a string 'kind'");
      return std::nullopt;
    }
    const std::string kind = c["kind"].get<std::string>();
    try {
      if (kind == "constant") {
        check_keys(c, path + ".", {"kind", "value"});
        if (!c.contains("value")) {
          error(path + ".value: required for constant coefficients");
          return std::nullopt;
        }
        const auto& v = c["value"];
        if (v.is_string()) {
          auto scalar = ScalarValue::parse(v.get<std::string>());
          return std::make_pair(PeriodicCoefficient::constant(scalar.approx(), cfg.n_t),
                                std::optional<ScalarValue>(scalar));
        }
        bool ok = false;
        const Complex z = get_complex(v, path + ".value", &ok);
        if (!ok) return std::nullopt;
        return std::make_pair(PeriodicCoefficient::constant(z, cfg.n_t),
                              std::optional<ScalarValue>(ScalarValue::from_double(z)));
      }
      if (kind == "fourier") {
        check_keys(c, path + ".", {"kind", "modes"});
        if (!c.contains("modes") || !c["modes"].is_array()) {
          error(path + ".modes: must be an array of [k, re, im]");
          return std::nullopt;
        }
        std::vector<std::pair<int, Complex>> modes;
        for (const auto& mjson : c["modes"]) {
          if (!mjson.is_array() || mjson.size() != 3) {
            error(path + ".modes: entries must be [k, re, im]");
            return std::nullopt;
          }
          modes.emplace_back(mjson[0].get<int>(),
                             Complex(mjson[1].get<double>(), mjson[2].get<double>()));
        }
        return std::make_pair(PeriodicCoefficient::from_fourier(modes, cfg.n_t),
                              std::optional<ScalarValue>());
      }
      if (kind == "samples") {
        check_keys(c, path + ".", {"kind", "values"});
        if (!c.contains("values") || !c["values"].is_array()) {
          error(path + ".values: must be an array of [re, im]");
          return std::nullopt;
        }
        std::vector<Complex> values;
        for (const auto& vjson : c["values"]) {
          bool ok = false;
          values.push_back(get_complex(vjson, path + ".values", &ok));
          if (!ok) return std::nullopt;
        }
        return std::make_pair(PeriodicCoefficient::from_samples(std::move(values)),
                              std::optional<ScalarValue>());
      }
      if (kind == "bump_pair") {
        check_keys(c, path + ".", {"kind", "support_a", "support_b"});
        auto interval = [&](const char* key) -> std::optional<std::pair<double, double>> {
          if (!c.contains(key) || !c[key].is_array() || c[key].size() != 2) {
            error(path + "." + key + ": must be [lo, hi]");
            return std::nullopt;
          }
          return std::make_pair(c[key][0].get<double>(), c[key][1].get<double>());
        };
        auto a = interval("support_a"), b = interval("support_b");
        if (!a || !b) return std::nullopt;
        auto [bump_a, bump_b] = bump_pair(*a, *b, cfg.n_t);
        // c(t) = a(t) + i b(t)
        std::vector<Complex> samples(cfg.n_t);
        for (std::size_t i = 0; i < cfg.n_t; ++i)
          samples[i] = Complex(bump_a.samples()[i].real(), bump_b.samples()[i].real());
        return std::make_pair(PeriodicCoefficient::from_samples(std::move(samples)),
                              std::optional<ScalarValue>());
      }
    } catch (const std::exception& e) {
      error(path + ": " + e.what());
      return std::nullopt;
    }
    error(path + ".kind: unknown coefficient kind '" + kind + "'");
    return std::nullopt;
  }

  std::optional<ToroidalSymbol> parse_symbol(const json& s, const std::string& path,
                                             RunConfig& cfg) {
    if (!s.is_object() || !s.contains("kind") || !s["kind"].is_string()) {
      error(path + ": must be an object with a string 'kind'");
      return std::nullopt;
    }
    const std::string kind = s["kind"].get<std::string>();
    std::optional<ToroidalSymbol> symbol;
    try {
      if (kind == "coordinate") {
        check_keys(s, path + ".", {"kind", "axis", "scale"});
        const int axis = static_cast<int>(get_int(s, path + ".", "axis", 1, 1, cfg.dimension));
        symbol = ToroidalSymbol::coordinate(axis - 1);
      } else if (kind == "sqrt_laplacian") {
        check_keys(s, path + ".", {"kind", "scale"});
        symbol = ToroidalSymbol::sqrt_laplacian();
      } else if (kind == "laplacian") {
        check_keys(s, path + ".", {"kind", "scale"});
        symbol = ToroidalSymbol::laplacian();
      } else if (kind == "power") {
        check_keys(s, path + ".", {"kind", "order", "scale"});
        if (!s.contains("order") || !s["order"].is_number()) {
          error(path + ".order: required number for power symbols");
          return std::nullopt;
        }
        symbol = ToroidalSymbol::power(s["order"].get<double>());
      } else if (kind == "example_alpha") {
        check_keys(s, path + ".", {"kind", "scale"});
        symbol = ToroidalSymbol::example_alpha();
      } else if (kind == "example_beta") {
        check_keys(s, path + ".", {"kind", "scale"});
        symbol = ToroidalSymbol::example_beta();
      } else if (kind == "example_alpha_beta") {
        check_keys(s, path + ".", {"kind", "scale"});
        symbol = ToroidalSymbol::example_alpha_beta();
      } else {
        error(path + ".kind: unknown symbol kind '" + kind + "'");
        return std::nullopt;
      }
      if (s.contains("scale")) {
        bool ok = false;
        const Complex sc = get_complex(s["scale"], path + ".scale", &ok);
        if (ok) symbol = symbol->scaled(sc);
      }
    } catch (const std::exception& e) {
      error(path + ": " + e.what());
      return std::nullopt;
    }
    return symbol;
  }

  void parse_rhs(const json& r, RunConfig& cfg) {
    if (!r.is_object() || !r.contains("kind") || !r["kind"].is_string()) {
      error("rhs: must be an object with a string 'kind'");
      return;
    }
    const std::string kind = r["kind"].get<std::string>();
    if (kind == "fourier_table") {
      check_keys(r, "rhs.", {"kind", "entries"});
      if (!r.contains("entries") || !r["entries"].is_array()) {
        error("rhs.entries: must be an array");
        return;
      }
      cfg.rhs.kind = RhsSpec::Kind::FourierTable;
      std::size_t idx = 0;
      for (const auto& e : r["entries"]) {
        const std::string path = "rhs.entries[" + std::to_string(idx++) + "]";
        if (!e.is_object() || !e.contains("xi") || !e["xi"].is_array() || !e.contains("modes")) {
          error(path + ": must be {xi: [coords], modes: [[k, re, im], ...]}");
          continue;
        }
        check_keys(e, path + ".", {"xi", "modes"});
        std::vector<std::int64_t> coords;
        for (const auto& cj : e["xi"]) coords.push_back(cj.get<std::int64_t>());
        if (coords.size() != static_cast<std::size_t>(cfg.dimension)) {
          error(path + ".xi: expected " + std::to_string(cfg.dimension) + " coordinates");
          continue;
        }
        std::vector<std::pair<int, Complex>> modes;
        for (const auto& mjson : e["modes"]) {
          if (!mjson.is_array() || mjson.size() != 3) {
            error(path + ".modes: entries must be [k, re, im]");
            break;
          }
          modes.emplace_back(mjson[0].get<int>(),
                             Complex(mjson[1].get<double>(), mjson[2].get<double>()));
        }
        cfg.rhs.entries.emplace_back(std::move(coords), std::move(modes));
      }
    } else if (kind == "random_bandlimited") {
      check_keys(r, "rhs.", {"kind", "bandlimit", "zero_mean_mode"});
      cfg.rhs.kind = RhsSpec::Kind::RandomBandlimited;
      cfg.rhs.bandlimit = static_cast<int>(get_int(r, "rhs.", "bandlimit", 16, 1, 1 << 16));
      cfg.rhs.zero_mean_mode = get_bool(r, "rhs.", "zero_mean_mode", true);
    } else {
      error("rhs.kind: unknown rhs kind '" + kind + "'");
    }
  }

  void parse_extra_points(const json& a, RunConfig& cfg) {
    if (!a.is_array()) {
      error("extra_points: must be an array of integer strings");
      return;
    }
    for (const auto& p : a) {
      try {
        if (p.is_string())
          cfg.extra_points.emplace_back(p.get<std::string>());
        else if (p.is_number_integer())
          cfg.extra_points.emplace_back(p.get<std::int64_t>());
        else
          error("extra_points: entries must be integers or integer strings");
      } catch (const std::exception&) {
        error("extra_points: unparseable integer '" + p.dump() + "'");
      }
    }
  }

  void parse_scan(const json& s, RunConfig& cfg) {
    if (!s.is_object()) {
      error("scan: must be an object");
      return;
    }
    check_keys(s, "scan.", {"factor_index"});
    cfg.scan_factor_index = static_cast<std::size_t>(get_int(s, "scan.", "factor_index", 1, 1, 1 << 20));
  }

  void parse_solve(const json& s, RunConfig& cfg) {
    if (!s.is_object()) {
      error("solve: must be an object");
      return;
    }
    check_keys(s, "solve.", {"orientation", "method"});
    if (s.contains("orientation")) {
      const std::string o = s["orientation"].is_string() ? s["orientation"].get<std::string>() : "";
      if (o == "forward")
        cfg.orientation = Orientation::Forward;
      else if (o == "reverse")
        cfg.orientation = Orientation::Reverse;
      else
        error("solve.orientation: must be 'forward' or 'reverse'");
    }
    if (s.contains("method")) {
      const std::string mth = s["method"].is_string() ? s["method"].get<std::string>() : "";
      if (mth == "spectral")
        cfg.method = QuadratureMethod::Spectral;
      else if (mth == "simpson")
        cfg.method = QuadratureMethod::Simpson;
      else
        error("solve.method: must be 'spectral' or 'simpson'");
    }
  }

  void parse_singular(const json& s, RunConfig& cfg) {
    if (!s.is_object()) {
      error("singular: must be an object");
      return;
    }
    check_keys(s, "singular.", {"factor_index", "sparsity", "chain"});
    cfg.singular_factor_index = static_cast<std::size_t>(get_int(s, "singular.", "factor_index", 1, 1, 1 << 20));
    if (s.contains("sparsity")) cfg.singular_sparsity = get_positive(s, "singular.", "sparsity", 1.0);
    cfg.singular_chain = get_bool(s, "singular.", "chain", false);
  }

  void parse_roots(const json& r, RunConfig& cfg) {
    if (!r.is_object()) {
      error("roots: must be an object");
      return;
    }
    check_keys(r, "roots.", {"coefficient_symbols"});
    if (!r.contains("coefficient_symbols") || !r["coefficient_symbols"].is_array() ||
        r["coefficient_symbols"].empty()) {
      error("roots.coefficient_symbols: must be a nonempty array of symbol specs");
      return;
    }
    std::size_t idx = 0;
    for (const auto& s : r["coefficient_symbols"]) {
      auto symbol = parse_symbol(s, "roots.coefficient_symbols[" + std::to_string(idx++) + "]", cfg);
      if (symbol) cfg.roots_symbols.push_back(std::move(*symbol));
    }
  }

  std::vector<std::string> errors_;
};

}  // namespace detail

inline RunConfig parse_config(const std::string& text) { return detail::Parser().parse(text); }

}  // namespace toruscauchy::cli

#endif  // TORUSCAUCHY_CONFIG_HPP
