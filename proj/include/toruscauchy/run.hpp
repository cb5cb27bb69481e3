// Subcommand dispatch and deterministic report emission. Per-ξ tables go to
// CSV, verdicts to JSON; identical configuration and seed produce
// byte-identical artifacts.
#ifndef TORUSCAUCHY_RUN_HPP
#define TORUSCAUCHY_RUN_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "toruscauchy/config.hpp"
#include "toruscauchy/diagnostics.hpp"

namespace toruscauchy::cli {

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  bool exact = false;
};

namespace detail {

inline std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0.0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + (dir / name).string());
  return out;
}

inline SpectralField build_rhs(const RunConfig& cfg, const LatticeWindow& window,
                               std::uint64_t seed) {
  SpectralField f(window, cfg.n_t);
  switch (cfg.rhs.kind) {
    case RhsSpec::Kind::None:
      throw std::runtime_error("solve requires an 'rhs' block");
    case RhsSpec::Kind::FourierTable:
      for (const auto& [coords, modes] : cfg.rhs.entries) {
        const LatticePoint xi(coords);
        if (!window.contains(xi))
          throw std::runtime_error("rhs entry at ξ = " + xi.to_string() + " outside the window");
        auto coeff = PeriodicCoefficient::from_fourier(modes, cfg.n_t);
        auto dst = f.mode(xi);
        for (std::size_t i = 0; i < cfg.n_t; ++i) dst[i] = coeff.samples()[i];
      }
      return f;
    case RhsSpec::Kind::RandomBandlimited:
      return toruscauchy::detail::random_bandlimited_field(window, cfg.n_t, cfg.rhs.bandlimit,
                                                           seed, cfg.rhs.zero_mean_mode);
  }
  throw std::logic_error("unreachable rhs kind");
}

inline void write_field_csv(std::ofstream& out, const SpectralField& field) {
  out << "xi,t_index,t,re_u,im_u\n";
  const auto& points = field.window().points();
  for (std::size_t m = 0; m < points.size(); ++m) {
    const auto slice = field.mode(m);
    for (std::size_t i = 0; i < field.n_t(); ++i) {
      out << '"' << points[m].to_string() << '"' << ',' << i << ','
          << fmt(grid_point(i, field.n_t())) << ',' << fmt(slice[i].real()) << ','
          << fmt(slice[i].imag()) << '\n';
    }
  }
}

inline void write_outcomes_csv(std::ofstream& out, const std::vector<StageSummary>& stages) {
  out << "factor_index,xi,status,near_resonant,denominator_abs,compatibility_abs,residual\n";
  for (const auto& stage : stages) {
    for (const auto& o : stage.outcomes) {
      out << stage.factor_index << ',' << '"' << o.xi.to_string() << '"' << ','
          << to_string(o.status) << ',' << (o.near_resonant ? 1 : 0) << ','
          << fmt(std::abs(o.denominator)) << ',' << fmt(std::abs(o.compatibility)) << ','
          << fmt(o.residual) << '\n';
    }
  }
}

inline void write_scan_csv(std::ofstream& out, const SiegelReport& report) {
  out << "xi,re_m0,im_m0,tau_star,gap,log10_gap,local_exponent,resonant,probe\n";
  for (const auto& r : report.records) {
    out << '"' << r.xi_label << '"' << ',' << fmt(r.value.real()) << ',' << fmt(r.value.imag())
        << ',' << fmt(r.tau_star) << ',' << fmt(r.gap) << ',' << fmt(r.log10_gap) << ','
        << fmt(r.local_exponent) << ',' << (r.resonant ? 1 : 0) << ',' << (r.is_probe ? 1 : 0)
        << '\n';
  }
  out << "# summary classification=" << to_string(report.classification)
      << " fitted_exponent=" << fmt(report.fitted_exponent)
      << " resonant_beyond_zero=" << report.resonant_count_beyond_zero
      << " window_points=" << report.window_size << '\n';
}

inline void write_hoermander_csv(std::ofstream& out, const HoermanderReport& report) {
  out << "eta_hat,min_imag,max_imag,sign_changing_count,window_radius\n";
  out << fmt(report.eta_hat) << ',' << fmt(report.min_imag) << ',' << fmt(report.max_imag) << ','
      << report.sign_changing_modes.size() << ',' << report.window_radius << '\n';
  out << "# sign-changing modes follow, one per line\n";
  for (const auto& xi : report.sign_changing_modes) out << '"' << xi.to_string() << '"' << '\n';
}

inline json verdict_to_json(const GHVerdictReport& verdict, const RunConfig& cfg,
                            std::uint64_t seed, bool exact_mode) {
  json j;
  j["verdict"] = to_string(verdict.verdict);
  j["note"] = std::string("numerical evidence at window radius ") +
              std::to_string(verdict.window_radius) + "; not a proof";
  j["window"] = {{"dimension", cfg.dimension}, {"radius", cfg.window_radius}};
  j["grid"] = {{"n_t", cfg.n_t}};
  j["tolerances"] = {{"tol_z", cfg.tol_z}, {"tol_compat", cfg.tol_compat}};
  j["seed"] = seed;
  j["exact_mode"] = exact_mode;
  j["trace"] = verdict.trace;
  j["commuting"] = verdict.commuting;
  j["commutator_residuals"] = verdict.commutator_residuals;
  j["witness_constructed"] = verdict.witness_constructed;
  j["factors"] = json::array();
  for (const auto& f : verdict.factors) {
    json fj;
    fj["index"] = f.index;
    fj["constant_coefficient"] = f.constant_coefficient;
    fj["assume_hormander"] = f.assume_hormander;
    fj["hormander"] = {{"eta_hat", f.hormander.eta_hat},
                       {"min_imag", f.hormander.min_imag},
                       {"max_imag", f.hormander.max_imag},
                       {"sign_changing_count", f.hormander.sign_changing_modes.size()}};
    fj["siegel"] = {{"classification", to_string(f.siegel.classification)},
                    {"fitted_exponent", f.siegel.fitted_exponent},
                    {"resonant_beyond_zero", f.siegel.resonant_count_beyond_zero}};
    fj["resonant"] = {{"count", f.resonant_count},
                      {"count_beyond_zero", f.resonant_count_beyond_zero}};
    j["factors"].push_back(std::move(fj));
  }
  return j;
}

inline GHOptions gh_options_from(const RunConfig& cfg, std::uint64_t seed) {
  GHOptions opts;
  for (const auto& f : cfg.factors) {
    opts.declared_means.push_back(f.declared_mean);
    opts.assume_hormander.push_back(f.assume_hormander);
  }
  opts.tol_z = cfg.tol_z;
  opts.seed = seed;
  opts.extra_points = cfg.extra_points;
  return opts;
}

}  // namespace detail

inline int run_diagnose(const RunConfig& cfg, const std::filesystem::path& out_dir,
                        const RunOverrides& overrides) {
  const std::uint64_t seed = overrides.seed.value_or(cfg.seed);
  auto op = cfg.build_operator();
  LatticeWindow window(cfg.dimension, cfg.window_radius);
  auto verdict = gh_verdict(op, window, detail::gh_options_from(cfg, seed));
  json j = detail::verdict_to_json(verdict, cfg, seed, overrides.exact);

  if (overrides.exact) {
    // Cross-check resonant sets in exact arithmetic where declarations allow.
    json exact = json::array();
    for (std::size_t k = 0; k < cfg.factors.size(); ++k) {
      const auto& decl = cfg.factors[k];
      CauchyFactor factor(decl.coefficient, decl.symbol);
      auto exact_set = resonant_set(factor, window, ResonanceMode::Exact, cfg.tol_z,
                                    decl.declared_mean);
      auto float_set = resonant_set(factor, window, ResonanceMode::Float, cfg.tol_z);
      exact.push_back({{"factor", k + 1},
                       {"exact_count", exact_set.members.size()},
                       {"float_count", float_set.members.size()},
                       {"match", exact_set.members == float_set.members}});
    }
    j["exact_resonant_sets"] = std::move(exact);
  }

  auto out = detail::open_output(out_dir, "verdict.json");
  out << j.dump(2) << '\n';

  if (cfg.emit_scan_csv) {
    for (std::size_t k = 0; k < verdict.factors.size(); ++k) {
      auto scan_out =
          detail::open_output(out_dir, "scan_factor" + std::to_string(k + 1) + ".csv");
      detail::write_scan_csv(scan_out, verdict.factors[k].siegel);
      auto h_out =
          detail::open_output(out_dir, "hoermander_factor" + std::to_string(k + 1) + ".csv");
      detail::write_hoermander_csv(h_out, verdict.factors[k].hormander);
    }
  }
  return 0;
}

inline int run_scan(const RunConfig& cfg, const std::filesystem::path& out_dir,
                    const RunOverrides& /*overrides*/) {
  if (cfg.scan_factor_index > cfg.factors.size())
    throw std::runtime_error("scan.factor_index exceeds the factor count");
  const auto& decl = cfg.factors[cfg.scan_factor_index - 1];
  CauchyFactor factor(decl.coefficient, decl.symbol);
  FactorMeanSource source = FactorMeanSource::from_factor(factor, decl.declared_mean);
  LatticeWindow window(cfg.dimension, cfg.window_radius);
  SiegelOptions opts;
  opts.resonance_tol = cfg.tol_z;
  auto report = siegel_scan(source, window, cfg.extra_points, opts);
  auto out = detail::open_output(out_dir, "scan.csv");
  detail::write_scan_csv(out, report);
  return 0;
}

inline int run_solve(const RunConfig& cfg, const std::filesystem::path& out_dir,
                     const RunOverrides& overrides) {
  const std::uint64_t seed = overrides.seed.value_or(cfg.seed);
  auto op = cfg.build_operator();
  LatticeWindow window(cfg.dimension, cfg.window_radius);
  SpectralField f = detail::build_rhs(cfg, window, seed);
  SolverOptions opts;
  opts.tol_z = cfg.tol_z;
  opts.tol_compat = cfg.tol_compat;
  opts.orientation = cfg.orientation;
  opts.method = cfg.method;
  auto result = solve_product(op, f, opts);

  auto sol_out = detail::open_output(out_dir, "solution.csv");
  detail::write_field_csv(sol_out, result.field);
  auto modes_out = detail::open_output(out_dir, "modes.csv");
  detail::write_outcomes_csv(modes_out, result.stages);
  return result.ok ? 0 : 2;
}

inline int run_singular(const RunConfig& cfg, const std::filesystem::path& out_dir,
                        const RunOverrides& /*overrides*/) {
  auto op = cfg.build_operator();
  if (cfg.singular_factor_index > op.order())
    throw std::runtime_error("singular.factor_index exceeds the factor count");
  LatticeWindow window(cfg.dimension, cfg.window_radius);
  SolverOptions opts;
  opts.tol_z = cfg.tol_z;
  opts.tol_compat = cfg.tol_compat;

  if (cfg.singular_chain && op.order() > 1) {
    auto chain = chain_singular(op, cfg.singular_factor_index, window, opts, cfg.singular_sparsity);
    auto modes_out = detail::open_output(out_dir, "modes.csv");
    detail::write_outcomes_csv(modes_out, chain.stages);
    auto sol_out = detail::open_output(out_dir, "solution.csv");
    if (chain.witness) {
      detail::write_field_csv(sol_out, *chain.witness);
      return 0;
    }
    detail::write_field_csv(sol_out, SpectralField(window, cfg.n_t));
    return 2;  // obstruction: chain hypothesis not met
  }

  auto u = singular_solution(op.factor(cfg.singular_factor_index - 1), window,
                             cfg.singular_sparsity, cfg.tol_z);
  auto sol_out = detail::open_output(out_dir, "solution.csv");
  detail::write_field_csv(sol_out, u);
  return 0;
}

inline int run_roots(const RunConfig& cfg, const std::filesystem::path& out_dir,
                     const RunOverrides& /*overrides*/) {
  if (cfg.roots_symbols.empty())
    throw std::runtime_error("roots requires a 'roots.coefficient_symbols' block");
  LatticeWindow window(cfg.dimension, cfg.window_radius);
  auto out = detail::open_output(out_dir, "roots.csv");
  out << "xi";
  for (std::size_t j = 1; j <= cfg.roots_symbols.size(); ++j)
    out << ",sigma" << j << "_re,sigma" << j << "_im";
  out << '\n';
  for (const auto& xi : window.points()) {
    auto roots = symbol_roots(cfg.roots_symbols, xi);
    out << '"' << xi.to_string() << '"';
    for (const auto& r : roots) out << ',' << detail::fmt(r.real()) << ',' << detail::fmt(r.imag());
    out << '\n';
  }
  return 0;
}

// Dispatch; exit codes are 0 (success), 2 (partial solve / obstruction) and
// 1 for configuration or data errors (thrown as exceptions by the runners).
inline int run_subcommand(const std::string& name, const RunConfig& cfg,
                          const std::filesystem::path& out_dir, const RunOverrides& overrides = {}) {
  if (name == "diagnose") return run_diagnose(cfg, out_dir, overrides);
  if (name == "scan") return run_scan(cfg, out_dir, overrides);
  if (name == "solve") return run_solve(cfg, out_dir, overrides);
  if (name == "singular") return run_singular(cfg, out_dir, overrides);
  if (name == "roots") return run_roots(cfg, out_dir, overrides);
  throw std::runtime_error("unknown subcommand: " + name);
}

}  // namespace toruscauchy::cli

#endif  // TORUSCAUCHY_RUN_HPP
