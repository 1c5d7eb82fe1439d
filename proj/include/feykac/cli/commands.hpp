#pragma once

// The six tool commands. Each builds a Table from a validated RunConfig; none
// of them touches the output destination.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "feykac/cli/config.hpp"
#include "feykac/cli/table.hpp"
#include "feykac/fkmc.hpp"
#include "feykac/mehler.hpp"
#include "feykac/pde.hpp"
#include "feykac/potentials.hpp"
#include "feykac/splitting.hpp"

namespace feykac::cli {

struct CommandResult {
  Table table;
  bool pass = true;  // compare: every pairwise delta within tolerance
};

// Absolute tolerance for comparisons between the deterministic solvers.
inline constexpr double deterministic_tolerance = 1e-3;

namespace detail {

inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();

inline std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

}  // namespace detail

inline CommandResult cmd_oracle(const RunConfig& cfg) {
  CommandResult r;
  r.table.columns = {"t", "x", "k", "m1", "m2", "q_marginal"};
  for (double t : cfg.t) {
    for (double x : cfg.x) {
      r.table.add({t, x, closed_form_k(t, x), closed_form_moment1(t, x), closed_form_moment2(t, x),
                   kernel_marginal(t, x)});
    }
  }
  return r;
}

inline CommandResult cmd_mc(const RunConfig& cfg) {
  const auto v0 = builtin_v0(cfg.v0);
  const auto c = builtin(cfg.potential);
  CommandResult r;
  r.table.columns = {"t", "x", "mean", "std_error", "n_paths", "m_steps"};
  for (const auto& cell : estimate_field(cfg.t, cfg.x, v0, c, cfg.mc())) {
    r.table.add({cell.t, cell.x, cell.estimate.mean, cell.estimate.std_error, detail::as_int(cell.estimate.n_paths),
                 detail::as_int(cell.estimate.m_steps)});
  }
  return r;
}

inline CommandResult cmd_split(const RunConfig& cfg) {
  const auto v0 = builtin_v0(cfg.v0);
  const auto c = builtin(cfg.potential);
  CommandResult r;
  r.table.columns = {"t", "x", "n", "value"};
  for (double t : cfg.t) {
    const auto v = run_vn(t, cfg.n, v0, c, cfg.grid(), cfg.quad_order);
    const feykac::detail::UniformCubicSpline interp(v);
    for (double x : cfg.x) r.table.add({t, x, detail::as_int(cfg.n), interp(x)});
  }
  return r;
}

inline CommandResult cmd_pde(const RunConfig& cfg) {
  const auto v0 = builtin_v0(cfg.v0);
  const auto c = builtin(cfg.potential);
  CommandResult r;
  r.table.columns = {"t", "x", "dt", "value"};
  for (double t : cfg.t) {
    const auto v = solve_cn(v0, c, t, cfg.pde());
    const feykac::detail::UniformCubicSpline interp(v);
    for (double x : cfg.x) r.table.add({t, x, cfg.dt, interp(x)});
  }
  return r;
}

/**
 * Cross-checks the Monte Carlo estimate, the splitting scheme, the
 * Crank-Nicolson solver and (for c = 0) the Mehler semigroup. Tolerances:
 *   MC vs split, MC vs Mehler    3 std_error
 *   MC vs CN                     3 std_error + 1e-3
 *   split vs CN, X vs Mehler     1e-3
 */
inline CommandResult cmd_compare(const RunConfig& cfg) {
  const auto v0 = builtin_v0(cfg.v0);
  const auto c = builtin(cfg.potential);
  const bool with_mehler = c.vanishes();
  CommandResult r;
  r.table.columns = {"t",          "x",          "mc_mean",          "mc_stderr",       "split_value",
                     "pde_value",  "mehler_value", "delta_mc_split", "delta_mc_pde",    "delta_split_pde",
                     "delta_mc_mehler", "delta_split_mehler", "delta_pde_mehler", "pass"};
  const auto field = estimate_field(cfg.t, cfg.x, v0, c, cfg.mc());
  std::size_t k = 0;
  for (double t : cfg.t) {
    const feykac::detail::UniformCubicSpline split(run_vn(t, cfg.n, v0, c, cfg.grid(), cfg.quad_order));
    const feykac::detail::UniformCubicSpline pde(solve_cn(v0, c, t, cfg.pde()));
    for (double x : cfg.x) {
      const auto& mc = field[k++].estimate;
      const double sv = split(x);
      const double pv = pde(x);
      const double mv = with_mehler ? apply_semigroup(v0, t, x, cfg.quad_order) : detail::nan;
      const double d_ms = mc.mean - sv;
      const double d_mp = mc.mean - pv;
      const double d_sp = sv - pv;
      const double d_mm = mc.mean - mv;
      const double d_sm = sv - mv;
      const double d_pm = pv - mv;
      const double band = 3.0 * mc.std_error;
      bool ok = std::abs(d_ms) <= band && std::abs(d_mp) <= band + deterministic_tolerance &&
                std::abs(d_sp) <= deterministic_tolerance;
      if (with_mehler) {
        ok = ok && std::abs(d_mm) <= band && std::abs(d_sm) <= deterministic_tolerance &&
             std::abs(d_pm) <= deterministic_tolerance;
      }
      r.pass = r.pass && ok;
      r.table.add({t, x, mc.mean, mc.std_error, sv, pv, mv, d_ms, d_mp, d_sp, d_mm, d_sm, d_pm, ok});
    }
  }
  return r;
}

/// Dyadic refinement table. "level" rows hold v_{2^p}(t, x) and the change
/// from level p - 1; "limit" rows the extrapolated value and the fitted order;
/// "dyadic" rows (intermediate = true) the values at interior dyadic times.
inline CommandResult cmd_converge(const RunConfig& cfg) {
  const auto v0 = builtin_v0(cfg.v0);
  const auto c = builtin(cfg.potential);
  CommandResult r;
  r.table.columns = {"t", "kind", "p", "n", "tau", "x", "value", "diff", "diff_norm", "ratio", "order"};
  for (double t : cfg.t) {
    const auto study = dyadic_study(t, cfg.p_max, v0, c, cfg.grid(), cfg.x, cfg.dyadic_level, cfg.quad_order);
    for (const auto& e : study.entries) {
      double norm = detail::nan, ratio = detail::nan;
      if (e.p >= 2) norm = study.diff_norms[static_cast<std::size_t>(e.p - 2)];
      if (e.p >= 3) ratio = study.ratios[static_cast<std::size_t>(e.p - 3)];
      r.table.add({t, std::string("level"), std::int64_t{e.p}, detail::as_int(e.n), e.tau, e.x, e.value, e.diff, norm,
                   ratio, detail::nan});
    }
    if (cfg.intermediate) {
      for (const auto& e : study.intermediate) {
        r.table.add({t, std::string("dyadic"), std::int64_t{e.p}, detail::as_int(e.n), e.tau, e.x, e.value, e.diff,
                     detail::nan, detail::nan, detail::nan});
      }
    }
    if (cfg.p_max > 1) {
      for (std::size_t i = 0; i < study.probes.size(); ++i) {
        r.table.add({t, std::string("limit"), std::int64_t{cfg.p_max}, detail::as_int(std::size_t{1} << cfg.p_max), t,
                     study.probes[i], study.limit[i], detail::nan, detail::nan, detail::nan, study.order});
      }
    }
  }
  return r;
}

inline CommandResult run_command(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.command == "oracle") return cmd_oracle(cfg);
  if (cfg.command == "mc") return cmd_mc(cfg);
  if (cfg.command == "split") return cmd_split(cfg);
  if (cfg.command == "pde") return cmd_pde(cfg);
  if (cfg.command == "compare") return cmd_compare(cfg);
  return cmd_converge(cfg);
}

/// Full output document for cfg.format.
inline std::string render(const RunConfig& cfg, const CommandResult& result) {
  if (cfg.format == Format::Csv) return to_csv(result.table);
  Json doc;
  doc["command"] = cfg.command;
  doc["config"] = to_json(cfg);
  doc["columns"] = result.table.columns;
  doc["rows"] = rows_json(result.table);
  doc["pass"] = result.pass;
  return doc.dump(2) + "\n";
}

}  // namespace feykac::cli
