#pragma once

// Crank-Nicolson reference solver for
//   dv/dt = v_xx - (x^2 + c(t, x)) v   on [x_min, x_max],  v = 0 at both ends,
// second-order central differences in x, c sampled at the half step.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "feykac/detail/tridiagonal.hpp"
#include "feykac/errors.hpp"
#include "feykac/grid.hpp"
#include "feykac/potentials.hpp"

namespace feykac {

struct PdeConfig {
  Grid grid;
  double dt = 1e-4;

  void validate() const {
    grid.validate();
    if (!(dt > 0.0)) throw ParameterError("time step must be positive");
  }
};

// Number of steps of size dt that make up t; rejects non-integer ratios.
inline std::size_t step_count(double t, double dt) {
  const double ratio = t / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw ParameterError("t / dt must be a positive integer, got " + std::to_string(ratio));
  }
  return static_cast<std::size_t>(rounded);
}

/// Crank-Nicolson run from v0 to time t. observe(step, tau, v) is called for
/// the initial state (step 0) and after every step.
inline GridFunction solve_cn_observed(
    const InitialCondition& v0, const Potential& c, double t, const PdeConfig& cfg,
    const std::function<void(std::size_t, double, const GridFunction&)>& observe) {
  cfg.validate();
  if (!(t > 0.0)) throw DomainError("solve_cn requires t > 0");
  if (!decays_at(v0, cfg.grid.edge())) {
    throw ParameterError("initial condition '" + v0.spec + "' does not decay at the grid edge");
  }
  const std::size_t steps = step_count(t, cfg.dt);
  const Grid& grid = cfg.grid;
  const std::size_t n = grid.n_points;
  const double h = grid.spacing();
  const double dt = cfg.dt;
  const double r = dt / (2.0 * h * h);

  GridFunction v = GridFunction::tabulate(grid, v0.evaluate);
  v[0] = 0.0;
  v[n - 1] = 0.0;
  const double norm0 = v.l2_norm();
  if (observe) observe(0, 0.0, v);
  if (n < 3) return v;

  const std::size_t m = n - 2;  // interior unknowns
  std::vector<double> xs(m), a(m, -r), b(m), cc(m, -r), rhs(m), scratch, pot(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) xs[i] = grid.x(i + 1);
  const bool with_c = !c.vanishes();

  for (std::size_t k = 0; k < steps; ++k) {
    const double tau_mid = (static_cast<double>(k) + 0.5) * dt;
    for (std::size_t i = 0; i < m; ++i) {
      if (with_c) pot[i] = c(tau_mid, xs[i]);
      const double diag = xs[i] * xs[i] + pot[i];
      const double half = 0.5 * dt * diag;
      b[i] = 1.0 + 2.0 * r + half;
      const double left = v[i];
      const double mid = v[i + 1];
      const double right = v[i + 2];
      rhs[i] = r * left + (1.0 - 2.0 * r - half) * mid + r * right;
    }
    detail::solve_tridiagonal(a, b, cc, rhs, scratch);
    for (std::size_t i = 0; i < m; ++i) v[i + 1] = rhs[i];

    const double tau = static_cast<double>(k + 1) * dt;
    const double norm = v.l2_norm();
    const double allowed = 10.0 * std::exp(-c.inf_bound * tau) * norm0;
    if (!std::isfinite(norm) || norm > allowed) {
      throw SolverDiagnostic("Crank-Nicolson norm grew to " + std::to_string(norm) + " at t = " +
                             std::to_string(tau) + " (bound " + std::to_string(allowed) + ")");
    }
    if (observe) observe(k + 1, tau, v);
  }
  return v;
}

inline GridFunction solve_cn(const InitialCondition& v0, const Potential& c, double t, const PdeConfig& cfg = {}) {
  return solve_cn_observed(v0, c, t, cfg, {});
}

struct L2Report {
  double lhs = 0.0;    // int_alpha^beta ||v(t)||^2 dt from the discrete solution
  double rhs = 0.0;    // ||v0||^2 int_alpha^beta exp(-2 t inf c) dt
  double ratio = 0.0;  // lhs / rhs, 0 when both vanish
};

/// Discrete check of
///   int_[alpha,beta] x R |v|^2 dt dx <= ||v0||^2 int_alpha^beta exp(-2 t inf(c)) dt.
/// alpha and beta must be multiples of dt.
inline L2Report l2_inequality_check(const InitialCondition& v0, const Potential& c, double alpha, double beta,
                                    const PdeConfig& cfg = {}) {
  cfg.validate();
  if (!(alpha >= 0.0) || !(beta > alpha)) throw ParameterError("l2 check needs 0 <= alpha < beta");
  if (v0.oracle_only()) throw ParameterError("l2 check needs a square-integrable initial condition");
  const std::size_t first = alpha == 0.0 ? 0 : step_count(alpha, cfg.dt);
  const std::size_t last = step_count(beta, cfg.dt);

  // trapezoid in time over the recorded squared norms
  double lhs = 0.0;
  double prev = 0.0;
  solve_cn_observed(v0, c, beta, cfg, [&](std::size_t step, double, const GridFunction& v) {
    if (step < first || step > last) return;
    const double nrm = v.l2_norm();
    const double sq = nrm * nrm;
    if (step > first) lhs += 0.5 * cfg.dt * (prev + sq);
    prev = sq;
  });

  const double v0_norm = GridFunction::tabulate(cfg.grid, v0.evaluate).l2_norm();
  const double m = c.inf_bound;
  double time_integral = beta - alpha;
  if (m != 0.0) time_integral = (std::exp(-2.0 * m * alpha) - std::exp(-2.0 * m * beta)) / (2.0 * m);

  L2Report report;
  report.lhs = lhs;
  report.rhs = v0_norm * v0_norm * time_integral;
  report.ratio = report.rhs > 0.0 ? report.lhs / report.rhs : 0.0;
  return report;
}

}  // namespace feykac
