#pragma once

// Alternating approximation v_n^(t) of the perturbed problem.
//
// [0, t] is cut at tau_k = k t / (2n). On each even piece [tau_2k, tau_2k+1]
// the harmonic-oscillator flow runs at double speed (Mehler time 2 dt); on
// each odd piece [tau_2k+1, tau_2k+2] the potential, frozen at the right
// end tau_2k+2, acts alone at double speed: v <- exp(-2 c(tau_2k+2, x) dt) v.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "feykac/errors.hpp"
#include "feykac/grid.hpp"
#include "feykac/mehler.hpp"
#include "feykac/potentials.hpp"
#include "feykac/quadrature.hpp"

namespace feykac {

struct SplitSchedule {
  double t = 1.0;
  std::size_t n = 1;

  SplitSchedule(double t_, std::size_t n_) : t(t_), n(n_) {
    if (!(t > 0.0)) throw DomainError("split schedule requires t > 0");
    if (n == 0) throw ParameterError("split schedule requires n >= 1");
  }

  double dt() const { return t / static_cast<double>(2 * n); }

  // tau_k, exact at both ends.
  double boundary(std::size_t k) const {
    if (k >= 2 * n) return t;
    return t * static_cast<double>(k) / static_cast<double>(2 * n);
  }
};

inline GridFunction step_even(const GridFunction& v, double dt, int quad_order = default_quad_order) {
  if (!(dt > 0.0)) throw DomainError("step_even requires dt > 0");
  return apply_semigroup_grid(v, 2.0 * dt, quad_order);
}

inline GridFunction step_odd(const GridFunction& v, double dt, const Potential& c, double tau_next) {
  if (c.vanishes()) return v;
  GridFunction out = v;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] *= std::exp(-2.0 * c(tau_next, v.x(i)) * dt);
  }
  return out;
}

namespace detail {

inline GridFunction tabulate_resolved(const InitialCondition& v0, const Grid& grid) {
  grid.validate();
  if (!decays_at(v0, grid.edge())) {
    throw ParameterError("initial condition '" + v0.spec + "' does not decay at the grid edge |x| = " +
                         format_arg(grid.edge()));
  }
  return GridFunction::tabulate(grid, v0.evaluate);
}

}  // namespace detail

/// Runs the alternating scheme and calls observe(tau, v) after every odd step,
/// i.e. at tau = (k + 1) t / n for k = 0 .. n - 1. Returns v_n^(t)(t, .).
inline GridFunction run_vn_observed(double t, std::size_t n, const InitialCondition& v0, const Potential& c,
                                    const Grid& grid, int quad_order,
                                    const std::function<void(double, const GridFunction&)>& observe) {
  const SplitSchedule schedule(t, n);
  GridFunction v = detail::tabulate_resolved(v0, grid);
  const double dt = schedule.dt();
  for (std::size_t k = 0; k < n; ++k) {
    v = step_even(v, dt, quad_order);
    const double tau_next = schedule.boundary(2 * k + 2);
    v = step_odd(v, dt, c, tau_next);
    if (observe) observe(tau_next, v);
  }
  return v;
}

inline GridFunction run_vn(double t, std::size_t n, const InitialCondition& v0, const Potential& c,
                           const Grid& grid = {}, int quad_order = default_quad_order) {
  return run_vn_observed(t, n, v0, c, grid, quad_order, {});
}

inline constexpr std::size_t max_iterated_dimension = 3;

/**
 * v_n^(t)(t, x) from its closed n-fold integral over (sigma_1 .. sigma_n),
 * sigma_0 = 0, with a = ch(2t/n), s = sh(2t/n):
 *
 *   (2 pi s)^(-n/2) v0(sigma_n + x / a^n)
 *   exp(-a / (2s) sum_j (sigma_{n-j+1} - sigma_{n-j} / a)^2)
 *   exp(-s / (2a) sum_j (sigma_{n-j} + x / a^{n-j})^2)
 *   exp(-(t/n) sum_j c(j t / n, sigma_{n-j} + x / a^{n-j})),   j = 1 .. n.
 *
 * Quadrature runs over y_j = sigma_{n+1-j} - sigma_{n-j} / a (unit Jacobian),
 * sampled as iid N(0, s / a) by tensor Gauss-Hermite; the printed integrand
 * is divided by that sampling density at each node.
 */
inline double iterated_integral_vn(double t, std::size_t n, double x, const InitialCondition& v0,
                                   const Potential& c, int quad_order = 48) {
  if (n > max_iterated_dimension) {
    throw DimensionError("iterated integral limited to n <= 3, got n = " + std::to_string(n));
  }
  if (n == 0) throw ParameterError("iterated integral requires n >= 1");
  if (!(t > 0.0)) throw DomainError("iterated integral requires t > 0");
  if (!v0.bounded()) throw ParameterError("iterated integral requires a bounded v0");

  const double h = 2.0 * t / static_cast<double>(n);
  const double a = std::cosh(h);
  const double s = std::sinh(h);
  const double var = s / a;
  const double sd = std::sqrt(var);
  const double tn = t / static_cast<double>(n);
  const double log_prefactor = -0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi * s);
  const double log_sampling_norm = -0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi * var);

  // x / a^k for k = 0 .. n
  std::vector<double> shifted(n + 1);
  shifted[0] = x;
  for (std::size_t k = 1; k <= n; ++k) shifted[k] = shifted[k - 1] / a;

  std::vector<double> y(n + 1), sigma(n + 1);
  const auto integrand = [&](std::span<const double> z) {
    // y[1..n]
    for (std::size_t j = 1; j <= n; ++j) y[j] = sd * z[j - 1];
    sigma[0] = 0.0;
    for (std::size_t k = 1; k <= n; ++k) sigma[k] = y[n + 1 - k] + sigma[k - 1] / a;

    double first = 0.0, second = 0.0, pot = 0.0, sampling = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double d = sigma[n - j + 1] - sigma[n - j] / a;
      first += d * d;
      const double arg = sigma[n - j] + shifted[n - j];
      second += arg * arg;
      if (!c.vanishes()) pot += c(static_cast<double>(j) * tn, arg);
      sampling += y[j] * y[j];
    }
    const double log_printed = log_prefactor - 0.5 * (a / s) * first - 0.5 * (s / a) * second - tn * pot;
    const double log_density = log_sampling_norm - 0.5 * sampling / var;
    return v0(sigma[n] + shifted[n]) * std::exp(log_printed - log_density);
  };
  return tensor_expect(n, gauss_hermite_rule(quad_order), integrand);
}

struct DyadicEntry {
  int p = 0;
  std::size_t n = 0;
  double tau = 0.0;
  double x = 0.0;
  double value = 0.0;
  double diff = std::numeric_limits<double>::quiet_NaN();  // value - value at level p - 1
};

struct DyadicStudy {
  double t = 0.0;
  std::vector<double> probes;
  std::vector<DyadicEntry> entries;         // at tau = t, ordered by (p, probe)
  std::vector<DyadicEntry> intermediate;    // at tau = j t / 2^q, 0 < tau < t
  std::vector<double> diff_norms;           // max over probes of |diff| for p = 2 .. p_max
  std::vector<double> ratios;               // diff_norms[i + 1] / diff_norms[i]
  std::vector<double> limit;                // 2 v_{2^p_max} - v_{2^(p_max-1)} per probe
  double order = std::numeric_limits<double>::quiet_NaN();  // least-squares fit of the diff norms
  bool monotone = true;                     // diff_norms non-increasing

  double value(int p, std::size_t probe) const {
    return entries.at(static_cast<std::size_t>(p - 1) * probes.size() + probe).value;
  }
};

/**
 * Runs v_{2^p}^(t) for p = 1 .. p_max on the same grid, records the values at
 * the probe points and their successive differences, and the values at the
 * dyadic times j t / 2^q (q = min(dyadic_level, p)) along the way.
 *
 * The order is fitted to log2 of the max-over-probes difference against p;
 * the limit column is the first-order Richardson extrapolation of the two
 * finest levels.
 */
inline DyadicStudy dyadic_study(double t, int p_max, const InitialCondition& v0, const Potential& c,
                                const Grid& grid, std::span<const double> probes, int dyadic_level = 2,
                                int quad_order = default_quad_order) {
  if (p_max < 1 || p_max > 8) throw ParameterError("dyadic study requires 1 <= p_max <= 8");
  if (!(t > 0.0)) throw DomainError("dyadic study requires t > 0");
  DyadicStudy study;
  study.t = t;
  study.probes.assign(probes.begin(), probes.end());
  const std::size_t np = probes.size();

  std::vector<double> prev_final(np);
  for (int p = 1; p <= p_max; ++p) {
    const std::size_t n = std::size_t{1} << p;
    const int q = std::min(dyadic_level, p);
    const std::size_t stride = n >> q;  // odd steps between recorded dyadic times
    std::vector<DyadicEntry> mids;
    std::size_t step = 0;
    const auto final_v = run_vn_observed(t, n, v0, c, grid, quad_order, [&](double tau, const GridFunction& v) {
      ++step;
      if (step == n || step % stride != 0) return;
      const detail::UniformCubicSpline interp(v);
      for (double x : probes) mids.push_back({p, n, tau, x, interp(x), std::numeric_limits<double>::quiet_NaN()});
    });
    for (auto& m : mids) {
      for (const auto& old : study.intermediate) {
        if (old.p == p - 1 && old.tau == m.tau && old.x == m.x) m.diff = m.value - old.value;
      }
    }
    study.intermediate.insert(study.intermediate.end(), mids.begin(), mids.end());

    const detail::UniformCubicSpline interp(final_v);
    double norm = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
      DyadicEntry e{p, n, t, probes[i], interp(probes[i])};
      if (p > 1) {
        e.diff = e.value - prev_final[i];
        norm = std::max(norm, std::abs(e.diff));
      }
      prev_final[i] = e.value;
      study.entries.push_back(e);
    }
    if (p > 1) study.diff_norms.push_back(norm);
  }

  for (std::size_t i = 1; i < study.diff_norms.size(); ++i) {
    study.ratios.push_back(study.diff_norms[i] / study.diff_norms[i - 1]);
    if (study.diff_norms[i] > study.diff_norms[i - 1]) study.monotone = false;
  }
  if (study.diff_norms.size() >= 2) {
    // slope of log2(diff) against p
    double sp = 0, sl = 0, spp = 0, spl = 0;
    const double k = static_cast<double>(study.diff_norms.size());
    for (std::size_t i = 0; i < study.diff_norms.size(); ++i) {
      const double pp = static_cast<double>(i + 2);
      const double l = std::log2(study.diff_norms[i]);
      sp += pp;
      sl += l;
      spp += pp * pp;
      spl += pp * l;
    }
    study.order = -(k * spl - sp * sl) / (k * spp - sp * sp);
  }
  study.limit.resize(np);
  for (std::size_t i = 0; i < np; ++i) {
    study.limit[i] = p_max > 1 ? 2.0 * study.value(p_max, i) - study.value(p_max - 1, i) : study.value(p_max, i);
  }
  return study;
}

}  // namespace feykac
