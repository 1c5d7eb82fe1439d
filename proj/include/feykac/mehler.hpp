#pragma once

// Heat semigroup U_t of the harmonic oscillator (dv/dt = v_xx - x^2 v) by
// Mehler's formula, and the closed-form Wiener integrals it yields.
//
// Quadrature uses the shifted form
//   (U_t v0)(x) = int q(t, x, y) v0(y + x / ch(2t)) dy,
//   q(t, x, y) = (2 pi sh(2t))^(-1/2) exp(-ch/sh(2t) y^2 / 2 - sh/ch(2t) x^2 / 2),
// whose Gaussian weight in y has variance th(2t) independent of x, so one
// set of Gauss-Hermite nodes serves every x:
//   (U_t v0)(x) = k(t, x) E[v0(x / ch(2t) + sqrt(th(2t)) Z)].

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "feykac/detail/spline.hpp"
#include "feykac/errors.hpp"
#include "feykac/grid.hpp"
#include "feykac/potentials.hpp"
#include "feykac/quadrature.hpp"

namespace feykac {

inline constexpr int default_quad_order = 128;

namespace detail {
inline void require_positive_time(double t, const char* what) {
  if (!(t > 0.0)) throw DomainError(std::string(what) + " requires t > 0");
}
}  // namespace detail

inline double kernel_q(double t, double x, double y) {
  detail::require_positive_time(t, "kernel_q");
  const double sh = std::sinh(2.0 * t);
  const double ch = std::cosh(2.0 * t);
  return std::exp(-0.5 * (ch / sh) * y * y - 0.5 * (sh / ch) * x * x) /
         std::sqrt(2.0 * std::numbers::pi * sh);
}

// k(t, x) = ch(2t)^(-1/2) exp(-th(2t) x^2 / 2), the Wiener integral for v0 = 1.
inline double closed_form_k(double t, double x) {
  detail::require_positive_time(t, "closed_form_k");
  return std::exp(-0.5 * std::tanh(2.0 * t) * x * x) / std::sqrt(std::cosh(2.0 * t));
}

// E[w(1) exp(-t int_0^1 (x + sqrt(2t) w)^2 ds)]
inline double closed_form_moment1(double t, double x) {
  const double k = closed_form_k(t, x);
  const double ch = std::cosh(2.0 * t);
  return x * (1.0 - ch) / (std::sqrt(2.0 * t) * ch) * k;
}

// E[w(1)^2 exp(-t int_0^1 (x + sqrt(2t) w)^2 ds)]
inline double closed_form_moment2(double t, double x) {
  const double k = closed_form_k(t, x);
  const double ch = std::cosh(2.0 * t);
  const double d = 1.0 - ch;
  return (d * d * x * x / (ch * ch) + std::tanh(2.0 * t)) * k / (2.0 * t);
}

// int q(t, x, y) dy by the trapezoid rule on [-40 s, 40 s], s = sqrt(th(2t)).
// Evaluates the kernel directly; it does not go through closed_form_k.
inline double kernel_marginal(double t, double x, std::size_t n_nodes = 4001) {
  detail::require_positive_time(t, "kernel_marginal");
  const double half = 40.0 * std::sqrt(std::tanh(2.0 * t));
  const double h = 2.0 * half / static_cast<double>(n_nodes - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double w = (i == 0 || i + 1 == n_nodes) ? 0.5 : 1.0;
    sum += w * kernel_q(t, x, -half + h * static_cast<double>(i));
  }
  return sum * h;
}

/// (U_t v0)(x) for any callable v0 of polynomial growth.
template <class F>
double apply_semigroup_fn(F&& v0, double t, double x, int quad_order = default_quad_order) {
  detail::require_positive_time(t, "apply_semigroup");
  const double ch = std::cosh(2.0 * t);
  const double sd = std::sqrt(std::tanh(2.0 * t));
  const auto& rule = gauss_hermite_rule(quad_order);
  return closed_form_k(t, x) * rule.expect(v0, x / ch, sd);
}

inline double apply_semigroup(const InitialCondition& v0, double t, double x,
                              int quad_order = default_quad_order) {
  return apply_semigroup_fn(v0.evaluate, t, x, quad_order);
}

/// U_t applied to the cubic-spline interpolant of v (zero outside the grid),
/// evaluated back on the same grid.
inline GridFunction apply_semigroup_grid(const GridFunction& v, double t,
                                         int quad_order = default_quad_order) {
  detail::require_positive_time(t, "apply_semigroup_grid");
  const detail::UniformCubicSpline interp(v);
  const double ch = std::cosh(2.0 * t);
  const double th = std::tanh(2.0 * t);
  const double sd = std::sqrt(th);
  const double norm = 1.0 / std::sqrt(ch);
  const auto& rule = gauss_hermite_rule(quad_order);
  const auto z = rule.normal_nodes();
  const auto p = rule.normal_weights();

  GridFunction out(v.grid());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v.x(i);
    const double center = x / ch;
    double acc = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) acc += p[j] * interp(center + sd * z[j]);
    out[i] = norm * std::exp(-0.5 * th * x * x) * acc;
  }
  return out;
}

// Value of the spline interpolant of a grid function at an arbitrary point.
inline double interpolate(const GridFunction& v, double x) {
  return detail::UniformCubicSpline(v)(x);
}

}  // namespace feykac
