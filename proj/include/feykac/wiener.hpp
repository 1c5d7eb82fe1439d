#pragma once

// Brownian paths, path functionals, and finite-dimensional Wiener integrals.

#include <bit>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "feykac/errors.hpp"
#include "feykac/potentials.hpp"
#include "feykac/quadrature.hpp"
#include "feykac/rng.hpp"

namespace feykac {

struct Path {
  std::vector<double> times;   // 0 = t_0 < t_1 < ... < t_m <= horizon
  std::vector<double> values;  // w(t_j), values[0] == 0
  double horizon = 1.0;

  std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
};

/**
 * Draws Brownian values on the uniform grid j * horizon / m into a caller
 * buffer of length m + 1.
 *
 * When m is a power of two the path is built by midpoint (Levy) refinement:
 * w(horizon) first, then the bridge midpoints level by level. The first m
 * normals of a stream then fix the path on the m-grid, so a path drawn with
 * 4m steps from the same SeedSpec passes through exactly the same coarse
 * values. Other m use plain sequential increments.
 */
class PathSampler {
 public:
  PathSampler(std::size_t m_steps, double horizon) : m_(m_steps), horizon_(horizon) {
    if (m_steps == 0) throw ParameterError("path needs m_steps >= 1");
    if (!(horizon > 0.0)) throw ParameterError("path horizon must be positive");
    dyadic_ = std::has_single_bit(m_steps);
  }

  std::size_t steps() const { return m_; }
  double horizon() const { return horizon_; }
  double spacing() const { return horizon_ / static_cast<double>(m_); }

  void sample(const SeedSpec& seed, std::span<double> out) const {
    if (out.size() != m_ + 1) throw ParameterError("path buffer has wrong length");
    auto engine = make_engine(seed);
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    const double dt = spacing();
    out[0] = 0.0;
    if (dyadic_) {
      out[m_] = std::sqrt(horizon_) * normal(engine);
      for (std::size_t stride = m_; stride > 1; stride /= 2) {
        const std::size_t half = stride / 2;
        const double sd = std::sqrt(static_cast<double>(stride) * dt / 4.0);
        for (std::size_t left = 0; left < m_; left += stride) {
          out[left + half] = 0.5 * (out[left] + out[left + stride]) + sd * normal(engine);
        }
      }
    } else {
      const double sd = std::sqrt(dt);
      for (std::size_t j = 1; j <= m_; ++j) out[j] = out[j - 1] + sd * normal(engine);
    }
  }

 private:
  std::size_t m_;
  double horizon_;
  bool dyadic_ = false;
};

inline Path sample_path(std::size_t m_steps, double horizon, const SeedSpec& seed) {
  PathSampler sampler(m_steps, horizon);
  Path path;
  path.horizon = horizon;
  path.values.resize(m_steps + 1);
  path.times.resize(m_steps + 1);
  sampler.sample(seed, path.values);
  for (std::size_t j = 0; j <= m_steps; ++j) {
    path.times[j] = horizon * static_cast<double>(j) / static_cast<double>(m_steps);
  }
  path.times[m_steps] = horizon;
  return path;
}

namespace detail {

inline void check_times(std::span<const double> times, double upper) {
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev)) throw ParameterError("times must be strictly increasing and positive");
    prev = t;
  }
  if (!times.empty() && times.back() > upper) {
    throw ParameterError("times must not exceed " + std::to_string(upper));
  }
}

inline void check_unit_path(const Path& path, double t) {
  if (!(t > 0.0)) throw DomainError("path functional requires t > 0");
  if (path.horizon != 1.0) throw ParameterError("functional requires a path on [0, 1]");
  if (path.times.size() != path.values.size() || path.values.size() < 2) {
    throw ParameterError("path needs matching times and values with at least one step");
  }
}

// Trapezoid rule over the path's own time nodes; g(j) is the integrand at node j.
template <class G>
double trapezoid(std::span<const double> times, G&& g) {
  double sum = 0.0;
  double prev = g(0);
  for (std::size_t j = 1; j < times.size(); ++j) {
    const double cur = g(j);
    sum += 0.5 * (times[j] - times[j - 1]) * (prev + cur);
    prev = cur;
  }
  return sum;
}

}  // namespace detail

// Joint density of (w(t_1), ..., w(t_n)) at (xi_1, ..., xi_n), with xi_0 = 0.
inline double normal_density(std::span<const double> times, std::span<const double> xs) {
  if (times.size() != xs.size()) throw ParameterError("times and xs must have equal length");
  if (times.empty()) throw ParameterError("normal density needs at least one time");
  detail::check_times(times, 1.0);
  double log_norm = 0.0;
  double quad = 0.0;
  double t_prev = 0.0, x_prev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double dt = times[i] - t_prev;
    const double dx = xs[i] - x_prev;
    log_norm += std::log(2.0 * std::numbers::pi * dt);
    quad += dx * dx / dt;
    t_prev = times[i];
    x_prev = xs[i];
  }
  return std::exp(-0.5 * log_norm - 0.5 * quad);
}

inline constexpr std::size_t max_tensor_dimension = 4;

/// Integral of phi(xi) f_{t_1..t_n}(xi) over R^n, by tensor Gauss-Hermite in the
/// independent increments (xi_i - xi_{i-1}) / sqrt(t_i - t_{i-1}).
/// phi is called with a span<const double> of length n.
template <class Phi>
double finite_dim_integral(Phi&& phi, std::span<const double> times, int quad_order) {
  if (times.size() > max_tensor_dimension) {
    throw DimensionError("finite-dimensional integral limited to n <= 4, got n = " +
                         std::to_string(times.size()));
  }
  if (times.empty()) throw ParameterError("finite-dimensional integral needs at least one time");
  detail::check_times(times, 1.0);
  std::vector<double> sd(times.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    sd[i] = std::sqrt(times[i] - prev);
    prev = times[i];
  }
  std::vector<double> xi(times.size());
  return tensor_expect(times.size(), gauss_hermite_rule(quad_order), [&](std::span<const double> z) {
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      acc += sd[i] * z[i];
      xi[i] = acc;
    }
    return phi(std::span<const double>(xi));
  });
}

// Trapezoid value of int_0^1 (x + sqrt(2t) w(s))^2 ds.
inline double quadratic_functional(const Path& path, double t, double x) {
  detail::check_unit_path(path, t);
  const double scale = std::sqrt(2.0 * t);
  return detail::trapezoid(path.times, [&](std::size_t j) {
    const double y = x + scale * path.values[j];
    return y * y;
  });
}

// Trapezoid value of int_0^1 c(t (1 - s), sqrt(2t) w(s) + x) ds.
inline double potential_functional(const Path& path, double t, double x, const Potential& c) {
  detail::check_unit_path(path, t);
  const double scale = std::sqrt(2.0 * t);
  return detail::trapezoid(path.times, [&](std::size_t j) {
    return c(t * (1.0 - path.times[j]), scale * path.values[j] + x);
  });
}

}  // namespace feykac
