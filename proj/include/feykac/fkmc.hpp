#pragma once

// Monte Carlo estimators of the two Wiener-integral representations of the
// perturbed harmonic-oscillator heat equation
//
//   dv/dt = v_xx - (x^2 + c(t, x)) v,   v(0, .) = v0.
//
// Unit-horizon form (paths on [0, 1]):
//   v(t, x) = E[ v0(sqrt(2t) w(1) + x)
//                exp(-t int_0^1 (x + sqrt(2t) w(s))^2 ds)
//                exp(-t int_0^1 c(t (1 - s), sqrt(2t) w(s) + x) ds) ]
//
// Small-time form (paths on [0, 2t]):
//   v(t, x) = E[ v0(w(2t) + x)
//                exp(-1/2 int_0^2t (x + w(s))^2 ds)
//                exp(-1/2 int_0^2t c(t - s/2, w(s) + x) ds) ]
//
// Path i of a run uses SeedSpec{seed, combine_keys(cell, i)}, and samples are
// reduced in index order, so results are bit-identical for any worker count.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "feykac/detail/parallel.hpp"
#include "feykac/errors.hpp"
#include "feykac/mehler.hpp"
#include "feykac/potentials.hpp"
#include "feykac/rng.hpp"
#include "feykac/wiener.hpp"

namespace feykac {

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;   // sample standard deviation / sqrt(n_samples)
  std::size_t n_paths = 0;  // paths evaluated
  std::size_t m_steps = 0;
  std::size_t n_samples = 0;  // independent samples; an antithetic pair is one
};

struct McConfig {
  std::size_t n_paths = 200000;
  std::size_t m_steps = 512;
  std::uint64_t seed = 20240611;
  bool antithetic = false;
  // Uses exp(-t int (x + sqrt(2t) w)^2) with known mean k(t, x) as a control variate.
  bool control_variate = false;
  unsigned workers = 1;
  std::uint64_t cell = 0;  // stream namespace, see cell_key
  double t_max_alt = 0.5;  // largest t accepted by the small-time estimator
};

// Stream namespace of grid point (t_index, x_index) in estimate_field.
inline std::uint64_t cell_key(std::size_t t_index, std::size_t x_index) {
  return combine_keys(0xC311ULL + t_index, x_index);
}

/// Two-pass mean and standard error, reduced in index order.
inline MCEstimate summarize(std::span<const double> samples, std::size_t n_paths, std::size_t m_steps) {
  MCEstimate est;
  est.n_paths = n_paths;
  est.m_steps = m_steps;
  est.n_samples = samples.size();
  if (samples.empty()) return est;
  double sum = 0.0;
  for (double s : samples) sum += s;
  est.mean = sum / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double s : samples) ss += (s - est.mean) * (s - est.mean);
    const double var = ss / static_cast<double>(samples.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(samples.size()));
  }
  return est;
}

namespace detail {

struct Sample {
  double value = 0.0;
  double control = 0.0;
};

inline void validate_mc(double t, const McConfig& cfg) {
  if (!(t > 0.0)) throw DomainError("Monte Carlo estimate requires t > 0");
  if (cfg.n_paths == 0) throw ParameterError("n_paths must be >= 1");
  if (cfg.m_steps == 0) throw ParameterError("m_steps must be >= 1");
}

inline std::size_t sample_count(const McConfig& cfg) {
  return cfg.antithetic ? (cfg.n_paths + 1) / 2 : cfg.n_paths;
}

// integrand(span<const double> w, double ds) -> Sample, with w on the uniform
// grid of m_steps intervals over [0, horizon].
template <class Integrand>
std::vector<Sample> draw_samples(const McConfig& cfg, double horizon, const Integrand& integrand) {
  const std::size_t n = sample_count(cfg);
  std::vector<Sample> out(n);
  const PathSampler sampler(cfg.m_steps, horizon);
  const double ds = sampler.spacing();
  parallel_for_chunks(n, cfg.workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> w(cfg.m_steps + 1);
    std::vector<double> mirrored(cfg.antithetic ? cfg.m_steps + 1 : 0);
    for (std::size_t i = begin; i < end; ++i) {
      sampler.sample(SeedSpec{cfg.seed, combine_keys(cfg.cell, i)}, w);
      Sample s = integrand(std::span<const double>(w), ds);
      if (cfg.antithetic) {
        for (std::size_t j = 0; j < w.size(); ++j) mirrored[j] = -w[j];
        const Sample r = integrand(std::span<const double>(mirrored), ds);
        s.value = 0.5 * (s.value + r.value);
        s.control = 0.5 * (s.control + r.control);
      }
      out[i] = s;
    }
  });
  return out;
}

inline std::vector<double> values_of(const std::vector<Sample>& samples) {
  std::vector<double> v(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) v[i] = samples[i].value;
  return v;
}

inline MCEstimate reduce(const std::vector<Sample>& samples, const McConfig& cfg, double control_mean) {
  const std::size_t paths = cfg.antithetic ? 2 * samples.size() : samples.size();
  if (!cfg.control_variate || samples.size() < 2) {
    return summarize(values_of(samples), paths, cfg.m_steps);
  }
  const double n = static_cast<double>(samples.size());
  double fm = 0.0, gm = 0.0;
  for (const auto& s : samples) {
    fm += s.value;
    gm += s.control;
  }
  fm /= n;
  gm /= n;
  double cov = 0.0, var = 0.0;
  for (const auto& s : samples) {
    cov += (s.value - fm) * (s.control - gm);
    var += (s.control - gm) * (s.control - gm);
  }
  const double beta = var > 0.0 ? cov / var : 0.0;
  std::vector<double> adjusted(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    adjusted[i] = samples[i].value - beta * (samples[i].control - control_mean);
  }
  return summarize(adjusted, paths, cfg.m_steps);
}

// Unit-horizon representation evaluated on one path.
struct UnitIntegrand {
  double t;
  double x;
  const InitialCondition* v0;
  const Potential* c;

  Sample operator()(std::span<const double> w, double ds) const {
    const double scale = std::sqrt(2.0 * t);
    const std::size_t m = w.size() - 1;
    const bool with_c = !c->vanishes();
    double q = 0.0, p = 0.0;
    for (std::size_t j = 0; j <= m; ++j) {
      const double weight = (j == 0 || j == m) ? 0.5 : 1.0;
      const double y = x + scale * w[j];
      q += weight * y * y;
      if (with_c) p += weight * (*c)(t * (1.0 - static_cast<double>(j) * ds), y);
    }
    const double g = std::exp(-t * q * ds);
    const double h = with_c ? std::exp(-t * p * ds) : 1.0;
    return {(*v0)(x + scale * w[m]) * g * h, g};
  }
};

struct MomentIntegrand {
  double t;
  double x;
  int order;

  Sample operator()(std::span<const double> w, double ds) const {
    const double scale = std::sqrt(2.0 * t);
    const std::size_t m = w.size() - 1;
    double q = 0.0;
    for (std::size_t j = 0; j <= m; ++j) {
      const double weight = (j == 0 || j == m) ? 0.5 : 1.0;
      const double y = x + scale * w[j];
      q += weight * y * y;
    }
    const double g = std::exp(-t * q * ds);
    const double end = w[m];
    return {(order == 1 ? end : end * end) * g, g};
  }
};

// Small-time representation; w lives on [0, 2t].
struct SmallTimeIntegrand {
  double t;
  double x;
  const InitialCondition* v0;
  const Potential* c;

  Sample operator()(std::span<const double> w, double ds) const {
    const std::size_t m = w.size() - 1;
    const bool with_c = !c->vanishes();
    double q = 0.0, p = 0.0;
    for (std::size_t j = 0; j <= m; ++j) {
      const double weight = (j == 0 || j == m) ? 0.5 : 1.0;
      const double y = x + w[j];
      q += weight * y * y;
      if (with_c) p += weight * (*c)(t - 0.5 * static_cast<double>(j) * ds, y);
    }
    const double g = std::exp(-0.5 * q * ds);
    const double h = with_c ? std::exp(-0.5 * p * ds) : 1.0;
    return {(*v0)(w[m] + x) * g * h, g};
  }
};

inline void require_bounded(const InitialCondition& v0) {
  if (!v0.bounded()) {
    throw ParameterError("initial condition '" + v0.spec + "' is unbounded; Monte Carlo needs a bounded v0");
  }
}

}  // namespace detail

/// Per-sample integrand values of the unit-horizon estimator (antithetic pairs
/// already averaged), in path-index order.
inline std::vector<double> sample_v(double t, double x, const InitialCondition& v0, const Potential& c,
                                    const McConfig& cfg) {
  detail::validate_mc(t, cfg);
  detail::require_bounded(v0);
  return detail::values_of(detail::draw_samples(cfg, 1.0, detail::UnitIntegrand{t, x, &v0, &c}));
}

inline MCEstimate estimate_v(double t, double x, const InitialCondition& v0, const Potential& c,
                             const McConfig& cfg) {
  detail::validate_mc(t, cfg);
  detail::require_bounded(v0);
  const auto samples = detail::draw_samples(cfg, 1.0, detail::UnitIntegrand{t, x, &v0, &c});
  return detail::reduce(samples, cfg, closed_form_k(t, x));
}

/// E[w(1)^order exp(-t int_0^1 (x + sqrt(2t) w)^2 ds)], order 1 or 2.
inline MCEstimate estimate_moment(double t, double x, int order, const McConfig& cfg) {
  if (order != 1 && order != 2) throw ParameterError("moment order must be 1 or 2");
  detail::validate_mc(t, cfg);
  const auto samples = detail::draw_samples(cfg, 1.0, detail::MomentIntegrand{t, x, order});
  return detail::reduce(samples, cfg, closed_form_k(t, x));
}

inline MCEstimate estimate_v_alt(double t, double x, const InitialCondition& v0, const Potential& c,
                                 const McConfig& cfg) {
  detail::validate_mc(t, cfg);
  if (t > cfg.t_max_alt) {
    throw ParameterError("small-time representation is only used for t <= " + detail::format_arg(cfg.t_max_alt) +
                         " (it is established for sufficiently small t); got t = " + detail::format_arg(t));
  }
  detail::require_bounded(v0);
  const auto samples = detail::draw_samples(cfg, 2.0 * t, detail::SmallTimeIntegrand{t, x, &v0, &c});
  return detail::reduce(samples, cfg, closed_form_k(t, x));
}

struct FieldEstimate {
  std::size_t t_index = 0;
  std::size_t x_index = 0;
  double t = 0.0;
  double x = 0.0;
  MCEstimate estimate;
};

/// estimate_v on every (t, x) of the product grid; cell (i, j) draws its paths
/// from the stream namespace cell_key(i, j). Row-major in (t, x).
inline std::vector<FieldEstimate> estimate_field(std::span<const double> ts, std::span<const double> xs,
                                                 const InitialCondition& v0, const Potential& c,
                                                 const McConfig& cfg) {
  for (double t : ts) {
    if (!(t > 0.0)) throw DomainError("Monte Carlo estimate requires t > 0");
  }
  std::vector<FieldEstimate> table;
  table.reserve(ts.size() * xs.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      McConfig local = cfg;
      local.cell = cell_key(i, j);
      table.push_back({i, j, ts[i], xs[j], estimate_v(ts[i], xs[j], v0, c, local)});
    }
  }
  return table;
}

}  // namespace feykac
