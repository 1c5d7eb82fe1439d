#pragma once

// Catalog of perturbations c(t, x) and initial conditions v0(x).
//
// Every potential carries the analytic metadata the convergence results rely
// on: a lower bound m, an upper bound, and Hoelder data (L, alpha) in time,
//   |c(t, x) - c(s, x)| <= L |t - s|^alpha   uniformly in x.
//
// Catalog entries and which hypotheses they satisfy:
//
//   zero               c = 0                      m = 0, sup = 0, L = 0.   square integrable.
//   constant(k)        c = k                      m = sup = k, L = 0.      square integrable only for k = 0.
//   gauss_cos(a, w)    a cos(w t) exp(-x^2)       m = -|a|, sup = |a|, L = |a||w|, alpha = 1.
//                                                 square integrable on ]0,T[ x R.
//   bump(a)            a / (1 + x^2)              m = min(0, a), sup = max(0, a), L = 0.
//                                                 square integrable on ]0,T[ x R.
//
// All entries are continuous, bounded, smooth in x with bounded derivatives,
// so they satisfy the hypotheses of the smooth-data existence result; only
// the square-integrable ones satisfy the L^2 hypothesis of the general one.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "feykac/detail/parse_spec.hpp"
#include "feykac/errors.hpp"

namespace feykac {

struct Potential {
  std::string spec;
  std::function<double(double, double)> evaluate;  // (t, x) -> c(t, x)
  double inf_bound = 0.0;
  double sup_bound = 0.0;
  double hoelder_L = 0.0;
  double hoelder_alpha = 1.0;
  bool square_integrable = true;

  double operator()(double t, double x) const { return evaluate(t, x); }

  // True when c is identically zero; solvers skip the potential factor.
  bool vanishes() const { return inf_bound == 0.0 && sup_bound == 0.0; }
};

enum class FunctionClass {
  L2,
  ContinuousVanishing,
  C4Bounded,
  Polynomial,  // 1, x, x^2: not in L^2, usable only by the closed-form oracles
};

inline std::string_view to_string(FunctionClass c) {
  switch (c) {
    case FunctionClass::L2: return "L2";
    case FunctionClass::ContinuousVanishing: return "continuous_vanishing";
    case FunctionClass::C4Bounded: return "C4_bounded";
    case FunctionClass::Polynomial: return "polynomial";
  }
  return "unknown";
}

struct InitialCondition {
  std::string spec;
  std::function<double(double)> evaluate;
  FunctionClass class_tag = FunctionClass::L2;
  std::optional<double> sup_norm;  // empty when unbounded
  bool nonnegative = true;

  double operator()(double x) const { return evaluate(x); }

  bool oracle_only() const { return class_tag == FunctionClass::Polynomial; }
  bool bounded() const { return sup_norm.has_value(); }
};

// |v0(+-edge)| <= rel_tol * sup|v0|.
inline bool decays_at(const InitialCondition& v0, double edge, double rel_tol = 1e-6) {
  if (!v0.sup_norm) return false;
  const double limit = rel_tol * *v0.sup_norm;
  return std::abs(v0(edge)) <= limit && std::abs(v0(-edge)) <= limit;
}

inline Potential zero_potential() {
  return {"zero", [](double, double) { return 0.0; }, 0.0, 0.0, 0.0, 1.0, true};
}

inline Potential constant_potential(double kappa) {
  return {"constant(" + detail::format_arg(kappa) + ")",
          [kappa](double, double) { return kappa; },
          kappa, kappa, 0.0, 1.0, kappa == 0.0};
}

inline Potential gauss_cos_potential(double amplitude, double omega) {
  const double a = std::abs(amplitude);
  return {"gauss_cos(" + detail::format_arg(amplitude) + "," + detail::format_arg(omega) + ")",
          [amplitude, omega](double t, double x) {
            return amplitude * std::cos(omega * t) * std::exp(-x * x);
          },
          -a, a, a * std::abs(omega), 1.0, true};
}

inline Potential bump_potential(double amplitude) {
  return {"bump(" + detail::format_arg(amplitude) + ")",
          [amplitude](double, double x) { return amplitude / (1.0 + x * x); },
          std::min(0.0, amplitude), std::max(0.0, amplitude), 0.0, 1.0, true};
}

namespace detail {

inline void expect_arity(const CallSpec& call, std::size_t lo, std::size_t hi) {
  if (call.args.size() < lo || call.args.size() > hi) {
    throw CatalogError("wrong number of parameters for '" + call.name + "'");
  }
}

}  // namespace detail

/// Looks up a potential by catalog spec, e.g. "zero", "constant(2)",
/// "gauss_cos(1,1)", "bump(0.5)". Omitted parameters default to 1.
inline Potential builtin(std::string_view spec) {
  const auto call = detail::parse_call(spec);
  if (call.name == "zero") {
    detail::expect_arity(call, 0, 0);
    return zero_potential();
  }
  if (call.name == "constant") {
    detail::expect_arity(call, 1, 1);
    return constant_potential(call.args[0]);
  }
  if (call.name == "gauss_cos") {
    if (call.args.size() == 1) throw CatalogError("gauss_cos takes (a, omega)");
    detail::expect_arity(call, 0, 2);
    return call.args.empty() ? gauss_cos_potential(1.0, 1.0)
                             : gauss_cos_potential(call.args[0], call.args[1]);
  }
  if (call.name == "bump") {
    detail::expect_arity(call, 0, 1);
    return bump_potential(call.args.empty() ? 1.0 : call.args[0]);
  }
  throw CatalogError("unknown potential '" + call.name +
                     "'; valid names: zero, constant(k), gauss_cos(a,omega), bump(a)");
}

inline InitialCondition zero_v0() {
  return {"zero", [](double) { return 0.0; }, FunctionClass::C4Bounded, 0.0, true};
}

inline InitialCondition one_v0() {
  return {"one", [](double) { return 1.0; }, FunctionClass::Polynomial, 1.0, true};
}

inline InitialCondition identity_v0() {
  return {"identity", [](double x) { return x; }, FunctionClass::Polynomial, std::nullopt, false};
}

inline InitialCondition square_v0() {
  return {"square", [](double x) { return x * x; }, FunctionClass::Polynomial, std::nullopt, true};
}

// exp(-x^2 / (2 sigma^2))
inline InitialCondition gaussian_v0(double sigma) {
  if (!(sigma > 0.0)) throw CatalogError("gaussian width must be positive");
  const double inv = 1.0 / (2.0 * sigma * sigma);
  return {"gaussian(" + detail::format_arg(sigma) + ")",
          [inv](double x) { return std::exp(-x * x * inv); },
          FunctionClass::C4Bounded, 1.0, true};
}

// max(0, 1 - |x| / a)
inline InitialCondition hat_v0(double half_width) {
  if (!(half_width > 0.0)) throw CatalogError("hat half-width must be positive");
  return {"hat(" + detail::format_arg(half_width) + ")",
          [half_width](double x) { return std::max(0.0, 1.0 - std::abs(x) / half_width); },
          FunctionClass::ContinuousVanishing, 1.0, true};
}

/// Looks up an initial condition: "zero", "one", "identity", "square",
/// "gaussian(sigma)", "hat(a)".
inline InitialCondition builtin_v0(std::string_view spec) {
  const auto call = detail::parse_call(spec);
  if (call.name == "zero" || call.name == "one" || call.name == "identity" ||
      call.name == "square") {
    detail::expect_arity(call, 0, 0);
    if (call.name == "zero") return zero_v0();
    if (call.name == "one") return one_v0();
    if (call.name == "identity") return identity_v0();
    return square_v0();
  }
  if (call.name == "gaussian") {
    detail::expect_arity(call, 0, 1);
    return gaussian_v0(call.args.empty() ? 1.0 : call.args[0]);
  }
  if (call.name == "hat") {
    detail::expect_arity(call, 0, 1);
    return hat_v0(call.args.empty() ? 1.0 : call.args[0]);
  }
  throw CatalogError("unknown initial condition '" + call.name +
                     "'; valid names: zero, one, identity, square, gaussian(sigma), hat(a)");
}

}  // namespace feykac
