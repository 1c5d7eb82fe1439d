#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "feykac/errors.hpp"

namespace feykac {

/**
 * Gauss-Hermite rule for the weight exp(-u^2) on the real line.
 *
 * Nodes are found by Newton iteration on the orthonormal Hermite recurrence
 * (long double throughout). The rule also exposes the equivalent rule for the
 * standard normal density, which is what every caller in this library wants.
 */
class GaussHermite {
 public:
  explicit GaussHermite(int order) : order_(order) {
    if (order < 1) throw ParameterError("Gauss-Hermite order must be >= 1");
    compute();
  }

  int order() const { return order_; }

  // Physicists' convention: int f(u) exp(-u^2) du ~ sum w_i f(u_i).
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  // Probabilists' convention: E[f(Z)] ~ sum p_i f(z_i), Z ~ N(0, 1), sum p_i = 1.
  std::span<const double> normal_nodes() const { return normal_nodes_; }
  std::span<const double> normal_weights() const { return normal_weights_; }

  // E[f(mean + sigma Z)].
  template <class F>
  double expect(F&& f, double mean = 0.0, double sigma = 1.0) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < normal_nodes_.size(); ++i) {
      sum += normal_weights_[i] * f(mean + sigma * normal_nodes_[i]);
    }
    return sum;
  }

 private:
  void compute() {
    using real = long double;
    const int n = order_;
    const real pim4 = 0.7511255444649424828587030047762276930510L;  // pi^(-1/4)
    const real eps = 1e-17L;
    std::vector<real> x(n), w(n);
    const int half = (n + 1) / 2;
    real z = 0;
    for (int i = 1; i <= half; ++i) {
      if (i == 1) {
        z = std::sqrt(real(2 * n + 1)) - 1.85575L * std::pow(real(2 * n + 1), -0.16667L);
      } else if (i == 2) {
        z -= 1.14L * std::pow(real(n), 0.426L) / z;
      } else if (i == 3) {
        z = 1.86L * z - 0.86L * x[0];
      } else if (i == 4) {
        z = 1.91L * z - 0.91L * x[1];
      } else {
        z = 2.0L * z - x[i - 3];
      }
      real pp = 0;
      for (int iter = 0; iter < 100; ++iter) {
        real p1 = pim4;
        real p2 = 0;
        for (int j = 1; j <= n; ++j) {
          const real p3 = p2;
          p2 = p1;
          p1 = z * std::sqrt(real(2) / j) * p2 - std::sqrt(real(j - 1) / j) * p3;
        }
        pp = std::sqrt(real(2 * n)) * p2;
        const real z1 = z;
        z = z1 - p1 / pp;
        if (std::abs(z - z1) <= eps * std::max<real>(1, std::abs(z))) break;
      }
      x[i - 1] = z;
      x[n - i] = -z;
      w[i - 1] = 2.0L / (pp * pp);
      w[n - i] = w[i - 1];
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });

    const real sqrt2 = std::sqrt(real(2));
    const real inv_sqrt_pi = 1.0L / std::sqrt(3.14159265358979323846264338327950288L);
    nodes_.resize(n);
    weights_.resize(n);
    normal_nodes_.resize(n);
    normal_weights_.resize(n);
    for (int k = 0; k < n; ++k) {
      const int i = order[k];
      nodes_[k] = static_cast<double>(x[i]);
      weights_[k] = static_cast<double>(w[i]);
      normal_nodes_[k] = static_cast<double>(sqrt2 * x[i]);
      normal_weights_[k] = static_cast<double>(w[i] * inv_sqrt_pi);
    }
  }

  int order_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> normal_nodes_;
  std::vector<double> normal_weights_;
};

// Shared, lazily built rules; safe to call from any thread.
inline const GaussHermite& gauss_hermite_rule(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermite>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussHermite>(order);
  return *slot;
}

// E[f(Z_1, ..., Z_dim)] for iid standard normals by tensor-product quadrature.
// f receives a span<const double> of length dim.
template <class F>
double tensor_expect(std::size_t dim, const GaussHermite& rule, F&& f) {
  const auto z = rule.normal_nodes();
  const auto p = rule.normal_weights();
  const std::size_t q = z.size();
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> point(dim);
  double sum = 0.0;
  if (dim == 0) return f(std::span<const double>(point));
  while (true) {
    double weight = 1.0;
    for (std::size_t d = 0; d < dim; ++d) {
      point[d] = z[idx[d]];
      weight *= p[idx[d]];
    }
    sum += weight * f(std::span<const double>(point));
    std::size_t d = 0;
    while (d < dim && ++idx[d] == q) {
      idx[d] = 0;
      ++d;
    }
    if (d == dim) break;
  }
  return sum;
}

}  // namespace feykac
