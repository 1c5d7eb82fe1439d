#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "feykac/splitting.hpp"

using namespace feykac;

namespace {

const Grid grid;

GridFunction gaussian_grid() { return GridFunction::tabulate(grid, gaussian_v0(1.0).evaluate); }

}  // namespace

TEST_CASE("split schedule") {
  const SplitSchedule s(0.5, 4);
  CHECK(s.boundary(0) == 0.0);
  CHECK(s.boundary(8) == 0.5);
  CHECK(s.dt() == 0.0625);
  for (std::size_t k = 1; k <= 8; ++k) CHECK(s.boundary(k) - s.boundary(k - 1) == Catch::Approx(0.0625));
  CHECK_THROWS_AS(SplitSchedule(0.0, 4), DomainError);
  CHECK_THROWS_AS(SplitSchedule(0.5, 0), ParameterError);
}

TEST_CASE("even step is the Mehler flow at double time") {
  const auto v = gaussian_grid();
  CHECK(step_even(GridFunction(grid), 0.1).max_abs() == 0.0);
  const auto a = step_even(v, 0.125);
  const auto b = apply_semigroup_grid(v, 0.25);
  CHECK(max_abs_difference(a, b) == 0.0);
  CHECK(a.l2_norm() <= v.l2_norm());
  CHECK_THROWS_AS(step_even(v, 0.0), DomainError);
}

TEST_CASE("odd step multiplies by the frozen potential factor") {
  const auto v = gaussian_grid();
  CHECK(max_abs_difference(step_odd(v, 0.1, zero_potential(), 0.2), v) == 0.0);
  const auto scaled = step_odd(v, 0.1, constant_potential(3.0), 0.2);
  for (std::size_t i = 0; i < v.size(); i += 50) CHECK(scaled[i] == Catch::Approx(std::exp(-0.6) * v[i]));

  const auto gc = gauss_cos_potential(2.0, 1.0);
  const auto out = step_odd(v, 0.05, gc, 0.3);
  CHECK(out.max_abs() <= std::exp(-2.0 * gc.inf_bound * 0.05) * v.max_abs());
  // the potential is read at tau_next
  const std::size_t mid = grid.n_points / 2;
  CHECK(out[mid] == Catch::Approx(std::exp(-2.0 * 2.0 * std::cos(0.3) * 0.05)));
}

TEST_CASE("without a potential every n reproduces the Mehler solution") {
  const auto g = gaussian_v0(1.0);
  const auto exact = apply_semigroup_grid(gaussian_grid(), 0.5);
  for (std::size_t n : {1u, 4u, 16u}) CHECK(max_abs_difference(run_vn(0.5, n, g, zero_potential(), grid), exact) < 1e-6);
}

TEST_CASE("a constant potential factors out for every n") {
  const auto g = gaussian_v0(1.0);
  const auto exact = apply_semigroup_grid(gaussian_grid(), 0.5);
  for (double kappa : {2.0, -0.5}) {
    for (std::size_t n : {1u, 3u, 16u}) {
      const auto v = run_vn(0.5, n, g, constant_potential(kappa), grid);
      double err = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) err = std::max(err, std::abs(v[i] - std::exp(-kappa * 0.5) * exact[i]));
      CHECK(err < 1e-6);
    }
  }
}

TEST_CASE("unresolved initial conditions are refused") {
  CHECK_THROWS_AS(run_vn(0.5, 4, one_v0(), zero_potential(), grid), ParameterError);
  CHECK_THROWS_AS(run_vn(0.5, 4, gaussian_v0(5.0), zero_potential(), grid), ParameterError);
}

TEST_CASE("iterated integral agrees with the grid scheme") {
  CHECK(std::abs(iterated_integral_vn(0.5, 1, 1.0, one_v0(), zero_potential()) - closed_form_k(0.5, 1.0)) < 1e-6);
  CHECK(std::abs(iterated_integral_vn(0.3, 1, 0.0, one_v0(), zero_potential()) - closed_form_k(0.3, 0.0)) < 1e-6);

  const auto g = gaussian_v0(1.0);
  const auto two = constant_potential(2.0);
  CHECK(std::abs(iterated_integral_vn(0.5, 2, 0.0, g, two) - interpolate(run_vn(0.5, 2, g, two, grid), 0.0)) < 1e-4);

  const auto gc = gauss_cos_potential(1.0, 1.0);
  for (std::size_t n : {1u, 2u, 3u}) {
    const auto v = run_vn(0.5, n, g, gc, grid);
    for (double x : {0.0, 1.0}) {
      INFO("n=" << n << " x=" << x);
      CHECK(std::abs(iterated_integral_vn(0.5, n, x, g, gc) - interpolate(v, x)) < 1e-4);
    }
  }
  CHECK_THROWS_AS(iterated_integral_vn(0.5, 4, 0.0, g, gc), DimensionError);
  CHECK_THROWS_AS(iterated_integral_vn(0.5, 2, 0.0, identity_v0(), gc), ParameterError);
}

TEST_CASE("refinement converges for a time-dependent potential") {
  const auto g = gaussian_v0(1.0);
  const auto gc = gauss_cos_potential(1.0, 1.0);
  const auto reference = interpolate(run_vn(0.5, 64, g, gc, grid), 0.0);
  double prev = 1e9;
  for (std::size_t n : {1u, 2u, 4u, 8u, 16u}) {
    const double err = std::abs(interpolate(run_vn(0.5, n, g, gc, grid), 0.0) - reference);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("dyadic study") {
  const auto g = gaussian_v0(1.0);
  const std::vector<double> probes{0.0, 1.0};

  SECTION("no potential: every level is the Mehler value") {
    const auto study = dyadic_study(0.5, 4, g, zero_potential(), grid, probes);
    for (double d : study.diff_norms) CHECK(d < 1e-6);
    for (const auto& e : study.entries) CHECK(std::abs(e.value - apply_semigroup(g, 0.5, e.x)) < 1e-6);
  }

  SECTION("gauss_cos: first-order refinement") {
    const auto gc = gauss_cos_potential(1.0, 1.0);
    const auto study = dyadic_study(0.5, 7, g, gc, grid, probes);
    REQUIRE(study.diff_norms.size() == 6);
    CHECK(study.monotone);
    for (double r : study.ratios) {
      CHECK(r > 0.35);
      CHECK(r < 0.65);
    }
    CHECK(study.order >= 0.7);
    CHECK(study.order <= 1.3);
    CHECK(study.entries.size() == 14);
    CHECK(study.value(7, 1) == study.entries.back().value);

    // interior dyadic times t/4, t/2, 3t/4 from level 2 on, with differences from level 3 on
    std::size_t with_diff = 0;
    std::vector<double> level_max(8, 0.0);
    for (const auto& e : study.intermediate) {
      CHECK(e.tau < 0.5);
      if (!std::isnan(e.diff)) {
        ++with_diff;
        level_max[static_cast<std::size_t>(e.p)] = std::max(level_max[static_cast<std::size_t>(e.p)], std::abs(e.diff));
      }
    }
    CHECK(study.intermediate.size() == 2 + 6 * 3 * 2);
    CHECK(with_diff == 2 + 5 * 3 * 2);
    // convergence on the dyadic times themselves
    for (std::size_t p = 3; p < 7; ++p) CHECK(level_max[p + 1] < level_max[p]);

    // uniform bound sup|v0| exp(-m t)
    const double bound = std::exp(-gc.inf_bound * 0.5) * (1.0 + 1e-6);
    for (const auto& e : study.entries) CHECK(std::abs(e.value) <= bound);
  }

  SECTION("a single level has no order estimate") {
    const auto study = dyadic_study(0.5, 1, g, gauss_cos_potential(1.0, 1.0), grid, probes);
    CHECK(study.entries.size() == 2);
    CHECK(study.diff_norms.empty());
    CHECK(std::isnan(study.order));
  }

  CHECK_THROWS_AS(dyadic_study(0.5, 9, g, zero_potential(), grid, probes), ParameterError);
}

TEST_CASE("grid solutions stay below sup|v0| exp(-m t)") {
  const auto gc = gauss_cos_potential(1.0, 1.0);
  for (const char* spec : {"gaussian(1)", "hat(2)", "gaussian(0.4)"}) {
    const auto v0 = builtin_v0(spec);
    for (std::size_t n : {1u, 8u, 32u}) {
      const auto v = run_vn(0.5, n, v0, gc, grid);
      CHECK(v.max_abs() <= *v0.sup_norm * std::exp(-gc.inf_bound * 0.5) * (1.0 + 1e-6));
    }
  }
}
