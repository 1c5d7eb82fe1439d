#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "feykac/potentials.hpp"

using namespace feykac;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("catalog potentials evaluate as documented") {
  const auto zero = builtin("zero");
  CHECK(zero(0.3, -4.0) == 0.0);
  CHECK(zero.inf_bound == 0.0);
  CHECK(zero.hoelder_L == 0.0);
  CHECK(zero.vanishes());

  const auto two = builtin("constant(2)");
  CHECK(two(7.0, 1.5) == 2.0);
  CHECK(two.inf_bound == 2.0);
  CHECK_FALSE(two.square_integrable);

  const auto gc = builtin("gauss_cos(1,1)");
  CHECK(gc(0.0, 0.0) == 1.0);
  CHECK(gc(std::acos(-1.0), 0.0) == Catch::Approx(-1.0));
  CHECK(gc.inf_bound == -1.0);
  CHECK(gc.sup_bound == 1.0);
  CHECK(builtin("gauss_cos").spec == gc.spec);

  const auto bump = builtin("bump(3)");
  CHECK(bump(0.0, 1.0) == 1.5);
  CHECK(bump.inf_bound == 0.0);
  CHECK(bump.sup_bound == 3.0);
}

TEST_CASE("unknown or malformed potentials are rejected with the catalog listed") {
  CHECK_THROWS_WITH(builtin("quartic"), ContainsSubstring("gauss_cos(a,omega)"));
  CHECK_THROWS_AS(builtin("constant"), CatalogError);
  CHECK_THROWS_AS(builtin("constant(1,2)"), CatalogError);
  CHECK_THROWS_AS(builtin("gauss_cos(1)"), CatalogError);
  CHECK_THROWS_AS(builtin("bump(x)"), CatalogError);
  CHECK_THROWS_AS(builtin("bump(1"), CatalogError);
}

TEST_CASE("potential metadata bounds and Hoelder constants hold on random samples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ts(0.0, 10.0), xs(-20.0, 20.0);
  for (const char* spec : {"zero", "constant(2)", "constant(-0.5)", "gauss_cos(1,1)", "gauss_cos(-2,3)", "bump(1)",
                           "bump(-1.5)"}) {
    const auto c = builtin(spec);
    INFO(spec);
    int bad = 0;
    for (int i = 0; i < 10000; ++i) {
      const double t = ts(rng), s = ts(rng), x = xs(rng);
      const double ct = c(t, x), cs = c(s, x);
      if (ct < c.inf_bound || ct > c.sup_bound) ++bad;
      const double rhs = c.hoelder_L * std::pow(std::abs(t - s), c.hoelder_alpha);
      if (std::abs(ct - cs) > rhs * (1 + 1e-12) + 1e-15) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("catalog initial conditions") {
  CHECK(builtin_v0("one")(3.7) == 1.0);
  CHECK(builtin_v0("square")(2.0) == 4.0);
  CHECK(builtin_v0("identity")(-1.25) == -1.25);
  CHECK(builtin_v0("gaussian(1)")(0.0) == 1.0);
  CHECK(builtin_v0("gaussian(2)")(2.0) == Catch::Approx(std::exp(-0.5)));
  CHECK(builtin_v0("hat(2)")(1.0) == 0.5);
  CHECK(builtin_v0("hat(2)")(3.0) == 0.0);

  for (const char* spec : {"one", "identity", "square"}) {
    const auto v0 = builtin_v0(spec);
    CHECK(v0.oracle_only());
  }
  CHECK_FALSE(builtin_v0("gaussian(1)").oracle_only());
  CHECK_FALSE(builtin_v0("identity").bounded());
  CHECK(builtin_v0("one").bounded());
  CHECK(builtin_v0("hat(1)").class_tag == FunctionClass::ContinuousVanishing);
  CHECK(builtin_v0("gaussian(1)").class_tag == FunctionClass::C4Bounded);

  CHECK_THROWS_AS(builtin_v0("cubic"), CatalogError);
  CHECK_THROWS_AS(builtin_v0("gaussian(0)"), CatalogError);
  CHECK_THROWS_AS(builtin_v0("one(1)"), CatalogError);
}

TEST_CASE("decay at the grid edge") {
  CHECK(decays_at(builtin_v0("gaussian(1)"), 12.0));
  CHECK(decays_at(builtin_v0("hat(3)"), 12.0));
  CHECK_FALSE(decays_at(builtin_v0("gaussian(4)"), 12.0));
  CHECK_FALSE(decays_at(builtin_v0("one"), 12.0));
  CHECK_FALSE(decays_at(builtin_v0("square"), 12.0));
}

TEST_CASE("sup norm bounds the catalog entries that declare one") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xs(-20.0, 20.0);
  for (const char* spec : {"zero", "one", "gaussian(0.5)", "gaussian(3)", "hat(1)", "hat(5)"}) {
    const auto v0 = builtin_v0(spec);
    REQUIRE(v0.sup_norm.has_value());
    for (int i = 0; i < 10000; ++i) {
      const double v = v0(xs(rng));
      REQUIRE(std::abs(v) <= *v0.sup_norm);
      if (v0.nonnegative) REQUIRE(v >= 0.0);
    }
  }
}
