#include <doctest.h>

#include "lcl/errors.hpp"
#include "lcl/growth_function.hpp"
#include "lcl/rng.hpp"
#include "lcl/verifier.hpp"

#include <cmath>
#include <vector>

using namespace lcl;
using doctest::Approx;

namespace {

std::vector<GrowthFunction> builtins() {
  return {harmonic(), geometric(), power_mean(), power_mean(0.5),
          weighted_geometric(), weighted_geometric(0.3, 0.5), sin2_perturbed()};
}

double max_abs(const Gradient& g) { return g.cwiseAbs().maxCoeff(); }
double max_abs(const Hessian& h) { return h.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("growth_functions") {

TEST_CASE("evaluation examples") {
  CHECK(harmonic()(1, 1) == 0.5);
  CHECK(harmonic()(1, 2) == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(geometric()(1, 4) == 2.0);
  CHECK(sin2_perturbed()(2, 2) == Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(weighted_geometric(0.3, 0.5)(5, 5) == Approx(2.5).epsilon(1e-15));
}

TEST_CASE("domain guard") {
  const auto f = harmonic();
  CHECK_THROWS_AS(f(0.5, 2.0), DomainError);
  CHECK_THROWS_AS(f(2.0, 0.999), DomainError);
  CHECK_THROWS_AS(f.gradient(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(f.hessian(1.0, -3.0), DomainError);

  const auto before = domain_clamp_count();
  CHECK(f(1.0 - 1e-10, 1.0) == 0.5);
  CHECK(domain_clamp_count() == before + 1);
}

TEST_CASE("registry") {
  CHECK_THROWS_AS(make_function("no_such_function"), UnknownFunctionError);
  for (const char* id : {"harmonic", "geometric", "power_mean",
                         "weighted_geometric", "sin2_perturbed"})
    CHECK(FunctionRegistry::global().contains(id));

  const auto pm = make_function("power_mean", {{"p", 2.0}, {"c", 0.3535533906}});
  CHECK(pm.cx() == Approx(0.25).epsilon(1e-9));
  CHECK_THROWS_AS(make_function("harmonic", {{"p", 2.0}}), std::invalid_argument);

  const auto scaled = make_function("harmonic", {{"eps", 0.5}});
  CHECK(scaled(1, 1) == 0.25);
  CHECK(scaled.cx() == 0.125);
}

TEST_CASE("user-registered function with numeric derivatives") {
  GrowthFunctionSpec spec;
  spec.id = "half_sum";
  spec.value = [](double t, double s) { return 0.2 * t + 0.3 * s; };
  spec.cx = 0.2;
  spec.cy = 0.3;
  spec.numeric_derivatives = true;
  const GrowthFunction f(spec);
  CHECK(f.numeric_derivatives());
  CHECK(f.gradient(7, 9)[0] == Approx(0.2).epsilon(1e-8));
  CHECK(f.gradient(7, 9)[1] == Approx(0.3).epsilon(1e-8));
  CHECK(max_abs(f.hessian(7, 9)) < 1e-6);

  spec.numeric_derivatives = false;
  CHECK_THROWS_AS(GrowthFunction{spec}, std::invalid_argument);

  spec.numeric_derivatives = true;
  spec.cx = 0.4;  // gradient on the diagonal says 0.2
  CHECK_THROWS_AS(GrowthFunction{spec}, std::invalid_argument);
}

TEST_CASE("gradient examples") {
  CHECK(harmonic().gradient(1, 1)[0] == 0.25);
  CHECK(harmonic().gradient(1, 1)[1] == 0.25);
  CHECK(geometric().gradient(1, 4)[0] == Approx(1.0).epsilon(1e-15));
  CHECK(geometric().gradient(1, 4)[1] == Approx(0.25).epsilon(1e-15));
  CHECK(harmonic().gradient(1, 3)[0] == 9.0 / 16.0);
  CHECK(harmonic().gradient(1, 3)[1] == 1.0 / 16.0);
}

TEST_CASE("hessian examples") {
  Hessian quarter;
  quarter << -0.25, 0.25, 0.25, -0.25;
  CHECK((harmonic().hessian(1, 1) - quarter).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((geometric().hessian(1, 1) - quarter).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((harmonic().hessian(2, 2) - quarter / 2).cwiseAbs().maxCoeff() < 1e-15);
  for (const auto& f : builtins()) {
    const Hessian h = f.hessian(3.7, 1.9);
    CHECK(h(0, 1) == h(1, 0));
  }
}

TEST_CASE("diagonal constants") {
  CHECK(harmonic().diagonal_constants() == std::pair{0.25, 0.25});
  CHECK(geometric().diagonal_constants() == std::pair{0.5, 0.5});
  CHECK(sin2_perturbed().diagonal_constants() == std::pair{1.0 / 3, 1.0 / 3});
  CHECK(power_mean().cx() == Approx(0.25).epsilon(1e-15));
  const auto wg = weighted_geometric(0.3, 0.5);
  CHECK(wg.cx() == Approx(0.15).epsilon(1e-15));
  CHECK(wg.cy() == Approx(0.35).epsilon(1e-15));
  for (const auto& f : builtins())
    if (f.theorem_compliant()) {
      CHECK(f.cx() + f.cy() > 0.0);
      CHECK(f.cx() + f.cy() < 1.0);
    }
  CHECK(harmonic().theorem_compliant());
  CHECK_FALSE(geometric().theorem_compliant());
  CHECK_FALSE(sin2_perturbed().theorem_compliant());
}

TEST_CASE("scale") {
  const auto half = scale(harmonic(), 0.5);
  CHECK(half(1, 1) == 0.25);
  CHECK(half.diagonal_constants() == std::pair{0.125, 0.125});
  CHECK(half.gradient(1, 3)[0] == 9.0 / 32.0);
  CHECK(half.id() != harmonic().id());
  CHECK_THROWS_AS(scale(harmonic(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scale(harmonic(), -1.0), std::invalid_argument);

  const auto g = geometric();
  const auto same = scale(g, 1.0);
  const CounterRng rng(11, 99);
  for (int i = 0; i < 10; ++i) {
    const double t = 1 + 100 * rng.uniform(i, 0);
    const double s = 1 + 100 * rng.uniform(i, 1);
    CHECK(same(t, s) == g(t, s));
  }
}

TEST_CASE("check_monotone examples") {
  CHECK(check_monotone(harmonic(), 0, 10'000, 1).passed());
  CHECK(check_monotone(geometric(), 3, 10'000, 2).passed());
  CHECK(check_monotone(sin2_perturbed(), 0, 10'000, 3).passed());
}

TEST_CASE("property: gradient and Hessian match finite differences") {
  const CounterRng rng(2024, 77);
  for (const auto& f : builtins()) {
    CAPTURE(f.id());
    for (int i = 0; i < 100; ++i) {
      const double t = 1.0 + (1e4 - 1.0) * rng.uniform(i, 0);
      const double s = 1.0 + (1e4 - 1.0) * rng.uniform(i, 1);
      const double ht = 1e-5;
      const double hs = 1e-5;
      const double tc = std::max(t, 1.0 + ht);
      const double sc = std::max(s, 1.0 + hs);

      const Gradient g = f.gradient(tc, sc);
      const Gradient fd{(f(tc + ht, sc) - f(tc - ht, sc)) / (2 * ht),
                        (f(tc, sc + hs) - f(tc, sc - hs)) / (2 * hs)};
      CHECK(max_abs(Gradient(g - fd)) <= 1e-5 * max_abs(g));

      // Second partials as central differences of the analytic gradient.
      const Hessian h = f.hessian(tc, sc);
      Hessian hd;
      hd.col(0) = (f.gradient(tc + ht, sc) - f.gradient(tc - ht, sc)) / (2 * ht);
      hd.col(1) = (f.gradient(tc, sc + hs) - f.gradient(tc, sc - hs)) / (2 * hs);
      CHECK(max_abs(Hessian(h - hd)) <= 1e-3 * max_abs(h) + 1e-12);
    }
  }
}

TEST_CASE("property: diagonal linearity") {
  for (const auto& f : builtins())
    for (double t : {1.0, 2.0, 10.0, 1e3, 1e6}) {
      CAPTURE(f.id());
      CAPTURE(t);
      CHECK(std::abs(f(t, t) - (f.cx() + f.cy()) * t) <= 1e-12 * t);
    }
}

TEST_CASE("property: diagonal slope equals cx + cy") {
  for (const auto& f : builtins()) {
    CAPTURE(f.id());
    const double t = 1e6;
    const double slope = f(t + 1, t + 1) - f(t, t);
    CHECK(std::abs(slope - (f.cx() + f.cy())) <= 1e-6);
  }
}

TEST_CASE("property: exact symmetry") {
  const CounterRng rng(5, 5);
  for (const auto& f : {harmonic(), geometric(), power_mean(), power_mean(3.0),
                        sin2_perturbed()}) {
    CHECK(f.symmetric());
    for (int i = 0; i < 1000; ++i) {
      const double t = 1 + 1e3 * rng.uniform(i, 0);
      const double s = 1 + 1e3 * rng.uniform(i, 1);
      REQUIRE(f(t, s) == f(s, t));
    }
  }
  CHECK_FALSE(weighted_geometric(0.3, 0.5).symmetric());
}

TEST_CASE("property: positive and monotone on random ordered pairs") {
  for (const auto& f : builtins()) {
    CAPTURE(f.id());
    for (int n = 0; n <= 3; ++n) CHECK(check_monotone(f, n, 2000, 40 + n).passed());
    const CounterRng rng(9, 1);
    for (int i = 0; i < 1000; ++i) {
      const double t = 1 + 50 * rng.uniform(i, 0);
      const double s = 1 + 50 * rng.uniform(i, 1);
      REQUIRE(f(t, s) > 0.0);
    }
  }
}

}  // TEST_SUITE
