#include <doctest.h>

#include "lcl/errors.hpp"
#include "lcl/exact_distribution.hpp"

#include "oracles.hpp"

#include <cmath>
#include <numeric>
#include <vector>

using namespace lcl;
using doctest::Approx;

namespace {

double total(const DiscreteDistribution& d) {
  return std::accumulate(d.probs.begin(), d.probs.end(), 0.0);
}

void check_same_law(const DiscreteDistribution& a, const DiscreteDistribution& b,
                    double scale) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a.support[i] - b.support[i]) <= 1e-12 * scale);
    CHECK(std::abs(a.probs[i] - b.probs[i]) <= 1e-14);
  }
}

}  // namespace

TEST_SUITE("exact_distribution") {

TEST_CASE("x0_distribution") {
  const auto x0 = x0_distribution();
  CHECK(x0.support == std::vector<double>{1.0, 2.0});
  CHECK(x0.probs == std::vector<double>{0.5, 0.5});
  CHECK(x0.n == 0);
  CHECK(x0.quant_error_bound == 0.0);
  CHECK(x0.mean() == 1.5);
  CHECK(x0.variance() == 0.25);
  const auto m = moments(x0);
  CHECK(m.central[0] == 0.25);
  CHECK(m.central[2] == 0.0625);
}

TEST_CASE("harmonic X1 against the rational brute-force oracle") {
  const auto x1 = exact_next(harmonic(), x0_distribution(), 0.0);
  const auto law = oracle::harmonic_x1_law();
  REQUIRE(x1.size() == law.atoms.size());
  REQUIRE(x1.size() == 9);
  std::size_t i = 0;
  for (const auto& [v, p] : law.atoms) {
    CHECK(std::abs(x1.support[i] - oracle::to_double(v)) <= 1e-15 * 5);
    CHECK(std::abs(x1.probs[i] - oracle::to_double(p)) <= 1e-15);
    ++i;
  }
  CHECK(law.mean() == oracle::Rational(89, 24));
  CHECK(law.variance() == oracle::Rational(307, 576));
  CHECK(std::abs(x1.mean() - 89.0 / 24.0) <= 1e-14);
  CHECK(std::abs(x1.variance() - 307.0 / 576.0) <= 1e-14);

  const std::vector<double> expected = {2.5, 8.0 / 3, 3, 3.5, 11.0 / 3,
                                        4,   4.5,     14.0 / 3, 5};
  for (std::size_t k = 0; k < 9; ++k)
    CHECK(x1.support[k] == Approx(expected[k]).epsilon(1e-15));
  CHECK(x1.probs[1] == 0.125);
  CHECK(x1.exact);
  CHECK(x1.n == 1);
}

TEST_CASE("geometric X1 mean") {
  const auto x1 = exact_next(geometric(), x0_distribution(), 0.0);
  CHECK(moments(x1).mean() == Approx((15 + 2 * std::sqrt(2.0)) / 4).epsilon(1e-15));
  CHECK(x1.mean() / 3 <= 1.49);
}

TEST_CASE("degenerate law") {
  for (const auto& f : {harmonic(), geometric(), sin2_perturbed()}) {
    const auto d = exact_next(f, degenerate_distribution(3.0), 0.0);
    REQUIRE(d.size() == 1);
    CHECK(d.support[0] == 6.0 + f(3.0, 3.0));
    CHECK(d.probs[0] == 1.0);
  }
}

TEST_CASE("validate rejects broken laws") {
  auto d = x0_distribution();
  d.probs = {0.5, 0.6};
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d = x0_distribution();
  d.support = {2.0, 1.0};
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d = x0_distribution();
  d.probs = {1.0, 0.0};
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  CHECK_NOTHROW(x0_distribution().validate());
}

TEST_CASE("unbinned step beyond the atom cap") {
  const auto laws = exact_sequence(harmonic(), 2);
  CHECK_THROWS_AS(exact_next(harmonic(), laws[2], 0.0), CapExceededError);
  ExactOptions tiny;
  tiny.atom_cap = 50;
  CHECK_THROWS_AS(exact_next(harmonic(), laws[1], 0.0, tiny), CapExceededError);
}

TEST_CASE("quantized steps track their error bound") {
  const auto f = harmonic();
  const auto laws = exact_sequence(f, 4, {2, 1e-4});
  for (int n = 0; n <= 2; ++n) {
    CHECK(laws[n].exact);
    CHECK(laws[n].quant_error_bound == 0.0);
  }
  const double d3 = 1e-4 * std::pow(2.5, 3);
  const double d4 = 1e-4 * std::pow(2.5, 4);
  CHECK_FALSE(laws[3].exact);
  CHECK(laws[3].quant_error_bound == Approx(3 * d3).epsilon(1e-12));
  CHECK(laws[4].quant_error_bound == Approx(2.5 * 3 * d3 + 3 * d4).epsilon(1e-12));
  CHECK(laws[4].delta_policy == "relative:0.0001");
  CHECK_THROWS_AS(exact_next(f, laws[1], -1.0), std::invalid_argument);
}

TEST_CASE("variance identity") {
  const auto h = exact_sequence(harmonic(), 2);
  const auto r01 = check_variance_identity(harmonic(), h[0], h[1]);
  CHECK(r01.passed());
  CHECK(r01.measurements["var_next_direct"].get<double>() == Approx(307.0 / 576).epsilon(1e-14));
  CHECK(r01.measurements["rhs"].get<double>() == Approx(307.0 / 576).epsilon(1e-14));
  CHECK(check_variance_identity(harmonic(), h[1], h[2]).passed());

  const auto g = exact_sequence(geometric(), 2);
  const auto g01 = check_variance_identity(geometric(), g[0], g[1]);
  CHECK(g01.passed());
  CHECK(g01.measurements["relative_difference"].get<double>() <= 1e-12);
  CHECK(check_variance_identity(geometric(), g[1], g[2]).passed());

  const auto pt = degenerate_distribution(2.0);
  const auto r = check_variance_identity(harmonic(), pt, exact_next(harmonic(), pt, 0.0));
  CHECK(r.passed());
  CHECK(r.measurements["var_next_direct"].get<double>() == 0.0);
  CHECK(r.measurements["rhs"].get<double>() == 0.0);

  const auto q = exact_sequence(harmonic(), 3, {2, 1e-4});
  CHECK_THROWS_AS(check_variance_identity(harmonic(), q[2], q[3]), std::invalid_argument);
  CHECK_THROWS_AS(check_variance_identity(harmonic(), h[0], h[2]), std::invalid_argument);
}

TEST_CASE("fourth-moment diagnostic") {
  const auto x0 = x0_distribution();
  // X - X' is -1, 0, 0, 1 with equal weight; 2 mu4 + 6 sigma^4 = 1/8 + 3/8.
  CHECK(independent_fourth_difference(x0) == 0.5);
  CHECK(2 * moments(x0).central[2] + 6 * 0.25 * 0.25 == 0.5);

  const auto laws = exact_sequence(harmonic(), 4);
  const auto r = fourth_moment_diagnostic(laws);
  CHECK(r.passed());

  const std::vector<DiscreteDistribution> points = {
      degenerate_distribution(1.0), degenerate_distribution(2.5, 1),
      degenerate_distribution(6.25, 2)};
  const auto rp = fourth_moment_diagnostic(points);
  CHECK(rp.passed());
  for (const auto& v : rp.measurements["ratio"]) CHECK(v.get<double>() == 0.0);

  CHECK_THROWS_AS(fourth_moment_diagnostic(std::span(laws).first(2)),
                  std::invalid_argument);
}

TEST_CASE("property: probability conservation and support bounds") {
  for (const auto& f : {harmonic(), geometric(), power_mean(), sin2_perturbed()}) {
    CAPTURE(f.id());
    const auto laws = exact_sequence(f, 4, {2, 1e-4});
    for (const auto& d : laws) {
      CAPTURE(d.n);
      CHECK(std::abs(total(d) - 1.0) <= 1e-12);
      CHECK_NOTHROW(d.validate());
      const double lo = std::pow(f.mean_base(), d.n);
      if (d.exact) {
        CHECK(std::abs(d.support.front() - lo) <= 1e-14 * lo);
        CHECK(std::abs(d.support.back() - 2 * lo) <= 1e-14 * lo);
      }
      CHECK(d.support.front() >= lo * (1 - 1e-14) - d.quant_error_bound);
      CHECK(d.support.back() <= 2 * lo * (1 + 1e-14) + d.quant_error_bound);
    }
  }
  // Dyadic arithmetic: the harmonic extremes are hit bit-for-bit.
  const auto h = exact_sequence(harmonic(), 2);
  CHECK(h[2].support.front() == 6.25);
  CHECK(h[2].support.back() == 12.5);
}

TEST_CASE("property: quantization soundness at n = 5") {
  const auto f = harmonic();
  const auto fine = exact_sequence(f, 5, {2, 1e-4});
  const auto coarse = exact_sequence(f, 5, {2, 1e-3});
  const double gap = std::abs(fine[5].mean() - coarse[5].mean());
  CHECK(gap <= fine[5].quant_error_bound + coarse[5].quant_error_bound);
  CHECK(coarse[5].size() < fine[5].size());
  // Coupling: the standard deviations differ by at most the summed bounds.
  const double vb = fine[5].quant_error_bound + coarse[5].quant_error_bound;
  CHECK(std::abs(fine[5].variance() - coarse[5].variance()) <=
        2 * std::sqrt(fine[5].variance()) * vb + vb * vb);
}

TEST_CASE("property: convolution matches leaf enumeration for n = 1, 2") {
  for (const auto& f : {harmonic(), geometric(), sin2_perturbed()}) {
    CAPTURE(f.id());
    const auto laws = exact_sequence(f, 2);
    for (int n = 1; n <= 2; ++n) {
      CAPTURE(n);
      check_same_law(laws[n], oracle::enumerate_leaf_law(f, n),
                     std::pow(f.mean_base(), n));
    }
  }
}

TEST_CASE("pushforward law of f(C, D)") {
  const auto fl = pushforward_law(harmonic(), x0_distribution());
  REQUIRE(fl.size() == 3);
  CHECK(fl.support[0] == 0.5);
  CHECK(fl.support[1] == Approx(2.0 / 3).epsilon(1e-15));
  CHECK(fl.support[2] == 1.0);
  CHECK(fl.probs == std::vector<double>{0.25, 0.5, 0.25});
}

}  // TEST_SUITE
