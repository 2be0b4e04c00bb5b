#include <doctest.h>

#include "lcl/exact_distribution.hpp"
#include "lcl/rng.hpp"
#include "lcl/sampler.hpp"
#include "lcl/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace lcl;
using doctest::Approx;

namespace {

GrowthTrace exact_trace(const GrowthFunction& f, int n_max) {
  GrowthTrace t;
  t.fn_id = f.id();
  for (const auto& d : exact_sequence(f, n_max)) t.push(record_from_distribution(d));
  return t;
}

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_SUITE("statistics") {

TEST_CASE("accumulator matches two-pass moments") {
  const auto xs = normal_draws(4, 10'001);
  MomentAccumulator acc;
  acc.add(xs);
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : xs) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  CHECK(acc.count() == xs.size());
  CHECK(acc.mean() == Approx(mean).epsilon(1e-12));
  CHECK(close(acc.variance(), m2 / n, 1e-12));
  CHECK(std::abs(acc.central3() - m3 / n) <= 1e-12 * std::abs(m2 / n));
  CHECK(close(acc.central4(), m4 / n, 1e-12));
  CHECK(close(acc.sample_variance(), m2 / (n - 1), 1e-12));
  CHECK(MomentAccumulator{}.variance() == 0.0);
}

TEST_CASE("property: merge order does not matter") {
  const auto xs = sample_tree_batch(harmonic(), 3, 12, 100'000);
  MomentAccumulator whole;
  whole.add(xs);
  const CounterRng rng(77, 1);
  for (int trial = 0; trial < 20; ++trial) {
    // Random cut points, then merge the pieces in a random order.
    std::vector<std::size_t> cuts = {0, xs.size()};
    for (int k = 0; k < 6; ++k) cuts.push_back(rng.below(trial, k, xs.size()));
    std::sort(cuts.begin(), cuts.end());
    std::vector<MomentAccumulator> parts;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      MomentAccumulator p;
      p.add(std::span(xs).subspan(cuts[i], cuts[i + 1] - cuts[i]));
      parts.push_back(p);
    }
    for (std::size_t i = parts.size(); i > 1; --i)
      std::swap(parts[i - 1], parts[rng.below(trial, 100 + i, i)]);
    MomentAccumulator left;
    for (const auto& p : parts) left.merge(p);
    MomentAccumulator right;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      MomentAccumulator tmp = *it;
      tmp.merge(right);
      right = tmp;
    }
    for (const auto* m : {&left, &right}) {
      REQUIRE(m->count() == whole.count());
      CHECK(close(m->mean(), whole.mean(), 1e-10));
      CHECK(close(m->variance(), whole.variance(), 1e-10));
      CHECK(std::abs(m->central3() - whole.central3()) <=
            1e-10 * std::pow(whole.variance(), 1.5));
      CHECK(close(m->central4(), whole.central4(), 1e-10));
    }
  }
}

TEST_CASE("trace bookkeeping") {
  GrowthTrace t;
  t.push({.n = 3});
  t.push({.n = 4});
  CHECK_THROWS_AS(t.push({.n = 6}), std::invalid_argument);
  for (auto s : {TraceSource::exact, TraceSource::pool, TraceSource::tree})
    CHECK(trace_source_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(trace_source_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("variance growth ratios") {
  const auto t = exact_trace(harmonic(), 1);
  const auto r = variance_growth_ratios(t);
  REQUIRE(r.size() == 1);
  CHECK(r[0].n == 0);
  CHECK(r[0].value == Approx(307.0 / 144).epsilon(1e-14));
  CHECK(r[0].se == 0.0);

  GrowthTrace one;
  one.push({.n = 0, .variance = 1.0});
  CHECK_THROWS_AS(variance_growth_ratios(one), std::invalid_argument);
  one.push({.n = 1, .variance = 0.0});
  one.push({.n = 2, .variance = 1.0});
  CHECK_THROWS_AS(variance_growth_ratios(one), std::invalid_argument);

  GrowthTrace geo;
  for (int n = 0; n < 8; ++n) geo.push({.n = n, .variance = 0.3 * std::pow(2.125, n)});
  CHECK(log_variance_growth_base(geo) == Approx(2.125).epsilon(1e-12));
}

TEST_CASE("mean growth") {
  const auto h = harmonic();
  const auto t = exact_trace(h, 4);
  const auto mg = mean_growth(t, h.cx(), h.cy(), h.curvature());
  CHECK(mg.points[0].value == 1.5);
  CHECK(mg.points[1].value == Approx(89.0 / 60).epsilon(1e-14));
  CHECK_FALSE(mg.monotonicity_violated);
  for (std::size_t i = 1; i < mg.points.size(); ++i)
    CHECK(mg.points[i].value <= mg.points[i - 1].value);
  for (std::size_t i = 2; i < mg.points.size(); ++i) CHECK(mg.points[i].value >= 1.43);

  const auto g = geometric();
  const auto gm = mean_growth(exact_trace(g, 1), g.cx(), g.cy(), g.curvature());
  CHECK(gm.points[1].value == Approx((15 + 2 * std::sqrt(2.0)) / 12).epsilon(1e-14));

  GrowthTrace rising;
  rising.push({.n = 0, .mean = 1.0});
  rising.push({.n = 1, .mean = 3.0});
  CHECK(mean_growth(rising, 0.25, 0.25, Curvature::concave).monotonicity_violated);
  CHECK_FALSE(mean_growth(rising, 0.25, 0.25, Curvature::convex).monotonicity_violated);
  CHECK_FALSE(mean_growth(rising, 0.25, 0.25).monotonicity_violated);
}

TEST_CASE("standardize") {
  const std::vector<double> constant(200, 4.0);
  CHECK_THROWS_AS(self_standardize(constant), std::invalid_argument);
  CHECK_THROWS_AS(standardize(constant, 4.0, 0.0), std::invalid_argument);

  const auto x0 = sample_x0(3, 1000);
  for (double z : standardize(x0, 1.5, 0.25)) CHECK((z == -1.0 || z == 1.0));

  const auto xs = sample_tree_batch(harmonic(), 4, 6, 5000);
  MomentAccumulator acc;
  acc.add(self_standardize(xs));
  CHECK(std::abs(acc.mean()) <= 1e-12);
  CHECK(std::abs(acc.variance() - 1.0) <= 1e-12);
}

TEST_CASE("normal CDF and KS distance") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(1.96) - 0.9750021048517795) < 1e-7);
  CHECK(std::abs(normal_cdf(-3.0) - 0.0013498980316301) < 1e-7);

  CHECK(normal_ks_distance(normal_draws(1, 1'000'000)) < 0.002);

  std::vector<double> two_point(10'000);
  for (std::size_t i = 0; i < two_point.size(); ++i) two_point[i] = i % 2 ? 2.0 : 1.0;
  CHECK(normal_ks_distance(self_standardize(two_point)) ==
        Approx(normal_cdf(1.0) - 0.5).epsilon(1e-12));

  CHECK_THROWS_AS(normal_ks_distance(std::vector<double>(99, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("normal draws") {
  const auto z = normal_draws(9, 1'000'001);
  CHECK(z.size() == 1'000'001);
  MomentAccumulator acc;
  acc.add(z);
  CHECK(std::abs(acc.mean()) < 0.005);
  CHECK(std::abs(acc.variance() - 1.0) < 0.01);
  CHECK(std::abs(acc.central4() - 3.0) < 0.05);
  CHECK(normal_draws(9, 10) == std::vector<double>(z.begin(), z.begin() + 10));
}

TEST_CASE("batch standard errors") {
  const auto z = normal_draws(2, 200'000);
  const auto se = batch_standard_errors(z);
  const double ideal = 1.0 / std::sqrt(200'000.0);
  CHECK(se.se_mean > 0.5 * ideal);
  CHECK(se.se_mean < 1.5 * ideal);
  CHECK(se.se_var > 0.0);
  CHECK(batch_standard_errors(std::vector<double>(30, 1.0)).se_mean == 0.0);
  CHECK_THROWS_AS(batch_standard_errors(z, 1), std::invalid_argument);
}

TEST_CASE("fourth ratio trace") {
  GrowthTrace t;
  t.push(record_from_distribution(x0_distribution()));
  t.push({.n = 1, .variance = 2.0, .m4 = 12.0});  // Gaussian: mu4 = 3 sigma^4
  const auto r = fourth_ratio_trace(t);
  CHECK(r[0].value == 8.0);
  CHECK(r[1].value == 12.0);

  const auto h = fourth_ratio_trace(exact_trace(harmonic(), 4));
  double lo = h[0].value, hi = h[0].value;
  for (const auto& p : h) {
    lo = std::min(lo, p.value);
    hi = std::max(hi, p.value);
  }
  CHECK(hi / lo < 3.0);
}

TEST_CASE("property: pooled variance within 3 s.e. of exact for n <= 6") {
  const auto f = harmonic();
  const auto laws = exact_sequence(f, 6);
  auto pool = exact_x0_pool(1'000'000, f.id());
  for (int n = 1; n <= 6; ++n) {
    CAPTURE(n);
    pool = evolve_pool(f, pool, pool.size(), 13);
    const auto r = record_from_samples(n, pool.values, TraceSource::pool);
    const double slack = 3 * r.se_var + laws[n].quant_error_bound *
                                            (2 * std::sqrt(r.variance) + laws[n].quant_error_bound);
    CHECK(std::abs(r.variance - laws[n].variance()) <= slack);
  }
}

}  // TEST_SUITE
