#include "lcl/verifier.hpp"

#include "lcl/resistance_net.hpp"
#include "lcl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lcl {

namespace {

constexpr double cond2_rel_tol = 1e-12;
constexpr double lemma_tol = 1e-12;
constexpr double lemma_eta = 1e-9;
constexpr double monotone_tol = 1e-12;

struct Quad {
  double a1, a2, a3, a4;
};

Counterexample quad_counterexample(const Quad& q, std::uint64_t seed,
                                   std::uint64_t trial, double lhs, double rhs,
                                   std::string note) {
  Counterexample ce;
  ce.inputs = {q.a1, q.a2, q.a3, q.a4};
  ce.seed = seed;
  ce.trial = trial;
  ce.lhs = lhs;
  ce.rhs = rhs;
  ce.note = std::move(note);
  return ce;
}

Quad quad_from(const Counterexample& ce) {
  if (ce.inputs.size() != 4)
    throw std::invalid_argument("counterexample needs four inputs");
  return {ce.inputs[0], ce.inputs[1], ce.inputs[2], ce.inputs[3]};
}

double condition2_lhs(const GrowthFunction& fn, const Quad& q) {
  const double d = fn(q.a1, q.a2) - fn(q.a3, q.a4);
  return d * d;
}

double condition2_rhs(const Quad& q, double a, double b, double abs_tol) {
  const double dx = q.a1 - q.a3;
  const double dy = q.a2 - q.a4;
  return a * dx * dx + b * dy * dy + abs_tol;
}

double secant_ratio(double lhs, const Quad& q) {
  const double dx = q.a1 - q.a3;
  const double dy = q.a2 - q.a4;
  const double den = dx * dx + dy * dy;
  return den > 0.0 ? lhs / den : 0.0;
}

/// p +- h u, shifted so both points stay in [lo, hi]^2.
Quad witness_pair(double px, double py, Eigen::Vector2d u, double h, double lo,
                  double hi) {
  const double norm = u.norm();
  if (!(norm > 0.0)) u = {1.0, 0.0};
  else u /= norm;
  const double hx = h * std::abs(u.x());
  const double hy = h * std::abs(u.y());
  px = std::clamp(px, lo + hx, hi - hx);
  py = std::clamp(py, lo + hy, hi - hy);
  return {px + h * u.x(), py + h * u.y(), px - h * u.x(), py - h * u.y()};
}

double lemma_constant(Lemma which) {
  return which == Lemma::lemma1 ? lemma1_constant : lemma2_constant;
}

double lemma_tolerance(const Quad& q) {
  const double m = std::min({q.a1, q.a2, q.a3, q.a4});
  return lemma_tol * std::max(1.0, m * m);
}

double harmonic_sq_diff(const Quad& q) {
  const double d = kernels::harmonic(q.a1, q.a2) - kernels::harmonic(q.a3, q.a4);
  return d * d;
}

double hessian_sup_of(const GrowthFunction& fn, double lower, bool& analytic) {
  if (auto s = fn.hessian_sup(lower)) {
    analytic = true;
    return *s;
  }
  analytic = false;
  constexpr int grid = 1000;
  double best = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double t = lower * (1.0 + static_cast<double>(i) / (grid - 1));
    for (int j = 0; j < grid; ++j) {
      const double s = lower * (1.0 + static_cast<double>(j) / (grid - 1));
      best = std::max(best, fn.hessian(t, s).cwiseAbs().maxCoeff());
    }
  }
  return best;
}

double condition3_q(const GrowthFunction& fn, int n, bool& analytic) {
  const double lower = generation_lower(fn, n);
  const double sup = hessian_sup_of(fn, lower, analytic);
  return std::pow(fn.mean_base(), 2.0 * n) * sup * sup / std::pow(2.0, n);
}

struct Remark4Outcome {
  bool below_margin;
  bool squares;
  double lhs;
  double rhs;
};

Remark4Outcome remark4_inequalities(double a1b1, double a, double b,
                                    double cx_plus_cy) {
  const double lhs = 2.0 + a * a + b * b;
  const double rhs = (2.0 + a1b1) * (2.0 + a1b1);
  return {a1b1 < cx_plus_cy, lhs < rhs, lhs, rhs};
}

VerificationReport remark4_report(const GrowthFunction& fn, double num,
                                  double den, double a, double b, Json params) {
  if (!(den > 0.0))
    throw std::invalid_argument("remark-4 check needs a law with positive variance");
  const double a1b1 = num / den;
  const auto out = remark4_inequalities(a1b1, a, b, fn.cx() + fn.cy());
  VerificationReport r;
  r.check = "remark4";
  r.fn = fn.id();
  params["A"] = a;
  params["B"] = b;
  r.params = std::move(params);
  r.measurements = {{"a1_plus_b1", a1b1},
                    {"cx_plus_cy", fn.cx() + fn.cy()},
                    {"e_sq_df", num},
                    {"e_sq_da", den},
                    {"two_plus_a2_b2", out.lhs},
                    {"two_plus_a1b1_sq", out.rhs},
                    {"margin_holds", out.below_margin},
                    {"square_inequality_holds", out.squares}};
  r.set_threshold("A", Provenance::analytic);
  r.set_threshold("B", Provenance::analytic);
  r.set_threshold("cx_plus_cy", Provenance::published);
  r.verdict = out.below_margin && out.squares ? Verdict::pass : Verdict::fail;
  if (r.failed()) {
    Counterexample ce;
    ce.inputs = {a1b1, a, b};
    ce.lhs = out.below_margin ? out.lhs : a1b1;
    ce.rhs = out.below_margin ? out.rhs : fn.cx() + fn.cy();
    ce.note = out.below_margin ? "2 + A^2 + B^2 >= (2 + A1 + B1)^2"
                               : "A1 + B1 >= cx + cy";
    r.counterexamples.push_back(ce);
  }
  return r;
}

struct Bounds {
  double lo;
  double hi;
  int from_n;
};

Bounds expectation_bounds_for(const GrowthFunction& fn) {
  if (fn.id() == "harmonic") return {1.43, 89.0 / 60.0, 1};
  if (fn.id() == "geometric") return {1.46, 1.49, 2};
  throw std::invalid_argument("expectation bounds are known only for harmonic and geometric");
}

bool outside_bounds(double value, double se, const Bounds& b) {
  const double slack = 3.0 * se + 1e-12 * std::abs(value);
  return value < b.lo - slack || value > b.hi + slack;
}

}  // namespace

VerificationReport check_monotone(const GrowthFunction& fn, int n,
                                  std::size_t trials, std::uint64_t seed) {
  const double lo = generation_lower(fn, n);
  const double hi = 2.0 * lo;
  const CounterRng rng(seed, Stream::monotone);
  VerificationReport r;
  r.check = "monotone";
  r.fn = fn.id();
  r.params = {{"n", n}, {"trials", trials}, {"seed", seed},
              {"relative_tolerance", monotone_tol}};
  r.set_threshold("relative_tolerance", Provenance::tool_default);
  std::size_t violations = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const double a = lo + rng.uniform(i, 0) * lo;
    const double b = lo + rng.uniform(i, 1) * lo;
    const double c = a + rng.uniform(i, 2) * (hi - a);
    const double d = b + rng.uniform(i, 3) * (hi - b);
    const double fab = fn(a, b);
    const double fcd = fn(c, d);
    if (fab > fcd + monotone_tol * std::max(1.0, std::abs(fcd))) {
      if (violations < 8)
        r.counterexamples.push_back(quad_counterexample(
            {a, b, c, d}, seed, i, fab, fcd, "f(a,b) > f(c,d) with (a,b) <= (c,d)"));
      ++violations;
    }
  }
  r.measurements = {{"violations", violations}};
  r.verdict = violations == 0 ? Verdict::pass : Verdict::fail;
  return r;
}

VerificationReport verify_condition1(const GrowthFunction& fn,
                                     std::span<const double> t_values) {
  if (t_values.size() < 3)
    throw std::invalid_argument("condition 1 needs at least three t values");
  for (std::size_t i = 1; i < t_values.size(); ++i)
    if (!(t_values[i] > t_values[i - 1]))
      throw std::invalid_argument("t values must be increasing");

  const double cx = fn.cx();
  const double cy = fn.cy();
  VerificationReport r;
  r.check = "condition1";
  r.fn = fn.id();
  r.params = {{"t_values", std::vector<double>(t_values.begin(), t_values.end())},
              {"diagonal_relative_tolerance", 1e-12},
              {"final_gradient_tolerance", 1e-6}};
  r.set_threshold("diagonal_relative_tolerance", Provenance::tool_default);
  r.set_threshold("final_gradient_tolerance", Provenance::calibrated);

  Json devs = Json::array();
  Json diag = Json::array();
  std::vector<double> dev_values;
  bool diagonal_ok = true;
  for (double t : t_values) {
    const Gradient g = fn.gradient(t, t);
    const double dev = std::max(std::abs(g.x() - cx), std::abs(g.y() - cy));
    const double lin = std::abs(fn(t, t) - (cx + cy) * t);
    dev_values.push_back(dev);
    devs.push_back(dev);
    diag.push_back(lin);
    if (lin > 1e-12 * t) {
      diagonal_ok = false;
      Counterexample ce;
      ce.inputs = {t};
      ce.lhs = fn(t, t);
      ce.rhs = (cx + cy) * t;
      ce.note = "f(t,t) != (cx+cy) t";
      r.counterexamples.push_back(ce);
    }
  }
  bool trend_ok = dev_values.back() <= 1e-6;
  for (std::size_t i = 1; i < dev_values.size(); ++i)
    if (dev_values[i] > dev_values[i - 1] + 1e-12) trend_ok = false;
  if (!trend_ok) {
    Counterexample ce;
    ce.inputs = {t_values.back()};
    ce.lhs = dev_values.back();
    ce.rhs = 1e-6;
    ce.note = "diagonal gradient does not settle at (cx, cy)";
    r.counterexamples.push_back(ce);
  }
  const bool positive = cx + cy > 0.0;
  if (!positive) {
    Counterexample ce;
    ce.lhs = cx + cy;
    ce.note = "cx + cy <= 0";
    r.counterexamples.push_back(ce);
  }
  r.measurements = {{"cx", cx},
                    {"cy", cy},
                    {"gradient_deviation", devs},
                    {"diagonal_error", diag},
                    {"gradient_trend_ok", trend_ok},
                    {"diagonal_linear", diagonal_ok},
                    {"numeric_derivatives", fn.numeric_derivatives()}};
  r.verdict = diagonal_ok && trend_ok && positive ? Verdict::pass : Verdict::fail;
  return r;
}

VerificationReport verify_condition2(const GrowthFunction& fn, int n,
                                     std::size_t trials, double a, double b,
                                     std::uint64_t seed,
                                     const Condition2Options& options) {
  if (!(a >= 0.0) || !(b >= 0.0))
    throw std::invalid_argument("condition 2 constants must be >= 0");
  const double lo = generation_lower(fn, n);
  const double hi = 2.0 * lo;
  const double abs_tol = cond2_rel_tol * lo * lo;
  const CounterRng rng(seed, Stream::condition2);

  VerificationReport r;
  r.check = "condition2";
  r.fn = fn.id();
  r.params = {{"n", n},
              {"trials", trials},
              {"seed", seed},
              {"A", a},
              {"B", b},
              {"relative_tolerance", cond2_rel_tol},
              {"absolute_tolerance", abs_tol},
              {"refine", options.refine},
              {"refine_grid", options.refine_grid},
              {"witness_step", options.witness_step}};
  r.set_threshold("relative_tolerance", Provenance::tool_default);
  r.set_threshold("cx_plus_cy", Provenance::published);

  double a_hat = 0.0;
  std::size_t violations = 0;
  auto test = [&](const Quad& q, std::uint64_t trial, const char* note) {
    const double lhs = condition2_lhs(fn, q);
    const double rhs = condition2_rhs(q, a, b, abs_tol);
    a_hat = std::max(a_hat, secant_ratio(lhs, q));
    if (lhs > rhs) {
      if (r.counterexamples.size() < 8)
        r.counterexamples.push_back(quad_counterexample(q, seed, trial, lhs, rhs, note));
      ++violations;
    }
  };

  for (std::size_t i = 0; i < trials; ++i) {
    const Quad q{lo + rng.uniform(i, 0) * lo, lo + rng.uniform(i, 1) * lo,
                 lo + rng.uniform(i, 2) * lo, lo + rng.uniform(i, 3) * lo};
    test(q, i, "random quadruple");
  }

  double grad_sq_sup = 0.0;
  if (options.refine && options.refine_grid >= 2) {
    // Short secants along the worst gradient direction approach the
    // pointwise supremum of the ratio.
    const int k = options.refine_grid;
    const double h = options.witness_step * lo;
    double best_sym = -1.0, best_weighted = -1.0;
    double sym_x = lo, sym_y = lo, w_x = lo, w_y = lo;
    Gradient sym_dir{1.0, 0.0}, w_dir{1.0, 0.0};
    for (int i = 0; i < k; ++i) {
      const double t = lo * (1.0 + static_cast<double>(i) / (k - 1));
      for (int j = 0; j < k; ++j) {
        const double s = lo * (1.0 + static_cast<double>(j) / (k - 1));
        const Gradient g = fn.gradient(t, s);
        const double sym = g.squaredNorm();
        if (sym > best_sym) {
          best_sym = sym;
          sym_x = t;
          sym_y = s;
          sym_dir = g;
        }
        const double ax = std::max(a, 1e-300);
        const double by = std::max(b, 1e-300);
        const double weighted = g.x() * g.x() / ax + g.y() * g.y() / by;
        if (weighted > best_weighted) {
          best_weighted = weighted;
          w_x = t;
          w_y = s;
          w_dir = {g.x() / ax, g.y() / by};
        }
      }
    }
    grad_sq_sup = best_sym;
    test(witness_pair(sym_x, sym_y, sym_dir, h, lo, hi), trials, "gradient witness");
    test(witness_pair(w_x, w_y, w_dir, h, lo, hi), trials + 1, "weighted gradient witness");
  }

  const bool margin = a + b < fn.cx() + fn.cy();
  if (!margin) {
    Counterexample ce;
    ce.lhs = a + b;
    ce.rhs = fn.cx() + fn.cy();
    ce.seed = seed;
    ce.note = "constants: A + B >= cx + cy";
    r.counterexamples.push_back(ce);
  }
  r.measurements = {{"lower", lo},
                    {"upper", hi},
                    {"violations", violations},
                    {"a_hat", a_hat},
                    {"two_a_hat", 2.0 * a_hat},
                    {"gradient_sq_sup_grid", grad_sq_sup},
                    {"a_plus_b", a + b},
                    {"cx_plus_cy", fn.cx() + fn.cy()},
                    {"margin_holds", margin}};
  r.verdict = violations == 0 && margin ? Verdict::pass : Verdict::fail;
  return r;
}

VerificationReport verify_condition3(const GrowthFunction& fn,
                                     std::span<const int> n_values) {
  if (n_values.size() < 3)
    throw std::invalid_argument("condition 3 needs at least three generations");
  VerificationReport r;
  r.check = "condition3";
  r.fn = fn.id();
  r.params = {{"n", std::vector<int>(n_values.begin(), n_values.end())},
              {"grid", 1000}};
  Json qs = Json::array();
  Json sups = Json::array();
  std::vector<double> q;
  bool all_analytic = true;
  for (int n : n_values) {
    bool analytic = false;
    q.push_back(condition3_q(fn, n, analytic));
    all_analytic = all_analytic && analytic;
    qs.push_back(q.back());
    sups.push_back(std::sqrt(q.back() * std::pow(2.0, n)) /
                   std::pow(fn.mean_base(), n));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < q.size(); ++i) {
    if (!(q[i] < q[i - 1])) {
      decreasing = false;
      Counterexample ce;
      ce.inputs = {static_cast<double>(n_values[i - 1]),
                   static_cast<double>(n_values[i])};
      ce.lhs = q[i];
      ce.rhs = q[i - 1];
      ce.note = "q_n not decreasing";
      r.counterexamples.push_back(ce);
    }
  }
  const bool halved = q.back() < 0.5 * q.front();
  if (!halved) {
    Counterexample ce;
    ce.inputs = {static_cast<double>(n_values.front()),
                 static_cast<double>(n_values.back())};
    ce.lhs = q.back();
    ce.rhs = 0.5 * q.front();
    ce.note = "q_n not below half its first value";
    r.counterexamples.push_back(ce);
  }
  Json ratios = Json::array();
  for (std::size_t i = 1; i < q.size(); ++i) ratios.push_back(q[i] / q[i - 1]);
  r.measurements = {{"q", qs},
                    {"hessian_sup", sups},
                    {"q_ratio", ratios},
                    {"sup_source", all_analytic ? fn.hessian_sup_provenance()
                                                : std::string("grid")}};
  if (!all_analytic)
    r.measurements["caveat"] = "grid maximum is a lower bound on the supremum";
  r.set_threshold("hessian_sup", all_analytic ? Provenance::analytic
                                              : Provenance::calibrated);
  r.verdict = decreasing && halved ? Verdict::pass : Verdict::fail;
  return r;
}

VerificationReport verify_remark4(const GrowthFunction& fn,
                                  const DiscreteDistribution& law, double a,
                                  double b) {
  law.validate();
  const double var = law.variance();
  // E[(f(a1,a2) - f(a3,a4))^2] = 2 Var f(A, B) for i.i.d. inputs.
  double sum = 0.0, sum_c = 0.0;
  double sq = 0.0, sq_c = 0.0;
  auto add = [](double& s, double& c, double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  };
  const std::size_t k = law.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double p = law.probs[i] * law.probs[j];
      const double v = fn(law.support[i], law.support[j]);
      add(sum, sum_c, p * v);
      add(sq, sq_c, p * v * v);
    }
  const double mean_f = sum + sum_c;
  const double var_f = std::max(0.0, (sq + sq_c) - mean_f * mean_f);
  return remark4_report(fn, 2.0 * var_f, 2.0 * var, a, b,
                        {{"n", law.n}, {"source", "exact"}, {"atoms", k}});
}

VerificationReport verify_remark4(const GrowthFunction& fn,
                                  const SamplePool& pool, std::size_t trials,
                                  std::uint64_t seed, double a, double b) {
  if (pool.values.empty() || trials == 0)
    throw std::invalid_argument("remark-4 check needs a nonempty pool and trials");
  const CounterRng rng(seed, Stream::remark4);
  const std::uint64_t m = pool.values.size();
  MomentAccumulator num, den;
  for (std::size_t i = 0; i < trials; ++i) {
    const double a1 = pool.values[rng.below(i, 0, m)];
    const double a2 = pool.values[rng.below(i, 1, m)];
    const double a3 = pool.values[rng.below(i, 2, m)];
    const double a4 = pool.values[rng.below(i, 3, m)];
    const double df = fn(a1, a2) - fn(a3, a4);
    num.add(df * df);
    den.add((a1 - a3) * (a1 - a3));
  }
  return remark4_report(fn, num.mean(), den.mean(), a, b,
                        {{"n", pool.n},
                         {"source", "pool"},
                         {"pool_size", pool.values.size()},
                         {"trials", trials},
                         {"seed", seed}});
}

VerificationReport check_lemma_bound(Lemma which, std::size_t trials,
                                     std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  const double k = lemma_constant(which);
  const CounterRng rng(seed, Stream::lemma);
  VerificationReport r;
  r.check = which == Lemma::lemma1 ? "lemma1" : "lemma2";
  r.fn = "harmonic";
  r.params = {{"trials", trials},
              {"seed", seed},
              {"K", k},
              {"tolerance", lemma_tol},
              {"eta", lemma_eta}};
  r.set_threshold("K", Provenance::published);
  r.set_threshold("tolerance", Provenance::tool_default);
  double max_ratio = 0.0;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    // Every admissible quadruple sits in [m, 2m] for m = its minimum.
    const double base = std::exp2(-4.0 + 8.0 * rng.uniform(i, 4));
    const double span = 1.0 - 2.0 * lemma_eta;
    const Quad q{base * (1.0 + rng.uniform(i, 0) * span),
                 base * (1.0 + rng.uniform(i, 1) * span),
                 base * (1.0 + rng.uniform(i, 2) * span),
                 base * (1.0 + rng.uniform(i, 3) * span)};
    const double lhs = harmonic_sq_diff(q);
    const double dx = q.a1 - q.a3;
    const double dy = q.a2 - q.a4;
    const double rhs = k * (dx * dx + dy * dy) + lemma_tolerance(q);
    max_ratio = std::max(max_ratio, secant_ratio(lhs, q));
    if (lhs > rhs) {
      if (violations < 8)
        r.counterexamples.push_back(quad_counterexample(q, seed, i, lhs, rhs, "lemma bound exceeded"));
      ++violations;
    }
  }
  r.measurements = {{"max_ratio", max_ratio}, {"violations", violations}};
  r.verdict = violations == 0 ? Verdict::pass : Verdict::fail;
  return r;
}

double lemma2_witness_ratio(double eps) {
  const double d = kernels::harmonic(1.0 + eps, 2.0) -
                   kernels::harmonic(1.0, 2.0 - eps / 4.0);
  return d * d / (eps * eps + eps * eps / 16.0);
}

VerificationReport lemma2_tightness(std::span<const double> eps_values) {
  if (eps_values.empty())
    throw std::invalid_argument("tightness needs at least one epsilon");
  for (std::size_t i = 0; i < eps_values.size(); ++i) {
    if (!(eps_values[i] > 0.0))
      throw std::invalid_argument("epsilon values must be positive");
    if (i > 0 && !(eps_values[i] < eps_values[i - 1]))
      throw std::invalid_argument("epsilon values must be decreasing");
  }
  constexpr double k = lemma2_constant;
  VerificationReport r;
  r.check = "lemma2_tightness";
  r.fn = "harmonic";
  r.params = {{"eps", std::vector<double>(eps_values.begin(), eps_values.end())},
              {"target", k},
              {"final_tolerance", 1e-3}};
  r.set_threshold("target", Provenance::published);
  r.set_threshold("final_tolerance", Provenance::tool_default);
  Json ratios = Json::array();
  Json gaps = Json::array();
  bool bounded = true;
  bool approaching = true;
  double prev_gap = std::numeric_limits<double>::infinity();
  for (double e : eps_values) {
    const double ratio = lemma2_witness_ratio(e);
    const double gap = std::abs(ratio - k);
    ratios.push_back(ratio);
    gaps.push_back(gap);
    if (ratio > k + lemma_tol) {
      bounded = false;
      Counterexample ce;
      ce.inputs = {e};
      ce.lhs = ratio;
      ce.rhs = k + lemma_tol;
      ce.note = "witness ratio above 17/81";
      r.counterexamples.push_back(ce);
    }
    if (gap > prev_gap) approaching = false;
    prev_gap = gap;
  }
  const double final_gap = prev_gap;
  const bool close = final_gap < 1e-3;
  if (!close || !approaching) {
    Counterexample ce;
    ce.inputs = {eps_values.back()};
    ce.lhs = final_gap;
    ce.rhs = 1e-3;
    ce.note = close ? "witness ratios do not approach 17/81 monotonically"
                    : "witness ratio not within 1e-3 of 17/81";
    r.counterexamples.push_back(ce);
  }
  r.measurements = {{"ratio", ratios},
                    {"gap", gaps},
                    {"bounded", bounded},
                    {"approaching", approaching}};
  r.verdict = bounded && approaching && close ? Verdict::pass : Verdict::fail;
  return r;
}

VerificationReport expectation_bounds_check(const GrowthFunction& fn,
                                            const GrowthTrace& trace) {
  const Bounds bounds = expectation_bounds_for(fn);
  VerificationReport r;
  r.check = "expectation_bounds";
  r.fn = fn.id();
  r.params = {{"lower", bounds.lo},
              {"upper", bounds.hi},
              {"from_n", bounds.from_n},
              {"se_slack", 3.0}};
  r.set_threshold("lower", Provenance::published);
  r.set_threshold("upper", Provenance::published);
  r.set_threshold("se_slack", Provenance::tool_default);
  const MeanGrowth growth =
      mean_growth(trace, fn.cx(), fn.cy(), fn.curvature());
  Json ns = Json::array();
  Json values = Json::array();
  std::size_t checked = 0;
  for (const auto& p : growth.points) {
    ns.push_back(p.n);
    values.push_back(p.value);
    if (p.n < bounds.from_n) continue;
    ++checked;
    if (outside_bounds(p.value, p.se, bounds)) {
      Counterexample ce;
      ce.inputs = {static_cast<double>(p.n), p.value, p.se};
      ce.lhs = p.value;
      ce.rhs = p.value < bounds.lo ? bounds.lo : bounds.hi;
      ce.note = p.value < bounds.lo ? "below lower bound" : "above upper bound";
      r.counterexamples.push_back(ce);
    }
  }
  if (growth.monotonicity_violated) {
    Counterexample ce;
    ce.note = "normalized mean moves against the concavity direction";
    r.counterexamples.push_back(ce);
  }
  r.measurements = {{"n", ns},
                    {"normalized_mean", values},
                    {"checked", checked},
                    {"monotonicity_violated", growth.monotonicity_violated}};
  r.verdict = r.counterexamples.empty() ? Verdict::pass : Verdict::fail;
  return r;
}

bool replay_counterexample(const GrowthFunction& fn,
                           const VerificationReport& report,
                           const Counterexample& ce) {
  const auto& p = report.params;
  const std::string& check = report.check;
  if (check == "condition2") {
    const double a = p.at("A").get<double>();
    const double b = p.at("B").get<double>();
    if (ce.inputs.empty()) return a + b >= fn.cx() + fn.cy();
    const Quad q = quad_from(ce);
    return condition2_lhs(fn, q) >
           condition2_rhs(q, a, b, p.at("absolute_tolerance").get<double>());
  }
  if (check == "lemma1" || check == "lemma2") {
    const Quad q = quad_from(ce);
    const double k = p.at("K").get<double>();
    const double dx = q.a1 - q.a3;
    const double dy = q.a2 - q.a4;
    return harmonic_sq_diff(q) > k * (dx * dx + dy * dy) + lemma_tolerance(q);
  }
  if (check == "lemma2_tightness") {
    const double ratio = lemma2_witness_ratio(ce.inputs.at(0));
    if (ce.note == "witness ratio above 17/81") return ratio > lemma2_constant + lemma_tol;
    if (ce.note == "witness ratio not within 1e-3 of 17/81")
      return std::abs(ratio - lemma2_constant) >= 1e-3;
    std::vector<double> eps = p.at("eps").get<std::vector<double>>();
    return lemma2_tightness(eps).failed();
  }
  if (check == "monotone") {
    const Quad q = quad_from(ce);
    const double fcd = fn(q.a3, q.a4);
    return fn(q.a1, q.a2) > fcd + monotone_tol * std::max(1.0, std::abs(fcd));
  }
  if (check == "range") {
    const double v = ce.inputs.at(0);
    const double tol = p.at("relative_tolerance").get<double>();
    const double lower = std::pow(2.0 + p.at("cx").get<double>() +
                                      p.at("cy").get<double>(),
                                  p.at("n").get<int>());
    return !(v >= lower * (1.0 - tol) && v <= 2.0 * lower * (1.0 + tol));
  }
  if (check == "condition1") {
    if (ce.inputs.empty()) return fn.cx() + fn.cy() <= 0.0;
    const double t = ce.inputs[0];
    if (ce.note == "f(t,t) != (cx+cy) t")
      return std::abs(fn(t, t) - (fn.cx() + fn.cy()) * t) > 1e-12 * t;
    const Gradient g = fn.gradient(t, t);
    return std::max(std::abs(g.x() - fn.cx()), std::abs(g.y() - fn.cy())) > 1e-6;
  }
  if (check == "condition3") {
    bool analytic = false;
    const double q0 = condition3_q(fn, static_cast<int>(ce.inputs.at(0)), analytic);
    const double q1 = condition3_q(fn, static_cast<int>(ce.inputs.at(1)), analytic);
    if (ce.note == "q_n not decreasing") return !(q1 < q0);
    return !(q1 < 0.5 * q0);
  }
  if (check == "remark4") {
    const auto out = remark4_inequalities(ce.inputs.at(0), ce.inputs.at(1),
                                          ce.inputs.at(2), fn.cx() + fn.cy());
    return !(out.below_margin && out.squares);
  }
  if (check == "expectation_bounds") {
    if (ce.inputs.empty()) return true;
    return outside_bounds(ce.inputs.at(1), ce.inputs.at(2), expectation_bounds_for(fn));
  }
  if (check == "resistance_equivalence") {
    const int n = static_cast<int>(ce.inputs.at(0));
    if (ce.inputs.size() > 1) {
      const std::span<const double> res(ce.inputs.begin() + 1, ce.inputs.end());
      const double sp = series_parallel_resistance(n, res);
      const double lap = laplacian_resistance(build_lcl(n, res));
      return std::abs(sp - lap) / lap > 1e-9;
    }
    const auto res = lcl_resistances(n, ce.seed);
    const double sp = series_parallel_resistance(n, res);
    const double lap = laplacian_resistance(build_lcl(n, res));
    return std::abs(sp - lap) / lap > 1e-9;
  }
  if (check == "variance_identity") {
    const int n = static_cast<int>(ce.inputs.at(0));
    const auto laws = exact_sequence(fn, n + 1, DeltaPolicy{n + 1, 0.0});
    return check_variance_identity(fn, laws[n], laws[n + 1]).failed();
  }
  throw std::invalid_argument("no replay rule for check '" + check + "'");
}

}  // namespace lcl
