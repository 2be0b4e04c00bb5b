#pragma once

#include "lcl/exact_distribution.hpp"
#include "lcl/growth_function.hpp"
#include "lcl/report.hpp"
#include "lcl/sampler.hpp"
#include "lcl/statistics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lcl {

inline constexpr double lemma1_constant = 20.0 / 81.0;
inline constexpr double lemma2_constant = 17.0 / 81.0;

/// Samples ordered pairs (a, b) <= (c, d) in the generation-n box and
/// checks f(a, b) <= f(c, d) + 1e-12.
VerificationReport check_monotone(const GrowthFunction& fn, int n,
                                  std::size_t trials, std::uint64_t seed);

/// Gradient on the diagonal against (cx, cy), diagonal linearity
/// |f(t,t) - (cx+cy) t| <= 1e-12 t, and cx + cy > 0.
VerificationReport verify_condition1(const GrowthFunction& fn,
                                     std::span<const double> t_values);

struct Condition2Options {
  /// Gradient-guided search for the largest ratio after random sampling.
  bool refine = true;
  /// Grid resolution per axis for the guided search.
  int refine_grid = 64;
  /// Half-length of witness pairs, relative to the box edge.
  double witness_step = 1e-4;
};

/// (f(a1,a2) - f(a3,a4))^2 <= A (a1-a3)^2 + B (a2-a4)^2 on the generation-n
/// box, plus A + B < cx + cy. Also measures the smallest symmetric constant
/// A_hat = max (df)^2 / ((a1-a3)^2 + (a2-a4)^2) over everything tried.
VerificationReport verify_condition2(const GrowthFunction& fn, int n,
                                     std::size_t trials, double a, double b,
                                     std::uint64_t seed,
                                     const Condition2Options& options = {});

/// q_n = (2+cx+cy)^(2n) sup g^2 / 2^n over n_values for the three second
/// partials. Pass iff q_n strictly decreases and the last value is below
/// half the first.
VerificationReport verify_condition3(const GrowthFunction& fn,
                                     std::span<const int> n_values);

/// Remark-4 variant: A1 + B1 = E[(df)^2] / E[(a1 - a3)^2] over i.i.d.
/// copies of X_n, then A1 + B1 < cx + cy and 2 + A^2 + B^2 < (2 + A1 + B1)^2.
/// The law is exact (double sum) or a pool (`trials` random quadruples).
VerificationReport verify_remark4(const GrowthFunction& fn,
                                  const DiscreteDistribution& law, double a,
                                  double b);
VerificationReport verify_remark4(const GrowthFunction& fn,
                                  const SamplePool& pool, std::size_t trials,
                                  std::uint64_t seed, double a, double b);

enum class Lemma { lemma1, lemma2 };

/// Random positive quadruples with all pairwise ratios in [1/2, 2] against
/// K in {20/81, 17/81} for the harmonic f.
VerificationReport check_lemma_bound(Lemma which, std::size_t trials,
                                     std::uint64_t seed);

/// (f1(1+e, 2) - f1(1, 2 - e/4))^2 / (e^2 + (e/4)^2) for each e.
double lemma2_witness_ratio(double eps);
VerificationReport lemma2_tightness(std::span<const double> eps_values);

/// Normalized means against [1.43, 89/60] from n >= 1 (harmonic) or
/// [1.46, 1.49] from n >= 2 (geometric); sampled records get 3 s.e. slack.
VerificationReport expectation_bounds_check(const GrowthFunction& fn,
                                            const GrowthTrace& trace);

/// Re-evaluates a counterexample of `report` and returns true iff it
/// still violates the checked inequality.
bool replay_counterexample(const GrowthFunction& fn,
                           const VerificationReport& report,
                           const Counterexample& ce);

}  // namespace lcl
