#pragma once

#include "lcl/growth_function.hpp"
#include "lcl/report.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lcl {

/// Finite law of X_n: strictly increasing support with positive weights.
///
/// `quant_error_bound` bounds how far any atom has been moved by binning,
/// in the sense of a coupling: |X_quantized - X_exact| <= bound.
struct DiscreteDistribution {
  std::vector<double> support;
  std::vector<double> probs;
  int n = 0;
  double quant_error_bound = 0.0;
  /// False once any step binned atoms with delta > 0.
  bool exact = true;
  std::string fn_id;
  /// Human-readable record of the binning policy, e.g. "exact" or
  /// "relative:0.0001".
  std::string delta_policy = "exact";

  std::size_t size() const { return support.size(); }
  double mean() const;
  double variance() const;
  /// Throws std::invalid_argument if any invariant is broken.
  void validate() const;
};

DiscreteDistribution x0_distribution();

/// Point mass at v.
DiscreteDistribution degenerate_distribution(double v, int n = 0);

struct ExactOptions {
  /// Upper bound on candidate atoms in an unbinned convolution.
  std::size_t atom_cap = 10'000'000;
  /// Relative tolerance at which distinct float values are treated as one.
  double merge_tolerance = 1e-12;
};

/// Law of A + B + f(C, D) for A, B, C, D i.i.d. ~ dist.
///
/// With delta == 0 the result is exact up to merging values closer than
/// merge_tolerance * (2+cx+cy)^(n+1); CapExceededError is thrown if the
/// convolution of (A+B) with f(C, D) would produce more than atom_cap
/// candidates. With delta > 0 the laws of A+B, of f(C, D), and of the sum
/// are each binned on a grid of width delta, every bin represented by its
/// probability-weighted mean; each binning moves an atom by less than
/// delta, so the bound grows as (2+cx+cy) * old + 3 delta.
DiscreteDistribution exact_next(const GrowthFunction& fn,
                                const DiscreteDistribution& dist, double delta,
                                const ExactOptions& options = {});

/// How exact_sequence picks delta per step.
struct DeltaPolicy {
  /// Steps producing generations <= this are unbinned.
  int exact_through = 2;
  /// Relative width: delta = delta0 * (2+cx+cy)^(output generation).
  double delta0 = 1e-4;
};

/// X_0 .. X_n_max under `policy`.
std::vector<DiscreteDistribution> exact_sequence(const GrowthFunction& fn,
                                                 int n_max,
                                                 const DeltaPolicy& policy = {},
                                                 const ExactOptions& options = {});

struct Moments {
  /// raw[k-1] = E[X^k], k = 1..order.
  std::vector<double> raw;
  /// central[k-2] = E[(X - mu)^k], k = 2..order.
  std::vector<double> central;

  double mean() const { return raw.at(0); }
  double variance() const { return central.at(0); }
};

/// Raw and central moments up to `order` (1..4) with compensated summation.
Moments moments(const DiscreteDistribution& dist, int order = 4);

/// E[(X - X')^4] for an independent copy X', by direct double sum.
double independent_fourth_difference(const DiscreteDistribution& dist);

/// Law of f(C, D), C, D i.i.d. ~ dist, unbinned.
DiscreteDistribution pushforward_law(const GrowthFunction& fn,
                                     const DiscreteDistribution& dist,
                                     const ExactOptions& options = {});

/// Var[X_{n+1}] from `next` against 2 Var[X_n] + 1/2 E[(f(a1,a2) - f(a3,a4))^2]
/// from `current`. Pass iff relative difference <= 1e-10. Rejects binned input.
VerificationReport check_variance_identity(const GrowthFunction& fn,
                                           const DiscreteDistribution& current,
                                           const DiscreteDistribution& next);

/// For each law: r_n = E[(X - X')^4] / Var^2 (0 for degenerate laws) and the
/// sandwich 2 E[(X-mu)^4] <= E[(X - X')^4] <= 16 E[(X-mu)^4]. Pass iff the
/// sandwich holds everywhere and max r_n <= 10 r_1 (r_0 if r_1 is 0).
/// Needs at least three laws.
VerificationReport fourth_moment_diagnostic(
    std::span<const DiscreteDistribution> dists);

}  // namespace lcl
