#pragma once

#include "lcl/exact_distribution.hpp"
#include "lcl/sampler.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lcl {

/// Single-pass count, mean and central sums M2..M4 with the pairwise
/// update/merge formulas of Pebay (2008). Mergeable in any order.
class MomentAccumulator {
 public:
  void add(double x);
  void add(std::span<const double> xs);
  void merge(const MomentAccumulator& other);

  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  /// Population moments E[(X - mean)^k], k = 2..4.
  double variance() const { return count_ ? m2_ / count_ : 0.0; }
  double central3() const { return count_ ? m3_ / count_ : 0.0; }
  double central4() const { return count_ ? m4_ / count_ : 0.0; }
  double sample_variance() const {
    return count_ > 1 ? m2_ / (count_ - 1) : 0.0;
  }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

enum class TraceSource { exact, pool, tree };

std::string_view to_string(TraceSource s);
TraceSource trace_source_from_string(std::string_view s);

struct GenerationRecord {
  int n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double m4 = 0.0;
  TraceSource source = TraceSource::exact;
  /// Sample size, or atom count for exact laws.
  std::size_t size = 0;
  double se_mean = 0.0;
  double se_var = 0.0;
};

/// Per-generation moments over a contiguous range of n.
struct GrowthTrace {
  std::string fn_id;
  std::vector<GenerationRecord> records;

  void push(const GenerationRecord& r);
};

struct BatchErrors {
  double se_mean = 0.0;
  double se_var = 0.0;
};

/// Standard errors of mean and variance from non-overlapping batch means.
BatchErrors batch_standard_errors(std::span<const double> values,
                                  std::size_t batches = 20);

GenerationRecord record_from_samples(int n, std::span<const double> values,
                                     TraceSource source,
                                     std::size_t batches = 20);
GenerationRecord record_from_distribution(const DiscreteDistribution& dist);

struct SeriesPoint {
  int n = 0;
  double value = 0.0;
  double se = 0.0;
};

/// (n, Var[X_{n+1}] / Var[X_n]) with delta-method standard errors.
/// Throws std::invalid_argument on fewer than two records or zero variance.
std::vector<SeriesPoint> variance_growth_ratios(const GrowthTrace& trace);

/// Least-squares slope of log Var[X_n] against n, exponentiated.
double log_variance_growth_base(const GrowthTrace& trace);

struct MeanGrowth {
  std::vector<SeriesPoint> points;
  /// Set when the normalized mean moves against the Jensen direction
  /// (up for concave f, down for convex f) by more than 3 s.e.
  bool monotonicity_violated = false;
};

/// (n, E[X_n] / (2+cx+cy)^n).
MeanGrowth mean_growth(const GrowthTrace& trace, double cx, double cy,
                       Curvature curvature = Curvature::neither);

/// (x - mean) / sqrt(variance). Throws std::invalid_argument if variance <= 0.
std::vector<double> standardize(std::span<const double> values, double mean,
                                double variance);
/// Standardizes by the values' own population mean and variance.
std::vector<double> self_standardize(std::span<const double> values);

double normal_cdf(double x);

/// sup |F_empirical - Phi|. Needs at least 100 values.
double normal_ks_distance(std::span<const double> standardized);

/// Standard normals from the counter-based generator (Box-Muller).
std::vector<double> normal_draws(std::uint64_t seed, std::size_t count);

/// (n, E[(X - X')^4] / Var^2) using E[(X - X')^4] = 2 mu4 + 6 sigma^4.
std::vector<SeriesPoint> fourth_ratio_trace(const GrowthTrace& trace);

}  // namespace lcl
