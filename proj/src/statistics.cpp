#include "lcl/statistics.hpp"

#include "lcl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lcl {

void MomentAccumulator::add(double x) {
  const double n1 = static_cast<double>(count_);
  ++count_;
  const double n = static_cast<double>(count_);
  const double delta = x - mean_;
  const double delta_n = delta / n;
  const double delta_n2 = delta_n * delta_n;
  const double term1 = delta * delta_n * n1;
  mean_ += delta_n;
  m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ -
         4.0 * delta_n * m3_;
  m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
  m2_ += term1;
}

void MomentAccumulator::add(std::span<const double> xs) {
  for (double x : xs) add(x);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  const double d2 = delta * delta;
  const double d3 = d2 * delta;
  const double d4 = d2 * d2;

  const double m2 = m2_ + other.m2_ + d2 * na * nb / n;
  const double m3 = m3_ + other.m3_ + d3 * na * nb * (na - nb) / (n * n) +
                    3.0 * delta * (na * other.m2_ - nb * m2_) / n;
  const double m4 = m4_ + other.m4_ +
                    d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                    6.0 * d2 * (na * na * other.m2_ + nb * nb * m2_) / (n * n) +
                    4.0 * delta * (na * other.m3_ - nb * m3_) / n;
  mean_ += delta * nb / n;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
  count_ += other.count_;
}

std::string_view to_string(TraceSource s) {
  switch (s) {
    case TraceSource::exact: return "exact";
    case TraceSource::pool: return "pool";
    case TraceSource::tree: return "tree";
  }
  return "exact";
}

TraceSource trace_source_from_string(std::string_view s) {
  if (s == "exact") return TraceSource::exact;
  if (s == "pool") return TraceSource::pool;
  if (s == "tree") return TraceSource::tree;
  throw std::invalid_argument("unknown trace source '" + std::string(s) + "'");
}

void GrowthTrace::push(const GenerationRecord& r) {
  if (!records.empty() && r.n != records.back().n + 1)
    throw std::invalid_argument("trace generations must be contiguous");
  records.push_back(r);
}

BatchErrors batch_standard_errors(std::span<const double> values,
                                  std::size_t batches) {
  if (batches < 2) throw std::invalid_argument("need at least two batches");
  const std::size_t per = values.size() / batches;
  if (per < 2) return {};
  MomentAccumulator means;
  MomentAccumulator vars;
  for (std::size_t b = 0; b < batches; ++b) {
    MomentAccumulator acc;
    acc.add(values.subspan(b * per, per));
    means.add(acc.mean());
    vars.add(acc.variance());
  }
  const double k = static_cast<double>(batches);
  return {std::sqrt(means.sample_variance() / k),
          std::sqrt(vars.sample_variance() / k)};
}

GenerationRecord record_from_samples(int n, std::span<const double> values,
                                     TraceSource source, std::size_t batches) {
  if (values.empty()) throw std::invalid_argument("no samples");
  MomentAccumulator acc;
  acc.add(values);
  GenerationRecord r;
  r.n = n;
  r.mean = acc.mean();
  r.variance = acc.variance();
  r.m4 = acc.central4();
  r.source = source;
  r.size = values.size();
  const BatchErrors se = batch_standard_errors(values, batches);
  r.se_mean = se.se_mean;
  r.se_var = se.se_var;
  return r;
}

GenerationRecord record_from_distribution(const DiscreteDistribution& dist) {
  const Moments m = moments(dist, 4);
  GenerationRecord r;
  r.n = dist.n;
  r.mean = m.mean();
  r.variance = m.variance();
  r.m4 = m.central[2];
  r.source = TraceSource::exact;
  r.size = dist.size();
  return r;
}

std::vector<SeriesPoint> variance_growth_ratios(const GrowthTrace& trace) {
  if (trace.records.size() < 2)
    throw std::invalid_argument("variance growth needs two or more generations");
  std::vector<SeriesPoint> out;
  for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
    const auto& a = trace.records[i];
    const auto& b = trace.records[i + 1];
    if (!(a.variance > 0.0))
      throw std::invalid_argument("zero variance at n = " + std::to_string(a.n));
    const double ratio = b.variance / a.variance;
    const double rel_a = a.se_var / a.variance;
    const double rel_b = b.variance > 0.0 ? b.se_var / b.variance : 0.0;
    out.push_back({a.n, ratio, ratio * std::hypot(rel_a, rel_b)});
  }
  return out;
}

double log_variance_growth_base(const GrowthTrace& trace) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double k = 0;
  for (const auto& r : trace.records) {
    if (!(r.variance > 0.0)) continue;
    const double x = r.n;
    const double y = std::log(r.variance);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    k += 1.0;
  }
  if (k < 2.0) throw std::invalid_argument("need two positive variances");
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return std::exp(slope);
}

MeanGrowth mean_growth(const GrowthTrace& trace, double cx, double cy,
                       Curvature curvature) {
  const double base = 2.0 + cx + cy;
  MeanGrowth out;
  for (const auto& r : trace.records) {
    const double scale = std::pow(base, r.n);
    out.points.push_back({r.n, r.mean / scale, r.se_mean / scale});
  }
  // Jensen: concave f pushes the normalized mean down, convex up.
  const double sign = curvature == Curvature::concave  ? 1.0
                      : curvature == Curvature::convex ? -1.0
                                                       : 0.0;
  if (sign != 0.0) {
    for (std::size_t i = 0; i + 1 < out.points.size(); ++i) {
      const auto& p = out.points[i];
      const auto& q = out.points[i + 1];
      const double slack =
          3.0 * std::hypot(p.se, q.se) + 1e-12 * std::abs(p.value);
      if (sign * (q.value - p.value) > slack) out.monotonicity_violated = true;
    }
  }
  return out;
}

std::vector<double> standardize(std::span<const double> values, double mean,
                                double variance) {
  if (!(variance > 0.0))
    throw std::invalid_argument("cannot standardize with variance <= 0");
  const double sd = std::sqrt(variance);
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = (values[i] - mean) / sd;
  return out;
}

std::vector<double> self_standardize(std::span<const double> values) {
  MomentAccumulator acc;
  acc.add(values);
  return standardize(values, acc.mean(), acc.variance());
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_ks_distance(std::span<const double> standardized) {
  if (standardized.size() < 100)
    throw std::invalid_argument("KS distance needs at least 100 values");
  std::vector<double> xs(standardized.begin(), standardized.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double phi = normal_cdf(xs[i]);
    d = std::max({d, (i + 1) / n - phi, phi - i / n});
  }
  return d;
}

std::vector<double> normal_draws(std::uint64_t seed, std::size_t count) {
  const CounterRng rng(seed, Stream::normal);
  std::vector<double> out(count);
  for (std::size_t k = 0; 2 * k < count; ++k) {
    const double u1 = 1.0 - rng.uniform(k, 0);  // (0, 1]
    const double u2 = rng.uniform(k, 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    out[2 * k] = r * std::cos(theta);
    if (2 * k + 1 < count) out[2 * k + 1] = r * std::sin(theta);
  }
  return out;
}

std::vector<SeriesPoint> fourth_ratio_trace(const GrowthTrace& trace) {
  std::vector<SeriesPoint> out;
  for (const auto& r : trace.records) {
    const double v2 = r.variance * r.variance;
    out.push_back({r.n, v2 > 0.0 ? (2.0 * r.m4 + 6.0 * v2) / v2 : 0.0, 0.0});
  }
  return out;
}

}  // namespace lcl
