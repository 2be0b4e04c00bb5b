#include "lcl/exact_distribution.hpp"

#include "lcl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace lcl {

namespace {

/// Neumaier's compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

using Atom = std::pair<double, double>;  // value, probability

/// Sorts atoms and merges values within `abs_tol` of a run's first value.
DiscreteDistribution merge_atoms(std::vector<Atom> atoms, double abs_tol) {
  std::sort(atoms.begin(), atoms.end());
  DiscreteDistribution out;
  out.support.reserve(atoms.size());
  out.probs.reserve(atoms.size());
  std::size_t i = 0;
  while (i < atoms.size()) {
    const double first = atoms[i].first;
    CompensatedSum mass;
    CompensatedSum moment;
    std::size_t j = i;
    for (; j < atoms.size() && atoms[j].first - first <= abs_tol; ++j) {
      mass.add(atoms[j].second);
      moment.add(atoms[j].second * atoms[j].first);
    }
    const double p = mass.value();
    if (p > 0.0) {
      // A single-member run keeps its value bit-for-bit.
      const double v = (j - i == 1) ? first : moment.value() / p;
      out.support.push_back(v);
      out.probs.push_back(p);
    }
    i = j;
  }
  return out;
}

/// Fixed-width bins over [lo, hi], each represented by its
/// probability-weighted mean. Accumulation order is the caller's loop order.
class Binner {
 public:
  Binner(double lo, double hi, double width)
      : width_(width), first_(std::floor(lo / width)) {
    const double count = std::floor(hi / width) - first_ + 1.0;
    if (!(count >= 1.0) || count > 5e8)
      throw CapExceededError("quantization grid of " + std::to_string(count) +
                             " bins is too large; increase delta0");
    mass_.assign(static_cast<std::size_t>(count), 0.0);
    moment_.assign(mass_.size(), 0.0);
  }

  void add(double v, double p) {
    double k = std::floor(v / width_) - first_;
    k = std::clamp(k, 0.0, static_cast<double>(mass_.size() - 1));
    const auto idx = static_cast<std::size_t>(k);
    mass_[idx] += p;
    moment_[idx] += p * v;
  }

  DiscreteDistribution finish() const {
    DiscreteDistribution out;
    for (std::size_t k = 0; k < mass_.size(); ++k) {
      if (mass_[k] > 0.0) {
        const double v = moment_[k] / mass_[k];
        if (!out.support.empty() && v <= out.support.back()) {
          // Rounding pushed a representative across its neighbour.
          const double p = out.probs.back() + mass_[k];
          out.support.back() =
              (out.support.back() * out.probs.back() + v * mass_[k]) / p;
          out.probs.back() = p;
          continue;
        }
        out.support.push_back(v);
        out.probs.push_back(mass_[k]);
      }
    }
    return out;
  }

 private:
  double width_;
  double first_;
  std::vector<double> mass_;
  std::vector<double> moment_;
};

/// Law of A + B for A, B i.i.d. ~ dist, as unmerged atoms.
template <typename Sink>
void for_each_pair_sum(const DiscreteDistribution& d, Sink&& sink) {
  const std::size_t k = d.size();
  for (std::size_t i = 0; i < k; ++i) {
    sink(d.support[i] + d.support[i], d.probs[i] * d.probs[i]);
    for (std::size_t j = i + 1; j < k; ++j)
      sink(d.support[i] + d.support[j], 2.0 * d.probs[i] * d.probs[j]);
  }
}

/// Law of f(C, D) for C, D i.i.d. ~ dist, as unmerged atoms.
template <typename Sink>
void for_each_pair_image(const GrowthFunction& fn,
                         const DiscreteDistribution& d, Sink&& sink) {
  const std::size_t k = d.size();
  if (fn.symmetric()) {
    for (std::size_t i = 0; i < k; ++i) {
      sink(fn(d.support[i], d.support[i]), d.probs[i] * d.probs[i]);
      for (std::size_t j = i + 1; j < k; ++j)
        sink(fn(d.support[i], d.support[j]), 2.0 * d.probs[i] * d.probs[j]);
    }
  } else {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        sink(fn(d.support[i], d.support[j]), d.probs[i] * d.probs[j]);
  }
}

DiscreteDistribution collect_exact(auto&& producer, double abs_tol) {
  std::vector<Atom> atoms;
  producer([&](double v, double p) { atoms.emplace_back(v, p); });
  return merge_atoms(std::move(atoms), abs_tol);
}

DiscreteDistribution collect_binned(auto&& producer, double lo, double hi,
                                    double delta) {
  Binner bins(lo, hi, delta);
  producer([&](double v, double p) { bins.add(v, p); });
  return bins.finish();
}

std::string format_policy(double delta0) {
  std::ostringstream out;
  out << "relative:" << delta0;
  return out.str();
}

}  // namespace

double DiscreteDistribution::mean() const { return moments(*this, 1).mean(); }

double DiscreteDistribution::variance() const {
  return moments(*this, 2).variance();
}

void DiscreteDistribution::validate() const {
  if (support.empty() || support.size() != probs.size())
    throw std::invalid_argument("distribution needs matching, nonempty support and probs");
  CompensatedSum total;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (!(probs[i] > 0.0))
      throw std::invalid_argument("distribution has a nonpositive probability");
    if (i > 0 && !(support[i] > support[i - 1]))
      throw std::invalid_argument("distribution support is not strictly increasing");
    total.add(probs[i]);
  }
  if (std::abs(total.value() - 1.0) > 1e-12)
    throw std::invalid_argument("distribution probabilities sum to " +
                                std::to_string(total.value()));
  if (!(quant_error_bound >= 0.0))
    throw std::invalid_argument("negative quantization bound");
}

DiscreteDistribution x0_distribution() {
  DiscreteDistribution d;
  d.support = {1.0, 2.0};
  d.probs = {0.5, 0.5};
  return d;
}

DiscreteDistribution degenerate_distribution(double v, int n) {
  DiscreteDistribution d;
  d.support = {v};
  d.probs = {1.0};
  d.n = n;
  return d;
}

DiscreteDistribution pushforward_law(const GrowthFunction& fn,
                                     const DiscreteDistribution& dist,
                                     const ExactOptions& options) {
  const double scale = std::pow(fn.mean_base(), dist.n + 1);
  auto law = collect_exact(
      [&](auto&& sink) { for_each_pair_image(fn, dist, sink); },
      options.merge_tolerance * scale);
  law.n = dist.n;
  law.fn_id = fn.id();
  law.exact = dist.exact;
  return law;
}

DiscreteDistribution exact_next(const GrowthFunction& fn,
                                const DiscreteDistribution& dist, double delta,
                                const ExactOptions& options) {
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
  dist.validate();
  const int next_n = dist.n + 1;
  const double scale = std::pow(fn.mean_base(), next_n);
  const double tol = options.merge_tolerance * scale;
  auto pair_sums = [&](auto&& sink) { for_each_pair_sum(dist, sink); };
  auto images = [&](auto&& sink) { for_each_pair_image(fn, dist, sink); };

  DiscreteDistribution sums;
  DiscreteDistribution fvals;
  if (delta == 0.0) {
    sums = collect_exact(pair_sums, tol);
    fvals = collect_exact(images, tol);
    const double candidates =
        static_cast<double>(sums.size()) * static_cast<double>(fvals.size());
    if (candidates > static_cast<double>(options.atom_cap)) {
      std::ostringstream msg;
      msg << "exact law of X_" << next_n << " would need up to " << candidates
          << " atoms (" << sums.size() << " sums x " << fvals.size()
          << " images), above the cap of " << options.atom_cap
          << "; use a quantization width (delta0 > 0)";
      throw CapExceededError(msg.str());
    }
  } else {
    const double lo = dist.support.front();
    const double hi = dist.support.back();
    sums = collect_binned(pair_sums, 2.0 * lo, 2.0 * hi, delta);
    fvals = collect_binned(images, fn(lo, lo), fn(hi, hi), delta);
  }

  auto convolve = [&](auto&& sink) {
    for (std::size_t i = 0; i < sums.size(); ++i)
      for (std::size_t j = 0; j < fvals.size(); ++j)
        sink(sums.support[i] + fvals.support[j], sums.probs[i] * fvals.probs[j]);
  };

  DiscreteDistribution out;
  if (delta == 0.0) {
    out = collect_exact(convolve, tol);
  } else {
    out = collect_binned(convolve, sums.support.front() + fvals.support.front(),
                         sums.support.back() + fvals.support.back(), delta);
  }
  out.n = next_n;
  out.fn_id = fn.id();
  out.exact = dist.exact && delta == 0.0;
  out.delta_policy = delta == 0.0 ? dist.delta_policy : "absolute";
  // Inputs move by <= old bound; A + B and f(C, D) (diagonal slope
  // cx + cy as Lipschitz surrogate) then move by (2 + cx + cy) old, and each
  // of the three binnings adds < delta.
  out.quant_error_bound =
      fn.mean_base() * dist.quant_error_bound + (delta > 0.0 ? 3.0 * delta : 0.0);
  return out;
}

std::vector<DiscreteDistribution> exact_sequence(const GrowthFunction& fn,
                                                 int n_max,
                                                 const DeltaPolicy& policy,
                                                 const ExactOptions& options) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  std::vector<DiscreteDistribution> laws;
  laws.push_back(x0_distribution());
  laws.back().fn_id = fn.id();
  for (int k = 1; k <= n_max; ++k) {
    const double delta =
        k <= policy.exact_through ? 0.0
                                  : policy.delta0 * std::pow(fn.mean_base(), k);
    laws.push_back(exact_next(fn, laws.back(), delta, options));
    if (delta > 0.0) laws.back().delta_policy = format_policy(policy.delta0);
  }
  return laws;
}

Moments moments(const DiscreteDistribution& dist, int order) {
  if (order < 1 || order > 4)
    throw std::invalid_argument("moment order must be in 1..4");
  Moments m;
  m.raw.assign(order, 0.0);
  std::vector<CompensatedSum> raw(order);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double power = dist.probs[i];
    for (int k = 0; k < order; ++k) {
      power *= dist.support[i];
      raw[k].add(power);
    }
  }
  for (int k = 0; k < order; ++k) m.raw[k] = raw[k].value();
  if (order >= 2) {
    const double mu = m.raw[0];
    std::vector<CompensatedSum> central(order - 1);
    for (std::size_t i = 0; i < dist.size(); ++i) {
      const double d = dist.support[i] - mu;
      double power = dist.probs[i] * d;
      for (int k = 0; k < order - 1; ++k) {
        power *= d;
        central[k].add(power);
      }
    }
    m.central.resize(order - 1);
    for (int k = 0; k < order - 1; ++k) m.central[k] = central[k].value();
  }
  return m;
}

double independent_fourth_difference(const DiscreteDistribution& dist) {
  CompensatedSum total;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    for (std::size_t j = i + 1; j < dist.size(); ++j) {
      const double d = dist.support[i] - dist.support[j];
      const double d2 = d * d;
      total.add(2.0 * dist.probs[i] * dist.probs[j] * d2 * d2);
    }
  }
  return total.value();
}

VerificationReport check_variance_identity(const GrowthFunction& fn,
                                           const DiscreteDistribution& current,
                                           const DiscreteDistribution& next) {
  if (!current.exact || !next.exact)
    throw std::invalid_argument("variance identity needs unquantized laws");
  if (next.n != current.n + 1)
    throw std::invalid_argument("variance identity needs consecutive generations");

  constexpr double rel_tol = 1e-10;
  constexpr std::size_t double_sum_limit = 20'000;

  const double lhs = next.variance();
  const double var_n = current.variance();
  const DiscreteDistribution images = pushforward_law(fn, current);
  // E[(F - F')^2] for independent copies F, F' of f(A, B).
  double mixed = 0.0;
  if (images.size() <= double_sum_limit) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < images.size(); ++i)
      for (std::size_t j = i + 1; j < images.size(); ++j) {
        const double d = images.support[i] - images.support[j];
        acc.add(2.0 * images.probs[i] * images.probs[j] * d * d);
      }
    mixed = acc.value();
  } else {
    mixed = 2.0 * images.variance();
  }
  const double rhs = 2.0 * var_n + 0.5 * mixed;
  const double denom = std::max(std::abs(lhs), std::abs(rhs));
  const double rel = denom == 0.0 ? 0.0 : std::abs(lhs - rhs) / denom;

  VerificationReport r;
  r.check = "variance_identity";
  r.fn = fn.id();
  r.params = {{"n", current.n}, {"relative_tolerance", rel_tol}};
  r.measurements = {{"var_next_direct", lhs},
                    {"var_current", var_n},
                    {"mixed_term", mixed},
                    {"rhs", rhs},
                    {"relative_difference", rel},
                    {"image_atoms", images.size()}};
  r.set_threshold("relative_tolerance", Provenance::tool_default);
  r.verdict = rel <= rel_tol ? Verdict::pass : Verdict::fail;
  if (r.failed()) {
    Counterexample ce;
    ce.inputs = {static_cast<double>(current.n)};
    ce.lhs = lhs;
    ce.rhs = rhs;
    ce.note = "Var[X_{n+1}] direct vs 2 Var[X_n] + E[(F - F')^2] / 2";
    r.counterexamples.push_back(ce);
  }
  return r;
}

VerificationReport fourth_moment_diagnostic(
    std::span<const DiscreteDistribution> dists) {
  if (dists.size() < 3)
    throw std::invalid_argument("fourth-moment diagnostic needs >= 3 generations");
  constexpr std::size_t double_sum_limit = 30'000;
  constexpr double slack = 1e-12;

  VerificationReport r;
  r.check = "fourth_moment";
  r.fn = dists.front().fn_id;
  Json ns = Json::array();
  Json ratios = Json::array();
  Json e4s = Json::array();
  Json mu4s = Json::array();
  bool sandwich = true;
  std::vector<double> rs;
  for (const auto& d : dists) {
    const Moments m = moments(d, 4);
    const double var = m.variance();
    const double mu4 = m.central[2];
    const double e4 = d.size() <= double_sum_limit
                          ? independent_fourth_difference(d)
                          : 2.0 * mu4 + 6.0 * var * var;
    const double ratio = var > 0.0 ? e4 / (var * var) : 0.0;
    const bool ok = 2.0 * mu4 <= e4 * (1.0 + slack) + 0.0 &&
                    e4 <= 16.0 * mu4 * (1.0 + slack);
    if (!ok) {
      sandwich = false;
      Counterexample ce;
      ce.inputs = {static_cast<double>(d.n)};
      ce.lhs = e4;
      ce.rhs = 2.0 * mu4;
      ce.note = "sandwich 2 mu4 <= E[(X-X')^4] <= 16 mu4 broken";
      r.counterexamples.push_back(ce);
    }
    ns.push_back(d.n);
    ratios.push_back(ratio);
    e4s.push_back(e4);
    mu4s.push_back(mu4);
    rs.push_back(ratio);
  }
  const double reference = rs[1] > 0.0 ? rs[1] : rs[0];
  const double max_ratio = *std::max_element(rs.begin(), rs.end());
  const bool bounded = reference == 0.0 ? max_ratio == 0.0
                                        : max_ratio <= 10.0 * reference;
  if (!bounded) {
    Counterexample ce;
    ce.lhs = max_ratio;
    ce.rhs = 10.0 * reference;
    ce.note = "E[(X-X')^4]/Var^2 left the 10x band";
    r.counterexamples.push_back(ce);
  }
  r.params = {{"generations", ns}, {"band", 10.0}};
  r.measurements = {{"n", ns},
                    {"ratio", ratios},
                    {"e_diff4", e4s},
                    {"central4", mu4s},
                    {"sandwich_holds", sandwich},
                    {"bounded", bounded}};
  r.set_threshold("sandwich", Provenance::published);
  r.set_threshold("band", Provenance::tool_default);
  r.verdict = sandwich && bounded ? Verdict::pass : Verdict::fail;
  return r;
}

}  // namespace lcl
