#pragma once

// Reference computations that share no code with the engines under test.

#include "lcl/exact_distribution.hpp"
#include "lcl/growth_function.hpp"

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

struct RationalLaw {
  std::map<Rational, Rational> atoms;

  Rational mean() const {
    Rational m = 0;
    for (const auto& [v, p] : atoms) m += v * p;
    return m;
  }
  Rational variance() const {
    const Rational m = mean();
    Rational s = 0;
    for (const auto& [v, p] : atoms) s += (v - m) * (v - m) * p;
    return s;
  }
};

/// Law of X_1 for f(t, s) = ts / (t + s) over the 16 equally likely leaf
/// quadruples, in exact rational arithmetic.
inline RationalLaw harmonic_x1_law() {
  RationalLaw law;
  for (int mask = 0; mask < 16; ++mask) {
    Rational a[4];
    for (int i = 0; i < 4; ++i) a[i] = Rational(1 + ((mask >> i) & 1));
    const Rational x = a[0] + a[1] + a[2] * a[3] / (a[2] + a[3]);
    law.atoms[x] += Rational(1, 16);
  }
  return law;
}

/// X_n for one leaf assignment, children in natural order:
/// X = X + X' + f(X'', X''').
inline double tree_value(const lcl::GrowthFunction& fn, int depth,
                         const double* leaves) {
  if (depth == 0) return leaves[0];
  const std::size_t block = std::size_t{1} << (2 * (depth - 1));
  const double a = tree_value(fn, depth - 1, leaves);
  const double b = tree_value(fn, depth - 1, leaves + block);
  const double c = tree_value(fn, depth - 1, leaves + 2 * block);
  const double d = tree_value(fn, depth - 1, leaves + 3 * block);
  return a + b + fn(c, d);
}

/// Every one of the 2^(4^n) leaf assignments (n <= 2), merged into a law.
/// Values within `rel_tol` of the generation scale count as one atom.
inline lcl::DiscreteDistribution enumerate_leaf_law(const lcl::GrowthFunction& fn,
                                                    int n, double rel_tol = 1e-12) {
  const std::size_t leaves = std::size_t{1} << (2 * n);
  const std::uint64_t configs = std::uint64_t{1} << leaves;
  std::vector<double> values;
  values.reserve(configs);
  std::vector<double> leaf(leaves);
  for (std::uint64_t mask = 0; mask < configs; ++mask) {
    for (std::size_t i = 0; i < leaves; ++i) leaf[i] = 1.0 + ((mask >> i) & 1u);
    values.push_back(tree_value(fn, n, leaf.data()));
  }
  std::sort(values.begin(), values.end());
  const double tol = rel_tol * std::pow(fn.mean_base(), n);
  const double w = 1.0 / static_cast<double>(configs);
  lcl::DiscreteDistribution law;
  law.n = n;
  law.fn_id = fn.id();
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] - values[i] <= tol) ++j;
    law.support.push_back(values[i]);
    law.probs.push_back(static_cast<double>(j - i) * w);
    i = j;
  }
  return law;
}

/// Kolmogorov distance between the empirical law of `values` and `law`,
/// taken over both one-sided limits at every jump of either CDF.
inline double ks_against_law(std::vector<double> values,
                             const lcl::DiscreteDistribution& law) {
  std::sort(values.begin(), values.end());
  std::vector<double> cdf(law.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < law.size(); ++i) cdf[i] = acc += law.probs[i];
  const double n = static_cast<double>(values.size());
  auto law_cdf = [&](double x, bool inclusive) {
    const auto it = inclusive
        ? std::upper_bound(law.support.begin(), law.support.end(), x)
        : std::lower_bound(law.support.begin(), law.support.end(), x);
    const auto k = it - law.support.begin();
    return k == 0 ? 0.0 : cdf[k - 1];
  };
  auto emp_cdf = [&](double x, bool inclusive) {
    const auto it = inclusive ? std::upper_bound(values.begin(), values.end(), x)
                              : std::lower_bound(values.begin(), values.end(), x);
    return static_cast<double>(it - values.begin()) / n;
  };
  double d = 0.0;
  auto probe = [&](double x) {
    d = std::max(d, std::abs(emp_cdf(x, true) - law_cdf(x, true)));
    d = std::max(d, std::abs(emp_cdf(x, false) - law_cdf(x, false)));
  };
  for (double x : law.support) probe(x);
  for (double x : values) probe(x);
  return d;
}

}  // namespace oracle
