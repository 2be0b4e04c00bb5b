#pragma once

#include "lcl/growth_function.hpp"
#include "lcl/report.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lcl {

enum class SampleMethod { tree, pool };

std::string_view to_string(SampleMethod m);

struct PoolLineage {
  SampleMethod method = SampleMethod::pool;
  std::size_t pool_size = 0;
  /// Key used for each generation's draws, index g -> generation g.
  /// Generation 0 holds the key of the initial X_0 pool (0 when stratified).
  std::vector<std::uint64_t> generation_keys;
};

/// A set of X_n realizations. Values from the pool method are identically
/// distributed but not independent.
struct SamplePool {
  int n = 0;
  std::vector<double> values;
  std::string fn_id;
  std::uint64_t master_seed = 0;
  PoolLineage lineage;

  std::size_t size() const { return values.size(); }
};

constexpr int default_max_tree_depth = 12;

/// `count` i.i.d. draws, uniform on {1, 2}.
std::vector<double> sample_x0(std::uint64_t seed, std::size_t count);

/// a + b + f(c, d).
inline double combine(const GrowthFunction& fn, double a, double b, double c,
                      double d) {
  return a + b + fn(c, d);
}

/// Leaf value 1 or 2 for leaf `index` of a depth-n tree; shared with the
/// resistor-network builder so both engines see the same assignment.
double leaf_value(std::uint64_t seed, std::uint64_t index);

/// One exact draw of X_n from the full 4-ary tree over 4^n i.i.d. X_0
/// leaves. Children are ordered like the network blocks (left, circle top,
/// circle bottom, right), so a node is left + right + f(top, bottom).
/// Throws CapExceededError when n > max_depth.
double sample_tree(const GrowthFunction& fn, int n, std::uint64_t seed,
                   int max_depth = default_max_tree_depth);

/// `count` draws, draw i using seed splitmix64(seed ^ i).
std::vector<double> sample_tree_batch(const GrowthFunction& fn, int n,
                                      std::uint64_t seed, std::size_t count,
                                      int max_depth = default_max_tree_depth,
                                      unsigned workers = 1);

/// Seed of the i-th draw in sample_tree_batch.
std::uint64_t tree_draw_seed(std::uint64_t seed, std::size_t i);

/// Pool of size M with exactly the X_0 law: alternating 1, 2 (M even).
SamplePool exact_x0_pool(std::size_t pool_size, const std::string& fn_id);

/// Pool of size M with i.i.d. X_0 draws.
SamplePool sampled_x0_pool(std::size_t pool_size, std::uint64_t seed,
                           const std::string& fn_id);

/// Pool of generation n+1: output j draws four indices uniformly with
/// replacement from `pool` and combines them. Draws are keyed by
/// (generation_key(seed, n+1), j, draw), so the result does not depend on
/// `workers`.
SamplePool evolve_pool(const GrowthFunction& fn, const SamplePool& pool,
                       std::size_t out_size, std::uint64_t seed,
                       unsigned workers = 1);

/// Evolves `pool` forward until generation `target_n`, keeping size.
SamplePool evolve_pool_to(const GrowthFunction& fn, SamplePool pool,
                          int target_n, std::uint64_t seed,
                          unsigned workers = 1);

/// Pass iff every value lies in [(2+cx+cy)^n, 2(2+cx+cy)^n] * (1 -/+ 1e-9).
VerificationReport range_check(const SamplePool& pool, double cx, double cy);

}  // namespace lcl
