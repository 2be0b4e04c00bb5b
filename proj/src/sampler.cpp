#include "lcl/sampler.hpp"

#include "lcl/errors.hpp"
#include "lcl/parallel.hpp"
#include "lcl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lcl {

namespace {

constexpr std::uint64_t leaf_word(std::uint64_t seed, std::uint64_t word) {
  return counter_bits(seed, static_cast<std::uint64_t>(Stream::leaves), word, 0);
}

double bit_value(std::uint64_t word, unsigned bit) {
  return 1.0 + static_cast<double>((word >> bit) & 1u);
}

// Subtrees of depth <= 3 cover at most 64 leaves, all inside one word.
double small_tree(const GrowthFunction& fn, int depth, std::uint64_t word,
                  unsigned bit) {
  if (depth == 0) return bit_value(word, bit);
  const unsigned stride = 1u << (2 * (depth - 1));
  const double left = small_tree(fn, depth - 1, word, bit);
  const double top = small_tree(fn, depth - 1, word, bit + stride);
  const double bottom = small_tree(fn, depth - 1, word, bit + 2 * stride);
  const double right = small_tree(fn, depth - 1, word, bit + 3 * stride);
  return combine(fn, left, right, top, bottom);
}

double tree_node(const GrowthFunction& fn, int depth, std::uint64_t seed,
                 std::uint64_t first_leaf) {
  if (depth <= 3) {
    return small_tree(fn, depth, leaf_word(seed, first_leaf >> 6),
                      static_cast<unsigned>(first_leaf & 63u));
  }
  const std::uint64_t stride = std::uint64_t{1} << (2 * (depth - 1));
  const double left = tree_node(fn, depth - 1, seed, first_leaf);
  const double top = tree_node(fn, depth - 1, seed, first_leaf + stride);
  const double bottom = tree_node(fn, depth - 1, seed, first_leaf + 2 * stride);
  const double right = tree_node(fn, depth - 1, seed, first_leaf + 3 * stride);
  return combine(fn, left, right, top, bottom);
}

}  // namespace

std::string_view to_string(SampleMethod m) {
  return m == SampleMethod::tree ? "tree" : "pool";
}

std::vector<double> sample_x0(std::uint64_t seed, std::size_t count) {
  const CounterRng rng(seed, Stream::x0);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = bit_value(rng.bits(i >> 6), static_cast<unsigned>(i & 63u));
  return out;
}

double leaf_value(std::uint64_t seed, std::uint64_t index) {
  return bit_value(leaf_word(seed, index >> 6),
                   static_cast<unsigned>(index & 63u));
}

double sample_tree(const GrowthFunction& fn, int n, std::uint64_t seed,
                   int max_depth) {
  if (n < 0) throw std::invalid_argument("generation must be >= 0");
  if (n > max_depth)
    throw CapExceededError("tree sampling at n = " + std::to_string(n) +
                           " exceeds the depth limit " +
                           std::to_string(max_depth) + " (4^n leaves)");
  return tree_node(fn, n, seed, 0);
}

std::uint64_t tree_draw_seed(std::uint64_t seed, std::size_t i) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i) + 1));
}

std::vector<double> sample_tree_batch(const GrowthFunction& fn, int n,
                                      std::uint64_t seed, std::size_t count,
                                      int max_depth, unsigned workers) {
  if (n > max_depth)
    throw CapExceededError("tree sampling at n = " + std::to_string(n) +
                           " exceeds the depth limit " +
                           std::to_string(max_depth));
  std::vector<double> out(count);
  parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      out[i] = sample_tree(fn, n, tree_draw_seed(seed, i), max_depth);
  });
  return out;
}

SamplePool exact_x0_pool(std::size_t pool_size, const std::string& fn_id) {
  if (pool_size < 4) throw std::invalid_argument("pool size must be >= 4");
  SamplePool pool;
  pool.n = 0;
  pool.fn_id = fn_id;
  pool.values.resize(pool_size);
  for (std::size_t i = 0; i < pool_size; ++i)
    pool.values[i] = (i % 2 == 0) ? 1.0 : 2.0;
  pool.lineage.method = SampleMethod::pool;
  pool.lineage.pool_size = pool_size;
  pool.lineage.generation_keys = {0};
  return pool;
}

SamplePool sampled_x0_pool(std::size_t pool_size, std::uint64_t seed,
                           const std::string& fn_id) {
  if (pool_size < 4) throw std::invalid_argument("pool size must be >= 4");
  SamplePool pool;
  pool.n = 0;
  pool.fn_id = fn_id;
  pool.master_seed = seed;
  pool.values = sample_x0(seed, pool_size);
  pool.lineage.method = SampleMethod::pool;
  pool.lineage.pool_size = pool_size;
  pool.lineage.generation_keys = {seed};
  return pool;
}

SamplePool evolve_pool(const GrowthFunction& fn, const SamplePool& pool,
                       std::size_t out_size, std::uint64_t seed,
                       unsigned workers) {
  if (pool.values.empty()) throw std::invalid_argument("cannot evolve an empty pool");
  if (out_size < 4) throw std::invalid_argument("pool size must be >= 4");

  SamplePool next;
  next.n = pool.n + 1;
  next.fn_id = fn.id();
  next.master_seed = seed;
  next.lineage = pool.lineage;
  next.lineage.method = SampleMethod::pool;
  next.lineage.pool_size = out_size;
  const std::uint64_t key = generation_key(seed, next.n);
  next.lineage.generation_keys.push_back(key);

  const CounterRng rng(key, Stream::pool);
  const std::uint64_t m = pool.values.size();
  const double* in = pool.values.data();
  next.values.resize(out_size);
  double* out = next.values.data();
  parallel_for(out_size, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const double a = in[rng.below(j, 0, m)];
      const double b = in[rng.below(j, 1, m)];
      const double c = in[rng.below(j, 2, m)];
      const double d = in[rng.below(j, 3, m)];
      out[j] = combine(fn, a, b, c, d);
    }
  });
  return next;
}

SamplePool evolve_pool_to(const GrowthFunction& fn, SamplePool pool,
                          int target_n, std::uint64_t seed, unsigned workers) {
  while (pool.n < target_n)
    pool = evolve_pool(fn, pool, pool.values.size(), seed, workers);
  return pool;
}

VerificationReport range_check(const SamplePool& pool, double cx, double cy) {
  constexpr double rel_tol = 1e-9;
  const double lower = std::pow(2.0 + cx + cy, pool.n);
  const double upper = 2.0 * lower;

  VerificationReport report;
  report.check = "range";
  report.fn = pool.fn_id;
  report.params = {{"n", pool.n},
                   {"pool_size", pool.values.size()},
                   {"cx", cx},
                   {"cy", cy},
                   {"relative_tolerance", rel_tol}};
  report.set_threshold("range", Provenance::published);
  report.set_threshold("relative_tolerance", Provenance::tool_default);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t outside = 0;
  for (std::size_t i = 0; i < pool.values.size(); ++i) {
    const double v = pool.values[i];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    if (!(v >= lower * (1.0 - rel_tol) && v <= upper * (1.0 + rel_tol))) {
      if (outside < 8) {
        Counterexample ce;
        ce.inputs = {v};
        ce.seed = pool.master_seed;
        ce.trial = i;
        ce.lhs = v;
        ce.rhs = v < lower ? lower : upper;
        ce.note = v < lower ? "below lower edge" : "above upper edge";
        report.counterexamples.push_back(ce);
      }
      ++outside;
    }
  }
  report.measurements = {{"min", lo},
                         {"max", hi},
                         {"lower", lower},
                         {"upper", upper},
                         {"outside", outside}};
  report.verdict = outside == 0 ? Verdict::pass : Verdict::fail;
  return report;
}

}  // namespace lcl
