#include "lcl/resistance_net.hpp"

#include "lcl/errors.hpp"
#include "lcl/growth_function.hpp"
#include "lcl/sampler.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace lcl {

namespace {

void require_depth(int n) {
  if (n < 0 || n > 30) throw std::invalid_argument("depth must be in 0..30");
}

class LclBuilder {
 public:
  LclBuilder(ResistorNetwork& net, std::span<const double> r) : net_(net), r_(r) {}

  void build(int depth, int a, int b, std::size_t offset) {
    if (depth == 0) {
      net_.edges.push_back({a, b, r_[offset]});
      return;
    }
    const std::size_t stride = std::size_t{1} << (2 * (depth - 1));
    const int m1 = net_.node_count++;
    const int m2 = net_.node_count++;
    build(depth - 1, a, m1, offset);
    build(depth - 1, m1, m2, offset + stride);
    build(depth - 1, m1, m2, offset + 2 * stride);
    build(depth - 1, m2, b, offset + 3 * stride);
  }

 private:
  ResistorNetwork& net_;
  std::span<const double> r_;
};

double series_parallel(int depth, std::span<const double> r, std::size_t offset) {
  if (depth == 0) return r[offset];
  const std::size_t stride = std::size_t{1} << (2 * (depth - 1));
  const double left = series_parallel(depth - 1, r, offset);
  const double top = series_parallel(depth - 1, r, offset + stride);
  const double bottom = series_parallel(depth - 1, r, offset + 2 * stride);
  const double right = series_parallel(depth - 1, r, offset + 3 * stride);
  // Same operation order as combine() with the harmonic kernel.
  return left + right + kernels::harmonic(top, bottom);
}

std::vector<int> reachable_from(const ResistorNetwork& net, int start) {
  std::vector<std::vector<int>> adj(net.node_count);
  for (const auto& e : net.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<int> seen(net.node_count, 0);
  std::queue<int> q;
  q.push(start);
  seen[start] = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        q.push(v);
      }
  }
  return seen;
}

}  // namespace

std::size_t lcl_edge_count(int n) {
  require_depth(n);
  return std::size_t{1} << (2 * n);
}

std::size_t lcl_node_count(int n) {
  require_depth(n);
  if (n == 0) return 2;
  return (2 * lcl_edge_count(n) + 4) / 3;
}

std::vector<double> lcl_resistances(int n, std::uint64_t seed) {
  std::vector<double> r(lcl_edge_count(n));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = leaf_value(seed, i);
  return r;
}

ResistorNetwork build_lcl(int n, std::span<const double> resistances) {
  if (resistances.size() != lcl_edge_count(n))
    throw std::invalid_argument("G_" + std::to_string(n) + " needs " +
                                std::to_string(lcl_edge_count(n)) +
                                " resistances, got " +
                                std::to_string(resistances.size()));
  ResistorNetwork net;
  net.node_count = 2;
  net.depth = n;
  net.edges.reserve(resistances.size());
  LclBuilder(net, resistances).build(n, net.source, net.sink, 0);
  return net;
}

ResistorNetwork build_lcl(int n, std::uint64_t seed) {
  const auto r = lcl_resistances(n, seed);
  return build_lcl(n, r);
}

double series_parallel_resistance(int n, std::span<const double> resistances) {
  if (resistances.size() != lcl_edge_count(n))
    throw std::invalid_argument("wrong number of resistances for G_" +
                                std::to_string(n));
  return series_parallel(n, resistances, 0);
}

double series_parallel_resistance(int n, std::uint64_t seed) {
  const auto r = lcl_resistances(n, seed);
  return series_parallel_resistance(n, r);
}

double laplacian_resistance(const ResistorNetwork& net,
                            const LaplacianOptions& options) {
  if (static_cast<std::size_t>(net.node_count) > options.node_cap)
    throw CapExceededError("network has " + std::to_string(net.node_count) +
                           " nodes, above the cap of " +
                           std::to_string(options.node_cap));
  if (net.source == net.sink)
    throw std::invalid_argument("source and sink must differ");
  for (const auto& e : net.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= net.node_count || e.v >= net.node_count)
      throw std::invalid_argument("edge endpoint out of range");
    if (!(e.resistance > 0.0) || !std::isfinite(e.resistance))
      throw std::invalid_argument("edge resistances must be positive and finite");
  }

  // Only the sink's component matters; anything else would make L singular.
  const auto seen = reachable_from(net, net.sink);
  if (!seen[net.source])
    throw SolverError("source and sink are disconnected");
  std::vector<int> index(net.node_count, -1);
  int unknowns = 0;
  for (int v = 0; v < net.node_count; ++v)
    if (seen[v] && v != net.sink) index[v] = unknowns++;

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
  rhs[index[net.source]] = 1.0;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(4 * net.edges.size());
  for (const auto& e : net.edges) {
    if (e.u == e.v || !seen[e.u]) continue;
    const double g = 1.0 / e.resistance;
    const int iu = index[e.u];
    const int iv = index[e.v];
    if (iu >= 0) triplets.emplace_back(iu, iu, g);
    if (iv >= 0) triplets.emplace_back(iv, iv, g);
    if (iu >= 0 && iv >= 0) {
      triplets.emplace_back(iu, iv, -g);
      triplets.emplace_back(iv, iu, -g);
    }
  }
  Eigen::SparseMatrix<double> lap(unknowns, unknowns);
  lap.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::VectorXd potential;
  if (static_cast<std::size_t>(unknowns) <= options.dense_limit) {
    const Eigen::MatrixXd dense(lap);
    Eigen::LLT<Eigen::MatrixXd> llt(dense);
    if (llt.info() != Eigen::Success)
      throw SolverError("Cholesky factorization failed");
    potential = llt.solve(rhs);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(options.residual_tolerance);
    cg.setMaxIterations(std::max(1000, 10 * unknowns));
    cg.compute(lap);
    potential = cg.solve(rhs);
    if (cg.info() != Eigen::Success)
      throw SolverError("conjugate gradient did not converge (error " +
                        std::to_string(cg.error()) + ")");
  }
  // Normwise backward error: |L x - b| against |L| |x| + |b|.
  double lap_norm = 0.0;
  for (int k = 0; k < lap.outerSize(); ++k) {
    double col = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(lap, k); it; ++it)
      col += std::abs(it.value());
    lap_norm = std::max(lap_norm, col);
  }
  const double residual = (lap * potential - rhs).norm();
  const double scale = lap_norm * potential.norm() + rhs.norm();
  if (!(residual <= options.residual_tolerance * scale))
    throw SolverError("Laplacian residual " + std::to_string(residual) +
                      " exceeds tolerance");
  return potential[index[net.source]];
}

VerificationReport equivalence_check(int n, std::span<const std::uint64_t> seeds,
                                     const LaplacianOptions& options) {
  constexpr double rel_tol = 1e-9;
  VerificationReport r;
  r.check = "resistance_equivalence";
  r.fn = "harmonic";
  r.params = {{"n", n},
              {"seeds", seeds.size()},
              {"relative_tolerance", rel_tol},
              {"node_cap", options.node_cap}};
  r.set_threshold("relative_tolerance", Provenance::tool_default);
  double worst = 0.0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto res = lcl_resistances(n, seeds[i]);
    const double sp = series_parallel_resistance(n, res);
    const double lap = laplacian_resistance(build_lcl(n, res), options);
    const double rel = std::abs(sp - lap) / lap;
    worst = std::max(worst, rel);
    if (rel > rel_tol) {
      Counterexample ce;
      ce.inputs = {static_cast<double>(n)};
      ce.seed = seeds[i];
      ce.trial = i;
      ce.lhs = sp;
      ce.rhs = lap;
      ce.note = "series-parallel vs Laplacian";
      r.counterexamples.push_back(ce);
    }
  }
  r.measurements = {{"max_relative_difference", worst},
                    {"nodes", lcl_node_count(n)},
                    {"edges", lcl_edge_count(n)}};
  r.verdict = r.counterexamples.empty() ? Verdict::pass : Verdict::fail;
  return r;
}

VerificationReport exhaustive_equivalence_g1() {
  constexpr double rel_tol = 1e-9;
  VerificationReport r;
  r.check = "resistance_equivalence";
  r.fn = "harmonic";
  r.params = {{"n", 1}, {"assignments", 16}, {"relative_tolerance", rel_tol}};
  r.set_threshold("relative_tolerance", Provenance::tool_default);
  double worst = 0.0;
  for (unsigned mask = 0; mask < 16; ++mask) {
    std::vector<double> res(4);
    for (unsigned k = 0; k < 4; ++k) res[k] = 1.0 + ((mask >> k) & 1u);
    const double sp = series_parallel_resistance(1, res);
    const double lap = laplacian_resistance(build_lcl(1, res));
    const double rel = std::abs(sp - lap) / lap;
    worst = std::max(worst, rel);
    if (rel > rel_tol) {
      Counterexample ce;
      ce.inputs = {1.0};
      ce.inputs.insert(ce.inputs.end(), res.begin(), res.end());
      ce.trial = mask;
      ce.lhs = sp;
      ce.rhs = lap;
      ce.note = "series-parallel vs Laplacian";
      r.counterexamples.push_back(ce);
    }
  }
  r.measurements = {{"max_relative_difference", worst}};
  r.verdict = r.counterexamples.empty() ? Verdict::pass : Verdict::fail;
  return r;
}

}  // namespace lcl
