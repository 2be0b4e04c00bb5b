#pragma once

#include "lcl/report.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lcl {

struct Edge {
  int u = 0;
  int v = 0;
  double resistance = 1.0;
};

/// Two-terminal multigraph with positive edge resistances.
struct ResistorNetwork {
  int node_count = 0;
  std::vector<Edge> edges;
  int source = 0;
  int sink = 1;
  /// Line-circle-line depth, or -1 for a general edge list.
  int depth = -1;
};

/// 4^n.
std::size_t lcl_edge_count(int n);
/// 2 for n = 0, (2 * 4^n + 4) / 3 otherwise.
std::size_t lcl_node_count(int n);

/// Resistances for the 4^n edges of G_n in block order, each 1 or 2; the
/// same assignment sample_tree uses for its leaves under `seed`.
std::vector<double> lcl_resistances(int n, std::uint64_t seed);

/// G_n as three blocks in series: a G_{n-1}, two G_{n-1} in parallel, a
/// G_{n-1}. Resistances are consumed depth-first in block order: left line,
/// circle top, circle bottom, right line. Terminals are nodes 0 and 1;
/// G_0 is one edge. Throws std::invalid_argument if the list is not 4^n long.
ResistorNetwork build_lcl(int n, std::span<const double> resistances);
ResistorNetwork build_lcl(int n, std::uint64_t seed);

/// R(G_n) by R = R_left + R_right + R_top R_bottom / (R_top + R_bottom),
/// over the same ordering as build_lcl.
double series_parallel_resistance(int n, std::span<const double> resistances);
double series_parallel_resistance(int n, std::uint64_t seed);

struct LaplacianOptions {
  std::size_t node_cap = 10'000;
  /// Dense Cholesky up to this many unknowns, preconditioned CG above.
  std::size_t dense_limit = 2'000;
  double residual_tolerance = 1e-12;
};

/// Effective resistance from node potentials: unit current in at source,
/// out at sink, sink grounded. Throws SolverError when the terminals are
/// disconnected or |L x - b| exceeds tolerance * (|L|_1 |x| + |b|), and
/// CapExceededError above node_cap.
double laplacian_resistance(const ResistorNetwork& net,
                            const LaplacianOptions& options = {});

/// For every seed: |series-parallel - laplacian| / laplacian <= 1e-9.
VerificationReport equivalence_check(int n, std::span<const std::uint64_t> seeds,
                                     const LaplacianOptions& options = {});

/// Every one of the 16 {1,2}-assignments of G_1 through both engines.
VerificationReport exhaustive_equivalence_g1();

}  // namespace lcl
