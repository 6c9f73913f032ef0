#pragma once

#include <cstddef>

#include "otk/cost.hpp"
#include "otk/coupling.hpp"
#include "otk/measure.hpp"

namespace otk {

struct SolverOptions {
  /// Relative mass difference tolerated (and rebalanced) between mu and nu.
  double balance_tol = 1e-9;
  /// Degenerate pivots allowed under Dantzig pricing before switching to
  /// Bland's rule; scaled by m + n.
  std::size_t degenerate_pivots_per_node = 8;
};

struct SolveStats {
  std::size_t pivots = 0;
  std::size_t degenerate_pivots = 0;
  bool used_bland = false;
};

/// Scale mu and nu to their common mean mass. Throws Error(EmptyMeasure)
/// when either is empty or massless and Error(MassImbalance) when the
/// masses differ by more than tol relative.
std::pair<DiscreteMeasure, DiscreteMeasure> rebalance(const DiscreteMeasure& mu,
                                                      const DiscreteMeasure& nu,
                                                      double tol = 1e-9);

/// Exact discrete Kantorovich problem by the transportation network
/// simplex. Rows follow mu's atoms and columns nu's atoms, zero-weight atoms
/// included. The returned plan is a basic solution: at most m + n - 1
/// positive cells.
Coupling solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostTable& table,
               const SolverOptions& options = {}, SolveStats* stats = nullptr);

/// Convenience overload evaluating spec on the atoms.
Coupling solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostSpec& spec,
               const SolverOptions& options = {}, SolveStats* stats = nullptr);

/// Brute-force optimal cost for small instances, independent of solve():
/// equal uniform marginals with m = n <= 6 enumerate permutation plans;
/// otherwise m + n <= 10 enumerates every spanning-tree basis of the
/// transportation polytope. Throws Error(OracleOverflow) beyond that.
double oracle_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostTable& table);

}  // namespace otk
