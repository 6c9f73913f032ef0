#pragma once

#include <span>
#include <utility>
#include <vector>

#include "otk/coupling.hpp"
#include "otk/measure.hpp"

namespace otk {

/// Right-continuous step CDF of a measure on the line.
struct StepCdf {
  /// Sorted distinct atom positions.
  std::vector<double> positions;
  /// F(positions[k]), nondecreasing and ending at total_mass.
  std::vector<double> cumulative;
  double total_mass = 0.0;

  /// F(x) = mass of (-inf, x].
  double operator()(double x) const;
};

/// Throws Error(DimensionError) unless mu lives on the line.
StepCdf cdf(const DiscreteMeasure& mu);

/// G(t) = inf{x : F(x) >= t} for t in (0, total_mass]. Throws
/// Error(QuantileRange) outside that interval.
double quantile(const StepCdf& F, double t);

/// Monotone (quantile) coupling, built by merging the sorted atoms of both
/// measures and splitting mass where the CDFs step. Rows and columns follow
/// the input atom order. Masses must agree to 1e-9 relative.
Coupling monotone_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// One cut (c, d) between diagonal blocks; +inf is allowed for the last cut.
using BlockCut = std::pair<double, double>;

/// True iff every positive cell of g lies in a diagonal block
/// (c_{k-1}, c_k] x (d_{k-1}, d_k]. Cuts must be nondecreasing with
/// F_mu(c_k) = F_nu(d_k) != 0 (to 1e-9 relative), where mu and nu are the
/// marginals of g; otherwise Error(InvalidCut).
bool check_block_structure(const Coupling& g, std::span<const BlockCut> cuts);

}  // namespace otk
