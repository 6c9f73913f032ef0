#pragma once

#include <cstddef>
#include <vector>

#include "otk/cost.hpp"
#include "otk/coupling.hpp"
#include "otk/measure.hpp"

namespace otk {

/// Discrete Markov kernel from the source atoms of a base measure to a list
/// of target atoms. Row i is the probability vector K(x_i, .). The kernel is
/// defined only on measures supported inside the base measure's atoms.
class TransportKernel {
 public:
  TransportKernel() = default;
  /// Throws Error(InvalidMeasure) unless every row is a probability vector
  /// (entries >= 0, sum within 1e-12 of 1) and the base weights are positive
  /// and match the rows.
  TransportKernel(std::size_t dimension, std::vector<Point> src, std::vector<Point> tgt,
                  std::vector<double> rows, std::vector<double> base_weights);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t rows() const noexcept { return src_.size(); }
  std::size_t cols() const noexcept { return tgt_.size(); }
  const std::vector<Point>& src_points() const noexcept { return src_; }
  const std::vector<Point>& tgt_points() const noexcept { return tgt_; }
  const std::vector<double>& entries() const noexcept { return rows_; }
  double at(std::size_t i, std::size_t j) const { return rows_[i * tgt_.size() + j]; }
  const std::vector<double>& base_weights() const noexcept { return base_weights_; }

  DiscreteMeasure base_marginal() const;

  /// max_i |sum_j K_ij - 1|
  double max_row_defect() const;

 private:
  std::size_t dimension_ = 1;
  std::vector<Point> src_;
  std::vector<Point> tgt_;
  std::vector<double> rows_;
  std::vector<double> base_weights_;
};

/// Row-normalize g by its own row sums. Source atoms with zero row mass are
/// left out of the kernel's domain.
TransportKernel kernel_from_coupling(const Coupling& g);

/// eta K as a measure on the kernel's target points (zero atoms kept).
/// Throws Error(NotAbsolutelyContinuous) when eta has mass off the domain.
DiscreteMeasure apply(const TransportKernel& k, const DiscreteMeasure& eta);

/// eta (.) K: mass_ij = eta(x_i) K_ij over the kernel's points.
Coupling product_measure(const TransportKernel& k, const DiscreteMeasure& eta);

/// aK = a+K - a-K, canonical. Opposite-sign mass landing on one atom
/// cancels; residues below 1e-14 of the input mass count as cancelled.
SignedDiscreteMeasure apply_signed(const TransportKernel& k, const SignedDiscreteMeasure& a);

struct CxBoundReport {
  bool bounded = false;
  /// A c_X(x_i) + B - sum_j K_ij c_Y(y_j), per source atom.
  std::vector<double> margins;
};

/// Per-row check of sum_j K_ij c_Y(y_j) against A c_X(x_i) + B; a row passes
/// when its margin is >= 0. Throws Error(UnsupportedCost) for an invalid bound.
CxBoundReport is_cx_bounded(const TransportKernel& k, const SeparableBound& bound, double A,
                            double B);

/// verify_optimal(product_measure(k, base), table). The table must be laid
/// out over the kernel's own source and target points.
CcmReport is_optimal_kernel(const TransportKernel& k, const CostTable& table,
                            const CcmOptions& options = {});
CcmReport is_optimal_kernel(const TransportKernel& k, const CostSpec& spec,
                            const CcmOptions& options = {});

}  // namespace otk
