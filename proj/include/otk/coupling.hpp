#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "otk/cost.hpp"
#include "otk/measure.hpp"

namespace otk {

/// Index pair (source atom, target atom) into a plan or cost table.
struct Cell {
  std::size_t i = 0;
  std::size_t j = 0;
  auto operator<=>(const Cell&) const = default;
};

/// Nonnegative m x n mass table over a source and a target point list.
class Coupling {
 public:
  Coupling() = default;
  /// mass is row-major with src.size() rows. Throws Error(InvalidMeasure)
  /// on shape mismatch, negative or non-finite mass, or mixed dimensions.
  Coupling(std::size_t dimension, std::vector<Point> src, std::vector<Point> tgt,
           std::vector<double> mass);

  /// All-zero plan over the given points.
  static Coupling zeros(std::size_t dimension, std::vector<Point> src, std::vector<Point> tgt);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t rows() const noexcept { return src_.size(); }
  std::size_t cols() const noexcept { return tgt_.size(); }
  const std::vector<Point>& src_points() const noexcept { return src_; }
  const std::vector<Point>& tgt_points() const noexcept { return tgt_; }
  const std::vector<double>& mass() const noexcept { return mass_; }
  double at(std::size_t i, std::size_t j) const { return mass_[i * tgt_.size() + j]; }

  double total_mass() const;
  double row_sum(std::size_t i) const;
  double col_sum(std::size_t j) const;

  /// Cells with mass > relative_threshold * total_mass, in row-major order.
  std::vector<Cell> support_cells(double relative_threshold = 1e-12) const;

 private:
  std::size_t dimension_ = 1;
  std::vector<Point> src_;
  std::vector<Point> tgt_;
  std::vector<double> mass_;
};

struct Marginals {
  DiscreteMeasure source;
  DiscreteMeasure target;
};

Marginals marginals(const Coupling& g);

/// Zero every cell outside keep; optionally rescale to total mass 1.
/// Throws Error(EmptyRestriction) when renormalizing a zero-mass result.
Coupling restrict(const Coupling& g, std::span<const Cell> keep, bool renormalize);

/// omega_ij = f_i * gamma_ij. Throws Error(InvalidWeight) for negative or
/// non-finite f, or a length that does not match the rows.
Coupling reweight_source(const Coupling& g, std::span<const double> f);

/// Cell-wise sum of two plans over identical point lists.
Coupling add(const Coupling& a, const Coupling& b);

/// Re-index g over larger point lists that contain all of g's points.
Coupling embed(const Coupling& g, const std::vector<Point>& src_domain,
               const std::vector<Point>& tgt_domain);

struct CcmOptions {
  /// A cycle violates monotonicity only when its gap exceeds
  /// tol * (1 + cycle cost).
  double tol = 1e-9;
  /// Largest support the complete certificate accepts.
  std::size_t certificate_cap = 24;
  /// Cells below this fraction of the total mass are not support.
  double support_threshold = 1e-12;
};

/// A cyclic reassignment that lowers the cost: source of cells[t] takes the
/// target of cells[t+1] (indices mod k), which gives the reassigned cells.
struct CcmWitness {
  std::vector<Cell> cells;
  std::vector<Cell> reassigned;
  /// current cost - reassigned cost, > 0.
  double gap = 0.0;
  /// current cost of the cells on the cycle.
  double cycle_cost = 0.0;
};

struct CcmReport {
  bool is_ccm = true;
  std::size_t max_len_checked = 0;
  std::size_t support_size = 0;
  /// True when every cycle length up to the support size was checked.
  bool complete = false;
  std::optional<CcmWitness> witness;
};

/// min(support size, 6).
std::size_t default_max_len(std::size_t support_size);

/// Cyclic monotonicity of a finite set of cells under table, checking every
/// cycle of at most max_len distinct cells.
CcmReport is_ccm(std::span<const Cell> cells, const CostTable& table, std::size_t max_len,
                 const CcmOptions& options = {});

/// Complete check over the support of g. Throws Error(CertificateOverflow)
/// when the support exceeds options.certificate_cap.
CcmReport verify_optimal(const Coupling& g, const CostTable& table,
                         const CcmOptions& options = {});

/// Check the union of both supports. Both plans must share point lists with
/// table. max_len defaults to the full union (complete check).
CcmReport ccm_compatible(const Coupling& g1, const Coupling& g2, const CostTable& table,
                         std::optional<std::size_t> max_len = std::nullopt,
                         const CcmOptions& options = {});

/// As above for plans over different point lists: both are embedded in the
/// union of their points and the cost is evaluated there. Witness cells
/// index the union lists returned in the out-parameters when provided.
CcmReport ccm_compatible(const Coupling& g1, const Coupling& g2, const CostSpec& spec,
                         std::optional<std::size_t> max_len = std::nullopt,
                         const CcmOptions& options = {},
                         std::vector<Point>* union_src = nullptr,
                         std::vector<Point>* union_tgt = nullptr);

}  // namespace otk
