#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "otk/measure.hpp"

namespace otk {

class Coupling;

/// Dense m x n table of nonnegative finite costs, row-major.
class CostTable {
 public:
  CostTable() = default;
  /// Throws Error(InvalidCost) if entries.size() != rows*cols or any entry
  /// is negative or non-finite.
  CostTable(std::size_t rows, std::size_t cols, std::vector<double> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  const std::vector<double>& entries() const noexcept { return entries_; }
  double max_entry() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

/// Convex h for costs of the form c(x, y) = h(y - x) on the real line.
enum class ConvexProfile {
  Abs,        // |t|
  Square,     // t^2
  Quartic,    // t^4
  CoshMinusOne,  // cosh(t) - 1
};

std::string_view to_string(ConvexProfile h);
/// Throws Error(InvalidCost) for unknown names.
ConvexProfile parse_convex_profile(std::string_view name);
double evaluate(ConvexProfile h, double t);

struct SquaredEuclidean {};
struct PowerDistance {
  double p = 1.0;
};
struct Convex1d {
  ConvexProfile h = ConvexProfile::Square;
};
struct ExplicitTable {
  CostTable table;
};

class CostSpec {
 public:
  using Kind = std::variant<SquaredEuclidean, PowerDistance, Convex1d, ExplicitTable>;

  CostSpec() = default;

  static CostSpec squared_euclidean();
  /// Throws Error(InvalidCost) unless p >= 1 and finite.
  static CostSpec power_distance(double p);
  static CostSpec convex_1d(ConvexProfile h);
  static CostSpec explicit_table(CostTable table);

  const Kind& kind() const noexcept { return kind_; }
  bool is_builtin() const noexcept { return !std::holds_alternative<ExplicitTable>(kind_); }
  /// True for kinds that are a convex function of y - x on the line
  /// (squared Euclidean, any power distance, any convex profile).
  bool is_convex_1d_compatible() const noexcept { return is_builtin(); }

  /// c(x, y) for built-in kinds. Throws Error(UnsupportedCost) for an
  /// explicit table and Error(InvalidCost) on dimension mismatch.
  double operator()(const Point& x, const Point& y) const;

  std::string describe() const;

 private:
  explicit CostSpec(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_ = SquaredEuclidean{};
};

/// c(x, y) <= c_X(x) + c_Y(y). Only meaningful when valid.
struct SeparableBound {
  PointFunction c_x;
  PointFunction c_y;
  bool valid = false;
};

/// entries[i][j] = c(src[i], tgt[j]). For an explicit table the stored table
/// is returned after checking its shape against the point counts.
CostTable build_cost_table(std::span<const Point> src, std::span<const Point> tgt,
                           const CostSpec& spec);

/// Power costs use |x-y|^p <= 2^(p-1) (|x|^p + |y|^p). Convex profiles use
/// h(y-x) <= h(2y)/2 + h(-2x)/2. Explicit tables have no structural bound.
SeparableBound separable_bound(const CostSpec& spec);

/// sum_ij plan_ij * table_ij. Throws Error(InvalidCost) on shape mismatch.
double transport_cost(const Coupling& plan, const CostTable& table);

}  // namespace otk
