#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace otk {

/// A coordinate vector in R^d.
using Point = std::vector<double>;

/// Exact-coordinate lookup from points to their position in a list.
class PointLookup {
 public:
  PointLookup() = default;
  explicit PointLookup(std::span<const Point> points);

  std::optional<std::size_t> find(const Point& p) const;

 private:
  std::map<Point, std::size_t> index_;
};

class DiscreteMeasure;

/// Finitely supported measure on R^d with real weights.
///
/// Points may repeat and weights may be zero until the measure is passed
/// through canonicalize(); every coordinate and weight is finite.
class SignedDiscreteMeasure {
 public:
  SignedDiscreteMeasure() = default;
  /// Throws Error(InvalidMeasure) on length mismatch, wrong point
  /// dimension, zero dimension or non-finite values.
  SignedDiscreteMeasure(std::size_t dimension, std::vector<Point> points,
                        std::vector<double> weights);
  explicit SignedDiscreteMeasure(const DiscreteMeasure& positive);

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  /// Sum of weights.
  double total_integral() const;
  /// Sum of absolute weights.
  double total_mass() const;

 private:
  std::size_t dimension_ = 1;
  std::vector<Point> points_;
  std::vector<double> weights_;
};

/// Finitely supported nonnegative measure on R^d. Total mass need not be 1.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  /// As the signed constructor, and additionally rejects negative weights.
  DiscreteMeasure(std::size_t dimension, std::vector<Point> points,
                  std::vector<double> weights);

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  double total_mass() const;

  /// Atoms with strictly positive weight.
  std::vector<Point> support() const;

 private:
  std::size_t dimension_ = 1;
  std::vector<Point> points_;
  std::vector<double> weights_;
};

struct JordanParts {
  DiscreteMeasure positive;
  DiscreteMeasure negative;
};

struct RnDerivative {
  /// dη/dμ at each atom of μ, in μ's point order. Zero where μ has no mass.
  std::vector<double> values;
  /// max of values; the bound M of the bounded-derivative domain.
  double bound = 0.0;
};

struct MomentReport {
  double cx_integral = 0.0;
  bool finite = true;
};

/// Side function c_X or c_Y of a separable cost bound.
using PointFunction = std::function<double(const Point&)>;

/// Merge duplicate points, drop zero-weight atoms, sort points
/// lexicographically. Negative zero coordinates are normalized to +0.
SignedDiscreteMeasure canonicalize(const SignedDiscreteMeasure& m);
DiscreteMeasure canonicalize(const DiscreteMeasure& m);

/// Split a into mutually singular parts with a = positive - negative.
/// The input is canonicalized first, so both parts are canonical.
JordanParts jordan_decompose(const SignedDiscreteMeasure& a);

/// positive - negative as a canonical signed measure.
SignedDiscreteMeasure difference(const DiscreteMeasure& positive,
                                 const DiscreteMeasure& negative);

/// |a| = a+ + a-, canonical.
DiscreteMeasure absolute(const SignedDiscreteMeasure& a);

/// Throws Error(NotAbsolutelyContinuous) when eta puts mass on a point
/// where mu has none.
RnDerivative rn_derivative(const DiscreteMeasure& eta, const DiscreteMeasure& mu);

MomentReport moment(const SignedDiscreteMeasure& m, const PointFunction& cx);

/// max_x |a(x) - b(x)| over the union of both supports.
double max_atom_difference(const SignedDiscreteMeasure& a,
                           const SignedDiscreteMeasure& b);

}  // namespace otk
