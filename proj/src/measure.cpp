#include "otk/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "otk/error.hpp"

namespace otk {

namespace {

void validate(std::size_t dimension, const std::vector<Point>& points,
              const std::vector<double>& weights, bool nonnegative) {
  if (dimension == 0) throw Error(ErrorCode::InvalidMeasure, "dimension must be positive");
  if (points.size() != weights.size()) {
    throw Error(ErrorCode::InvalidMeasure,
                "points/weights length mismatch (" + std::to_string(points.size()) +
                    " vs " + std::to_string(weights.size()) + ")");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dimension) {
      throw Error(ErrorCode::InvalidMeasure,
                  "point " + std::to_string(i) + " has dimension " +
                      std::to_string(points[i].size()) + ", expected " +
                      std::to_string(dimension));
    }
    for (double x : points[i]) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::InvalidMeasure,
                    "non-finite coordinate at point " + std::to_string(i));
      }
    }
    if (!std::isfinite(weights[i])) {
      throw Error(ErrorCode::InvalidMeasure, "non-finite weight at point " + std::to_string(i));
    }
    if (nonnegative && weights[i] < 0.0) {
      throw Error(ErrorCode::InvalidMeasure, "negative weight at point " + std::to_string(i));
    }
  }
}

struct Atoms {
  std::vector<Point> points;
  std::vector<double> weights;
};

Atoms canonical_atoms(const std::vector<Point>& points, const std::vector<double>& weights) {
  std::map<Point, double> merged;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Point p = points[i];
    for (double& x : p) {
      if (x == 0.0) x = 0.0;  // -0 -> +0
    }
    merged[std::move(p)] += weights[i];
  }
  Atoms out;
  for (auto& [p, w] : merged) {
    if (w == 0.0) continue;
    out.points.push_back(p);
    out.weights.push_back(w);
  }
  return out;
}

}  // namespace

PointLookup::PointLookup(std::span<const Point> points) {
  for (std::size_t i = 0; i < points.size(); ++i) index_.emplace(points[i], i);
}

std::optional<std::size_t> PointLookup::find(const Point& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SignedDiscreteMeasure::SignedDiscreteMeasure(std::size_t dimension, std::vector<Point> points,
                                             std::vector<double> weights)
    : dimension_(dimension), points_(std::move(points)), weights_(std::move(weights)) {
  validate(dimension_, points_, weights_, false);
}

SignedDiscreteMeasure::SignedDiscreteMeasure(const DiscreteMeasure& positive)
    : dimension_(positive.dimension()),
      points_(positive.points()),
      weights_(positive.weights()) {}

double SignedDiscreteMeasure::total_integral() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

double SignedDiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (double w : weights_) s += std::abs(w);
  return s;
}

DiscreteMeasure::DiscreteMeasure(std::size_t dimension, std::vector<Point> points,
                                 std::vector<double> weights)
    : dimension_(dimension), points_(std::move(points)), weights_(std::move(weights)) {
  validate(dimension_, points_, weights_, true);
}

double DiscreteMeasure::total_mass() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

std::vector<Point> DiscreteMeasure::support() const {
  std::vector<Point> out;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (weights_[i] > 0.0) out.push_back(points_[i]);
  }
  return out;
}

SignedDiscreteMeasure canonicalize(const SignedDiscreteMeasure& m) {
  Atoms atoms = canonical_atoms(m.points(), m.weights());
  return SignedDiscreteMeasure(m.dimension(), std::move(atoms.points), std::move(atoms.weights));
}

DiscreteMeasure canonicalize(const DiscreteMeasure& m) {
  Atoms atoms = canonical_atoms(m.points(), m.weights());
  return DiscreteMeasure(m.dimension(), std::move(atoms.points), std::move(atoms.weights));
}

JordanParts jordan_decompose(const SignedDiscreteMeasure& a) {
  const SignedDiscreteMeasure c = canonicalize(a);
  std::vector<Point> pos_points, neg_points;
  std::vector<double> pos_weights, neg_weights;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double w = c.weights()[i];
    if (w > 0.0) {
      pos_points.push_back(c.points()[i]);
      pos_weights.push_back(w);
    } else {
      neg_points.push_back(c.points()[i]);
      neg_weights.push_back(-w);
    }
  }
  return {DiscreteMeasure(c.dimension(), std::move(pos_points), std::move(pos_weights)),
          DiscreteMeasure(c.dimension(), std::move(neg_points), std::move(neg_weights))};
}

SignedDiscreteMeasure difference(const DiscreteMeasure& positive, const DiscreteMeasure& negative) {
  if (!positive.empty() && !negative.empty() && positive.dimension() != negative.dimension()) {
    throw Error(ErrorCode::DimensionError, "difference of measures with different dimensions");
  }
  const std::size_t dim = positive.empty() ? negative.dimension() : positive.dimension();
  std::vector<Point> points = positive.points();
  std::vector<double> weights = positive.weights();
  points.insert(points.end(), negative.points().begin(), negative.points().end());
  for (double w : negative.weights()) weights.push_back(-w);
  return canonicalize(SignedDiscreteMeasure(dim, std::move(points), std::move(weights)));
}

DiscreteMeasure absolute(const SignedDiscreteMeasure& a) {
  std::vector<double> weights;
  weights.reserve(a.size());
  for (double w : a.weights()) weights.push_back(std::abs(w));
  return canonicalize(DiscreteMeasure(a.dimension(), a.points(), std::move(weights)));
}

RnDerivative rn_derivative(const DiscreteMeasure& eta, const DiscreteMeasure& mu) {
  if (!eta.empty() && !mu.empty() && eta.dimension() != mu.dimension()) {
    throw Error(ErrorCode::DimensionError, "rn_derivative of measures with different dimensions");
  }
  const DiscreteMeasure base = canonicalize(mu);
  const PointLookup lookup(base.points());
  std::vector<double> eta_on_base(base.size(), 0.0);
  const DiscreteMeasure e = canonicalize(eta);
  for (std::size_t i = 0; i < e.size(); ++i) {
    auto k = lookup.find(e.points()[i]);
    if (!k) {
      throw Error(ErrorCode::NotAbsolutelyContinuous,
                  "eta has mass at a point outside the support of mu");
    }
    eta_on_base[*k] = e.weights()[i];
  }

  // Report in the caller's point order, including zero-weight atoms of mu.
  RnDerivative out;
  out.values.assign(mu.size(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.weights()[i] <= 0.0) continue;
    Point p = mu.points()[i];
    for (double& x : p) {
      if (x == 0.0) x = 0.0;
    }
    const std::size_t k = *lookup.find(p);
    // Duplicated points share the merged weight.
    out.values[i] = eta_on_base[k] / base.weights()[k];
    out.bound = std::max(out.bound, out.values[i]);
  }
  return out;
}

MomentReport moment(const SignedDiscreteMeasure& m, const PointFunction& cx) {
  MomentReport report;
  for (std::size_t i = 0; i < m.size(); ++i) {
    report.cx_integral += std::abs(m.weights()[i]) * cx(m.points()[i]);
  }
  report.finite = std::isfinite(report.cx_integral);
  return report;
}

double max_atom_difference(const SignedDiscreteMeasure& a, const SignedDiscreteMeasure& b) {
  std::map<Point, double> diff;
  const SignedDiscreteMeasure ca = canonicalize(a);
  const SignedDiscreteMeasure cb = canonicalize(b);
  for (std::size_t i = 0; i < ca.size(); ++i) diff[ca.points()[i]] += ca.weights()[i];
  for (std::size_t i = 0; i < cb.size(); ++i) diff[cb.points()[i]] -= cb.weights()[i];
  double worst = 0.0;
  for (const auto& [p, d] : diff) worst = std::max(worst, std::abs(d));
  return worst;
}

}  // namespace otk
