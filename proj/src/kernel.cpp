#include "otk/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otk/error.hpp"

namespace otk {

namespace {

// eta's weights laid out over the kernel's source atoms.
std::vector<double> weights_on_domain(const TransportKernel& k, const SignedDiscreteMeasure& eta) {
  if (!eta.empty() && eta.dimension() != k.dimension()) {
    throw Error(ErrorCode::DimensionError, "measure and kernel differ in dimension");
  }
  const PointLookup lookup(k.src_points());
  const SignedDiscreteMeasure c = canonicalize(eta);
  std::vector<double> w(k.rows(), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto row = lookup.find(c.points()[i]);
    if (!row) {
      throw Error(ErrorCode::NotAbsolutelyContinuous,
                  "measure has mass outside the kernel's source support");
    }
    w[*row] = c.weights()[i];
  }
  return w;
}

std::vector<double> push(const TransportKernel& k, const std::vector<double>& w) {
  std::vector<double> out(k.cols(), 0.0);
  for (std::size_t i = 0; i < k.rows(); ++i) {
    if (w[i] == 0.0) continue;
    for (std::size_t j = 0; j < k.cols(); ++j) out[j] += w[i] * k.at(i, j);
  }
  return out;
}

}  // namespace

TransportKernel::TransportKernel(std::size_t dimension, std::vector<Point> src,
                                 std::vector<Point> tgt, std::vector<double> rows,
                                 std::vector<double> base_weights)
    : dimension_(dimension),
      src_(std::move(src)),
      tgt_(std::move(tgt)),
      rows_(std::move(rows)),
      base_weights_(std::move(base_weights)) {
  // Reuse the plan validation for shapes, points and entry signs.
  const Coupling shape(dimension_, src_, tgt_, rows_);
  if (base_weights_.size() != src_.size()) {
    throw Error(ErrorCode::InvalidMeasure, "kernel base weights do not match its rows");
  }
  for (double w : base_weights_) {
    if (!std::isfinite(w) || !(w > 0.0)) {
      throw Error(ErrorCode::InvalidMeasure, "kernel base weights must be positive");
    }
  }
  for (std::size_t i = 0; i < src_.size(); ++i) {
    if (std::abs(shape.row_sum(i) - 1.0) > 1e-12) {
      throw Error(ErrorCode::InvalidMeasure,
                  "kernel row " + std::to_string(i) + " is not a probability vector");
    }
  }
}

DiscreteMeasure TransportKernel::base_marginal() const {
  return DiscreteMeasure(dimension_, src_, base_weights_);
}

double TransportKernel::max_row_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols(); ++j) s += at(i, j);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

TransportKernel kernel_from_coupling(const Coupling& g) {
  std::vector<Point> src;
  std::vector<double> rows, base;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    const double mass = g.row_sum(i);
    if (!(mass > 0.0)) continue;
    src.push_back(g.src_points()[i]);
    base.push_back(mass);
    for (std::size_t j = 0; j < g.cols(); ++j) rows.push_back(g.at(i, j) / mass);
  }
  return TransportKernel(g.dimension(), std::move(src), g.tgt_points(), std::move(rows),
                         std::move(base));
}

DiscreteMeasure apply(const TransportKernel& k, const DiscreteMeasure& eta) {
  const std::vector<double> w = weights_on_domain(k, SignedDiscreteMeasure(eta));
  return DiscreteMeasure(k.dimension(), k.tgt_points(), push(k, w));
}

Coupling product_measure(const TransportKernel& k, const DiscreteMeasure& eta) {
  const std::vector<double> w = weights_on_domain(k, SignedDiscreteMeasure(eta));
  std::vector<double> mass(k.rows() * k.cols());
  for (std::size_t i = 0; i < k.rows(); ++i) {
    for (std::size_t j = 0; j < k.cols(); ++j) mass[i * k.cols() + j] = w[i] * k.at(i, j);
  }
  return Coupling(k.dimension(), k.src_points(), k.tgt_points(), std::move(mass));
}

SignedDiscreteMeasure apply_signed(const TransportKernel& k, const SignedDiscreteMeasure& a) {
  const std::vector<double> w = weights_on_domain(k, a);
  std::vector<double> pos(w.size(), 0.0), neg(w.size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) (w[i] > 0.0 ? pos[i] : neg[i]) = std::abs(w[i]);
  const std::vector<double> pushed_pos = push(k, pos);
  const std::vector<double> pushed_neg = push(k, neg);

  const double residue = 1e-14 * a.total_mass();
  std::vector<double> out(k.cols());
  for (std::size_t j = 0; j < k.cols(); ++j) {
    const double d = pushed_pos[j] - pushed_neg[j];
    out[j] = std::abs(d) <= residue ? 0.0 : d;
  }
  return canonicalize(SignedDiscreteMeasure(k.dimension(), k.tgt_points(), std::move(out)));
}

CxBoundReport is_cx_bounded(const TransportKernel& k, const SeparableBound& bound, double A,
                            double B) {
  if (!bound.valid) {
    throw Error(ErrorCode::UnsupportedCost, "cost has no separable bound to test against");
  }
  CxBoundReport report;
  report.bounded = true;
  std::vector<double> cy(k.cols());
  for (std::size_t j = 0; j < k.cols(); ++j) cy[j] = bound.c_y(k.tgt_points()[j]);
  for (std::size_t i = 0; i < k.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < k.cols(); ++j) row += k.at(i, j) * cy[j];
    const double margin = A * bound.c_x(k.src_points()[i]) + B - row;
    report.margins.push_back(margin);
    if (margin < 0.0) report.bounded = false;
  }
  return report;
}

CcmReport is_optimal_kernel(const TransportKernel& k, const CostTable& table,
                            const CcmOptions& options) {
  return verify_optimal(product_measure(k, k.base_marginal()), table, options);
}

CcmReport is_optimal_kernel(const TransportKernel& k, const CostSpec& spec,
                            const CcmOptions& options) {
  return is_optimal_kernel(k, build_cost_table(k.src_points(), k.tgt_points(), spec), options);
}

}  // namespace otk
