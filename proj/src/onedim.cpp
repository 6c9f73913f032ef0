#include "otk/onedim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "otk/error.hpp"
#include "otk/solver.hpp"

namespace otk {

namespace {

void require_line(const DiscreteMeasure& m, const char* what) {
  if (m.dimension() != 1) {
    throw Error(ErrorCode::DimensionError, std::string(what) + " must be one-dimensional");
  }
}

// Indices of positive atoms sorted by position.
std::vector<std::size_t> sorted_atoms(const DiscreteMeasure& m) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.weights()[i] > 0.0) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return m.points()[a][0] < m.points()[b][0];
  });
  return idx;
}

std::size_t block_of(double x, const std::vector<double>& bounds) {
  // First cut with x <= bound; past the last cut is the final open block.
  return static_cast<std::size_t>(std::lower_bound(bounds.begin(), bounds.end(), x) -
                                  bounds.begin());
}

}  // namespace

double StepCdf::operator()(double x) const {
  auto it = std::upper_bound(positions.begin(), positions.end(), x);
  if (it == positions.begin()) return 0.0;
  return cumulative[static_cast<std::size_t>(it - positions.begin()) - 1];
}

StepCdf cdf(const DiscreteMeasure& mu) {
  require_line(mu, "cdf input");
  const DiscreteMeasure c = canonicalize(mu);
  StepCdf F;
  double running = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    running += c.weights()[i];
    F.positions.push_back(c.points()[i][0]);
    F.cumulative.push_back(running);
  }
  F.total_mass = running;
  return F;
}

double quantile(const StepCdf& F, double t) {
  if (!(t > 0.0) || t > F.total_mass || F.positions.empty()) {
    throw Error(ErrorCode::QuantileRange,
                "quantile level " + std::to_string(t) + " outside (0, " +
                    std::to_string(F.total_mass) + "]");
  }
  auto it = std::lower_bound(F.cumulative.begin(), F.cumulative.end(), t);
  if (it == F.cumulative.end()) --it;
  return F.positions[static_cast<std::size_t>(it - F.cumulative.begin())];
}

Coupling monotone_coupling(const DiscreteMeasure& mu_in, const DiscreteMeasure& nu_in) {
  require_line(mu_in, "source measure");
  require_line(nu_in, "target measure");
  const auto [mu, nu] = rebalance(mu_in, nu_in);

  const std::vector<std::size_t> rows = sorted_atoms(mu);
  const std::vector<std::size_t> cols = sorted_atoms(nu);
  std::vector<double> mass(mu.size() * nu.size(), 0.0);

  // Walk the merged quantile levels; each step closes a source atom, a
  // target atom, or both.
  // Remainders below this are rounding residue of the two running sums.
  const double eps = 1e-15 * mu.total_mass();
  std::size_t r = 0, c = 0;
  double left_mu = rows.empty() ? 0.0 : mu.weights()[rows[0]];
  double left_nu = cols.empty() ? 0.0 : nu.weights()[cols[0]];
  while (r < rows.size() && c < cols.size()) {
    const double x = std::min(left_mu, left_nu);
    mass[rows[r] * nu.size() + cols[c]] += x;
    left_mu -= x;
    left_nu -= x;
    const bool row_done = left_mu <= eps;
    const bool col_done = left_nu <= eps;
    if (row_done && ++r < rows.size()) left_mu = mu.weights()[rows[r]];
    if (col_done && ++c < cols.size()) left_nu = nu.weights()[cols[c]];
  }
  return Coupling(1, mu.points(), nu.points(), std::move(mass));
}

bool check_block_structure(const Coupling& g, std::span<const BlockCut> cuts) {
  if (g.dimension() != 1) throw Error(ErrorCode::DimensionError, "block structure is 1D only");
  const Marginals m = marginals(g);
  const StepCdf Fmu = cdf(m.source), Fnu = cdf(m.target);
  const double total = Fmu.total_mass;
  auto eval = [](const StepCdf& F, double x) {
    return std::isinf(x) && x > 0 ? F.total_mass : F(x);
  };

  std::vector<double> src_bounds, tgt_bounds;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const auto [c, d] = cuts[k];
    if (std::isnan(c) || std::isnan(d)) throw Error(ErrorCode::InvalidCut, "cut is NaN");
    if (k > 0 && (c < cuts[k - 1].first || d < cuts[k - 1].second)) {
      throw Error(ErrorCode::InvalidCut, "cuts must be nondecreasing");
    }
    const double fc = eval(Fmu, c), fd = eval(Fnu, d);
    if (std::abs(fc - fd) > 1e-9 * std::max(total, 1e-300)) {
      throw Error(ErrorCode::InvalidCut, "cut " + std::to_string(k) + " has F_mu(c) = " +
                                             std::to_string(fc) + " but F_nu(d) = " +
                                             std::to_string(fd));
    }
    if (!(fc > 1e-9 * total)) {
      throw Error(ErrorCode::InvalidCut, "cut " + std::to_string(k) + " has zero CDF value");
    }
    src_bounds.push_back(c);
    tgt_bounds.push_back(d);
  }

  for (const Cell& cell : g.support_cells()) {
    const double x = g.src_points()[cell.i][0];
    const double y = g.tgt_points()[cell.j][0];
    if (block_of(x, src_bounds) != block_of(y, tgt_bounds)) return false;
  }
  return true;
}

}  // namespace otk
