#include "otk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "otk/error.hpp"

namespace otk {

namespace {

// Flow value v + e * eps for an infinitesimal eps > 0. Supplies are
// perturbed by eps and the last demand by m * eps, which makes every basic
// solution nondegenerate in the lexicographic order.
struct LexFlow {
  double v = 0.0;
  long e = 0;
};

class LexCompare {
 public:
  explicit LexCompare(double zero_tol) : zero_tol_(zero_tol) {}

  // -1, 0, +1
  int compare(const LexFlow& a, const LexFlow& b) const {
    const double d = a.v - b.v;
    if (d > zero_tol_) return 1;
    if (d < -zero_tol_) return -1;
    if (a.e != b.e) return a.e < b.e ? -1 : 1;
    return 0;
  }
  bool is_zero(const LexFlow& a) const { return compare(a, LexFlow{}) == 0; }
  bool near_zero_value(const LexFlow& a) const { return std::abs(a.v) <= zero_tol_; }

 private:
  double zero_tol_;
};

LexFlow operator-(LexFlow a, const LexFlow& b) { return {a.v - b.v, a.e - b.e}; }
LexFlow operator+(LexFlow a, const LexFlow& b) { return {a.v + b.v, a.e + b.e}; }

class TransportSimplex {
 public:
  TransportSimplex(std::vector<double> supply, std::vector<double> demand, const CostTable& table,
                   const SolverOptions& options)
      : m_(supply.size()),
        n_(demand.size()),
        table_(table),
        options_(options),
        lex_(1e-14 * std::max(1.0, total(supply))),
        basic_(m_ * n_, false),
        flow_(m_ * n_) {
    northwest_corner(std::move(supply), std::move(demand));
    const double scale = std::max(1.0, table.max_entry());
    price_tol_ = 1e-12 * scale;
  }

  void run(SolveStats& stats) {
    const std::size_t degenerate_limit = options_.degenerate_pivots_per_node * (m_ + n_);
    const std::size_t max_pivots = 50 * m_ * n_ * (m_ + n_) + 1000;
    bool bland = false;
    std::vector<double> u(m_), v(n_);
    for (;;) {
      potentials(u, v);
      const std::size_t entering = price(u, v, bland);
      if (entering == npos) break;
      const bool degenerate = pivot(entering, bland);
      ++stats.pivots;
      if (degenerate) ++stats.degenerate_pivots;
      if (!bland && stats.degenerate_pivots > degenerate_limit) {
        bland = true;
        stats.used_bland = true;
      }
      if (stats.pivots > max_pivots) {
        throw std::runtime_error("transport simplex exceeded its pivot budget");
      }
    }
  }

  std::vector<double> plan(double snap) const {
    std::vector<double> mass(m_ * n_, 0.0);
    for (std::size_t k = 0; k < mass.size(); ++k) {
      if (!basic_[k]) continue;
      const double x = flow_[k].v;
      mass[k] = x > snap ? x : 0.0;
    }
    return mass;
  }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  static double total(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }

  std::size_t cell(std::size_t i, std::size_t j) const { return i * n_ + j; }

  void northwest_corner(std::vector<double> supply, std::vector<double> demand) {
    std::vector<LexFlow> a(m_), b(n_);
    for (std::size_t i = 0; i < m_; ++i) a[i] = {supply[i], 1};
    for (std::size_t j = 0; j < n_; ++j) b[j] = {demand[j], 0};
    b[n_ - 1].e = static_cast<long>(m_);

    std::size_t i = 0, j = 0;
    while (i < m_ && j < n_) {
      const LexFlow x = lex_.compare(a[i], b[j]) <= 0 ? a[i] : b[j];
      basic_[cell(i, j)] = true;
      flow_[cell(i, j)] = x;
      a[i] = a[i] - x;
      b[j] = b[j] - x;
      if (lex_.is_zero(a[i]) && i + 1 < m_) {
        ++i;
      } else if (j + 1 < n_) {
        ++j;
      } else {
        ++i;
      }
    }
  }

  // Adjacency of the basis tree; nodes 0..m-1 are rows, m..m+n-1 columns.
  std::vector<std::vector<std::size_t>> tree() const {
    std::vector<std::vector<std::size_t>> adj(m_ + n_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (!basic_[cell(i, j)]) continue;
        adj[i].push_back(m_ + j);
        adj[m_ + j].push_back(i);
      }
    }
    return adj;
  }

  void potentials(std::vector<double>& u, std::vector<double>& v) const {
    const auto adj = tree();
    std::vector<bool> seen(m_ + n_, false);
    std::vector<std::size_t> queue{0};
    seen[0] = true;
    u[0] = 0.0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const std::size_t node = queue[q];
      for (std::size_t next : adj[node]) {
        if (seen[next]) continue;
        seen[next] = true;
        if (node < m_) {
          v[next - m_] = table_.at(node, next - m_) - u[node];
        } else {
          u[next] = table_.at(next, node - m_) - v[node - m_];
        }
        queue.push_back(next);
      }
    }
  }

  std::size_t price(const std::vector<double>& u, const std::vector<double>& v, bool bland) const {
    std::size_t best = npos;
    double best_r = -price_tol_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (basic_[cell(i, j)]) continue;
        const double r = table_.at(i, j) - u[i] - v[j];
        if (r < best_r) {
          if (bland) return cell(i, j);
          best_r = r;
          best = cell(i, j);
        }
      }
    }
    return best;
  }

  // Returns true when the pivot moved no real mass.
  bool pivot(std::size_t entering, bool bland) {
    const std::size_t ei = entering / n_, ej = entering % n_;
    // Tree path from column ej to row ei.
    const auto adj = tree();
    const std::size_t start = m_ + ej, goal = ei;
    std::vector<std::size_t> parent(m_ + n_, npos);
    std::vector<std::size_t> queue{start};
    parent[start] = start;
    for (std::size_t q = 0; q < queue.size() && parent[goal] == npos; ++q) {
      for (std::size_t next : adj[queue[q]]) {
        if (parent[next] != npos) continue;
        parent[next] = queue[q];
        queue.push_back(next);
      }
    }
    if (parent[goal] == npos) throw std::logic_error("transport simplex basis is not a tree");

    // Walk back from the row to the column; cells alternate and the cell
    // touching column ej gives up mass.
    std::vector<std::size_t> path;
    for (std::size_t node = goal; node != start; node = parent[node]) {
      const std::size_t prev = parent[node];
      path.push_back(node < m_ ? cell(node, prev - m_) : cell(prev, node - m_));
    }
    std::reverse(path.begin(), path.end());

    std::size_t leaving = npos;
    LexFlow theta;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const std::size_t c = path[k];
      if (leaving == npos) {
        leaving = c;
        theta = flow_[c];
        continue;
      }
      const int cmp = lex_.compare(flow_[c], theta);
      if (cmp < 0 || (cmp == 0 && bland && c < leaving)) {
        leaving = c;
        theta = flow_[c];
      }
    }

    for (std::size_t k = 0; k < path.size(); ++k) {
      std::size_t c = path[k];
      flow_[c] = (k % 2 == 0) ? flow_[c] - theta : flow_[c] + theta;
    }
    basic_[entering] = true;
    flow_[entering] = theta;
    basic_[leaving] = false;
    flow_[leaving] = LexFlow{};
    return lex_.near_zero_value(theta);
  }

  std::size_t m_, n_;
  const CostTable& table_;
  SolverOptions options_;
  LexCompare lex_;
  double price_tol_ = 0.0;
  std::vector<bool> basic_;
  std::vector<LexFlow> flow_;
};

}  // namespace

std::pair<DiscreteMeasure, DiscreteMeasure> rebalance(const DiscreteMeasure& mu,
                                                      const DiscreteMeasure& nu, double tol) {
  const double ma = mu.total_mass(), mb = nu.total_mass();
  if (mu.empty() || nu.empty() || !(ma > 0.0) || !(mb > 0.0)) {
    throw Error(ErrorCode::EmptyMeasure, "transport needs two measures with positive mass");
  }
  if (std::abs(ma - mb) > tol * std::max(ma, mb)) {
    throw Error(ErrorCode::MassImbalance,
                "total masses differ: " + std::to_string(ma) + " vs " + std::to_string(mb));
  }
  if (ma == mb) return {mu, nu};
  const double target = 0.5 * (ma + mb);
  std::vector<double> wa(mu.weights()), wb(nu.weights());
  for (double& w : wa) w *= target / ma;
  for (double& w : wb) w *= target / mb;
  return {DiscreteMeasure(mu.dimension(), mu.points(), std::move(wa)),
          DiscreteMeasure(nu.dimension(), nu.points(), std::move(wb))};
}

Coupling solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostTable& table,
               const SolverOptions& options, SolveStats* stats) {
  const auto [a, b] = rebalance(mu, nu, options.balance_tol);
  if (a.dimension() != b.dimension()) {
    throw Error(ErrorCode::DimensionError, "source and target measures differ in dimension");
  }
  if (table.rows() != a.size() || table.cols() != b.size()) {
    throw Error(ErrorCode::InvalidCost, "cost table shape does not match the measures");
  }
  SolveStats local;
  TransportSimplex simplex(a.weights(), b.weights(), table, options);
  simplex.run(stats ? *stats : local);
  std::vector<double> mass = simplex.plan(1e-14 * a.total_mass());
  return Coupling(a.dimension(), a.points(), b.points(), std::move(mass));
}

Coupling solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostSpec& spec,
               const SolverOptions& options, SolveStats* stats) {
  const CostTable table = build_cost_table(mu.points(), nu.points(), spec);
  return solve(mu, nu, table, options, stats);
}

}  // namespace otk
