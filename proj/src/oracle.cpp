#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "otk/error.hpp"
#include "otk/solver.hpp"

namespace otk {

namespace {

// Brute force over every spanning tree of the complete bipartite graph
// K_{m,n}; each tree basis fixes a unique solution of the marginal
// equations, and the feasible ones are the polytope's vertices.
class BasisEnumerator {
 public:
  BasisEnumerator(std::vector<double> supply, std::vector<double> demand, const CostTable& table)
      : m_(supply.size()), n_(demand.size()), supply_(std::move(supply)),
        demand_(std::move(demand)), table_(table) {
    feasibility_tol_ = 1e-12 * std::max(1.0, std::accumulate(supply_.begin(), supply_.end(), 0.0));
  }

  double run() {
    parent_.resize(m_ + n_);
    std::iota(parent_.begin(), parent_.end(), 0);
    chosen_.clear();
    search(0);
    return best_;
  }

 private:
  std::size_t find(std::size_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  void search(std::size_t next_cell) {
    const std::size_t needed = m_ + n_ - 1;
    if (chosen_.size() == needed) {
      evaluate();
      return;
    }
    const std::size_t cells = m_ * n_;
    if (chosen_.size() + (cells - next_cell) < needed) return;

    const std::size_t i = next_cell / n_, j = next_cell % n_;
    const std::size_t ri = find(i), rj = find(m_ + j);
    if (ri != rj) {
      parent_[ri] = rj;
      chosen_.push_back(next_cell);
      search(next_cell + 1);
      chosen_.pop_back();
      parent_[ri] = ri;
    }
    search(next_cell + 1);
  }

  // Peel leaves: a node of degree one fixes the flow on its only edge.
  void evaluate() {
    std::vector<double> residual(m_ + n_);
    for (std::size_t i = 0; i < m_; ++i) residual[i] = supply_[i];
    for (std::size_t j = 0; j < n_; ++j) residual[m_ + j] = demand_[j];
    std::vector<std::size_t> degree(m_ + n_, 0);
    for (std::size_t c : chosen_) {
      ++degree[c / n_];
      ++degree[m_ + c % n_];
    }
    std::vector<bool> done(chosen_.size(), false);
    double cost = 0.0;
    for (std::size_t round = 0; round < chosen_.size(); ++round) {
      bool progressed = false;
      for (std::size_t k = 0; k < chosen_.size() && !progressed; ++k) {
        if (done[k]) continue;
        const std::size_t row = chosen_[k] / n_, col = m_ + chosen_[k] % n_;
        std::size_t leaf, other;
        if (degree[row] == 1) {
          leaf = row;
          other = col;
        } else if (degree[col] == 1) {
          leaf = col;
          other = row;
        } else {
          continue;
        }
        const double x = residual[leaf];
        if (x < -feasibility_tol_) return;
        residual[leaf] = 0.0;
        residual[other] -= x;
        --degree[leaf];
        --degree[other];
        done[k] = true;
        cost += std::max(x, 0.0) * table_.at(chosen_[k] / n_, chosen_[k] % n_);
        progressed = true;
      }
      if (!progressed) return;
    }
    best_ = std::min(best_, cost);
  }

  std::size_t m_, n_;
  std::vector<double> supply_, demand_;
  const CostTable& table_;
  double feasibility_tol_ = 0.0;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> chosen_;
  double best_ = std::numeric_limits<double>::infinity();
};

bool uniform_square(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.size() != nu.size()) return false;
  const double w = mu.weights().front();
  auto same = [w](double x) { return std::abs(x - w) <= 1e-12 * std::abs(w); };
  return std::all_of(mu.weights().begin(), mu.weights().end(), same) &&
         std::all_of(nu.weights().begin(), nu.weights().end(), same);
}

}  // namespace

double oracle_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostTable& table) {
  const auto [a, b] = rebalance(mu, nu);
  const std::size_t m = a.size(), n = b.size();
  if (table.rows() != m || table.cols() != n) {
    throw Error(ErrorCode::InvalidCost, "cost table shape does not match the measures");
  }

  if (uniform_square(a, b) && m <= 6) {
    // Birkhoff: the optimum sits on a permutation plan.
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double c = 0.0;
      for (std::size_t i = 0; i < m; ++i) c += table.at(i, perm[i]);
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best * a.weights().front();
  }

  if (m + n > 10) {
    throw Error(ErrorCode::OracleOverflow,
                "oracle handles m + n <= 10 (or uniform m = n <= 6), got " + std::to_string(m) +
                    " x " + std::to_string(n));
  }
  return BasisEnumerator(a.weights(), b.weights(), table).run();
}

}  // namespace otk
