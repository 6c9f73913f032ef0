#include "otk/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "otk/error.hpp"

namespace otk {

namespace {

void check_points(std::size_t dimension, const std::vector<Point>& points, const char* which) {
  for (const Point& p : points) {
    if (p.size() != dimension) {
      throw Error(ErrorCode::InvalidMeasure,
                  std::string(which) + " point has dimension " + std::to_string(p.size()) +
                      ", expected " + std::to_string(dimension));
    }
    for (double x : p) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::InvalidMeasure, std::string(which) + " point is not finite");
      }
    }
  }
}

struct Evaluated {
  bool violates = false;
  double excess = 0.0;
  CcmWitness witness;
};

Evaluated evaluate_cycle(std::span<const Cell> cells, const std::vector<std::size_t>& order,
                         const CostTable& table, double tol) {
  Evaluated e;
  const std::size_t k = order.size();
  double current = 0.0, shifted = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    const Cell& a = cells[order[t]];
    const Cell& b = cells[order[(t + 1) % k]];
    current += table.at(a.i, a.j);
    shifted += table.at(a.i, b.j);
    e.witness.cells.push_back(a);
    e.witness.reassigned.push_back({a.i, b.j});
  }
  e.witness.gap = current - shifted;
  e.witness.cycle_cost = current;
  const double threshold = tol * (1.0 + std::abs(current));
  e.excess = e.witness.gap - threshold;
  e.violates = e.witness.gap > threshold;
  return e;
}

// Split a closed walk v0 -> v1 -> ... -> v0 into simple cycles.
std::vector<std::vector<std::size_t>> simple_cycles(const std::vector<std::size_t>& walk) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> stack;
  std::map<std::size_t, std::size_t> position;
  for (std::size_t v : walk) {
    auto it = position.find(v);
    if (it != position.end()) {
      std::vector<std::size_t> cycle(stack.begin() + static_cast<std::ptrdiff_t>(it->second),
                                     stack.end());
      for (std::size_t u : cycle) position.erase(u);
      stack.resize(it->second);
      if (cycle.size() >= 2) out.push_back(std::move(cycle));
    }
    position[v] = stack.size();
    stack.push_back(v);
  }
  return out;
}

}  // namespace

Coupling::Coupling(std::size_t dimension, std::vector<Point> src, std::vector<Point> tgt,
                   std::vector<double> mass)
    : dimension_(dimension), src_(std::move(src)), tgt_(std::move(tgt)), mass_(std::move(mass)) {
  if (dimension_ == 0) throw Error(ErrorCode::InvalidMeasure, "dimension must be positive");
  if (mass_.size() != src_.size() * tgt_.size()) {
    throw Error(ErrorCode::InvalidMeasure,
                "plan has " + std::to_string(mass_.size()) + " cells, expected " +
                    std::to_string(src_.size()) + "x" + std::to_string(tgt_.size()));
  }
  check_points(dimension_, src_, "source");
  check_points(dimension_, tgt_, "target");
  for (double m : mass_) {
    if (!std::isfinite(m)) throw Error(ErrorCode::InvalidMeasure, "non-finite plan mass");
    if (m < 0.0) throw Error(ErrorCode::InvalidMeasure, "negative plan mass");
  }
}

Coupling Coupling::zeros(std::size_t dimension, std::vector<Point> src, std::vector<Point> tgt) {
  std::vector<double> mass(src.size() * tgt.size(), 0.0);
  return Coupling(dimension, std::move(src), std::move(tgt), std::move(mass));
}

double Coupling::total_mass() const {
  double s = 0.0;
  for (double m : mass_) s += m;
  return s;
}

double Coupling::row_sum(std::size_t i) const {
  double s = 0.0;
  for (std::size_t j = 0; j < cols(); ++j) s += at(i, j);
  return s;
}

double Coupling::col_sum(std::size_t j) const {
  double s = 0.0;
  for (std::size_t i = 0; i < rows(); ++i) s += at(i, j);
  return s;
}

std::vector<Cell> Coupling::support_cells(double relative_threshold) const {
  const double cutoff = relative_threshold * total_mass();
  std::vector<Cell> out;
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) {
      if (at(i, j) > cutoff) out.push_back({i, j});
    }
  }
  return out;
}

Marginals marginals(const Coupling& g) {
  std::vector<double> mu(g.rows()), nu(g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i) mu[i] = g.row_sum(i);
  for (std::size_t j = 0; j < g.cols(); ++j) nu[j] = g.col_sum(j);
  return {DiscreteMeasure(g.dimension(), g.src_points(), std::move(mu)),
          DiscreteMeasure(g.dimension(), g.tgt_points(), std::move(nu))};
}

Coupling restrict(const Coupling& g, std::span<const Cell> keep, bool renormalize) {
  std::vector<double> mass(g.mass().size(), 0.0);
  for (const Cell& c : keep) {
    if (c.i >= g.rows() || c.j >= g.cols()) throw std::out_of_range("restrict: cell out of range");
    mass[c.i * g.cols() + c.j] = g.at(c.i, c.j);
  }
  if (renormalize) {
    double retained = 0.0;
    for (double m : mass) retained += m;
    if (!(retained > 0.0)) {
      throw Error(ErrorCode::EmptyRestriction, "restriction retains no mass");
    }
    for (double& m : mass) m /= retained;
  }
  return Coupling(g.dimension(), g.src_points(), g.tgt_points(), std::move(mass));
}

Coupling reweight_source(const Coupling& g, std::span<const double> f) {
  if (f.size() != g.rows()) {
    throw Error(ErrorCode::InvalidWeight, "reweighting has " + std::to_string(f.size()) +
                                              " entries for " + std::to_string(g.rows()) +
                                              " source atoms");
  }
  std::vector<double> mass(g.mass());
  for (std::size_t i = 0; i < g.rows(); ++i) {
    if (!std::isfinite(f[i]) || f[i] < 0.0) {
      throw Error(ErrorCode::InvalidWeight,
                  "reweighting entry " + std::to_string(i) + " is negative or not finite");
    }
    for (std::size_t j = 0; j < g.cols(); ++j) mass[i * g.cols() + j] *= f[i];
  }
  return Coupling(g.dimension(), g.src_points(), g.tgt_points(), std::move(mass));
}

Coupling add(const Coupling& a, const Coupling& b) {
  if (a.src_points() != b.src_points() || a.tgt_points() != b.tgt_points()) {
    throw Error(ErrorCode::InvalidMeasure, "adding plans over different point lists");
  }
  std::vector<double> mass(a.mass());
  for (std::size_t k = 0; k < mass.size(); ++k) mass[k] += b.mass()[k];
  return Coupling(a.dimension(), a.src_points(), a.tgt_points(), std::move(mass));
}

Coupling embed(const Coupling& g, const std::vector<Point>& src_domain,
               const std::vector<Point>& tgt_domain) {
  const PointLookup src_lookup(src_domain), tgt_lookup(tgt_domain);
  std::vector<std::size_t> row_to(g.rows()), col_to(g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i) {
    auto k = src_lookup.find(g.src_points()[i]);
    if (!k) throw Error(ErrorCode::InvalidMeasure, "source point missing from embedding domain");
    row_to[i] = *k;
  }
  for (std::size_t j = 0; j < g.cols(); ++j) {
    auto k = tgt_lookup.find(g.tgt_points()[j]);
    if (!k) throw Error(ErrorCode::InvalidMeasure, "target point missing from embedding domain");
    col_to[j] = *k;
  }
  std::vector<double> mass(src_domain.size() * tgt_domain.size(), 0.0);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      mass[row_to[i] * tgt_domain.size() + col_to[j]] += g.at(i, j);
    }
  }
  return Coupling(g.dimension(), src_domain, tgt_domain, std::move(mass));
}

std::size_t default_max_len(std::size_t support_size) { return std::min<std::size_t>(support_size, 6); }

CcmReport is_ccm(std::span<const Cell> input, const CostTable& table, std::size_t max_len,
                 const CcmOptions& options) {
  if (max_len < 2) throw std::invalid_argument("is_ccm: max_len must be at least 2");
  std::vector<Cell> cells(input.begin(), input.end());
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  for (const Cell& c : cells) {
    if (c.i >= table.rows() || c.j >= table.cols()) {
      throw Error(ErrorCode::InvalidCost, "support cell outside the cost table");
    }
  }

  const std::size_t n = cells.size();
  const std::size_t len = std::min(max_len, n);
  CcmReport report;
  report.support_size = n;
  report.max_len_checked = len;
  report.complete = len >= n;
  if (n < 2) return report;

  // Edge a -> b: the source of cell a takes the target of cell b. Around a
  // cycle the weights sum to (reassigned - current) + tol * current, so a
  // violating cycle is a closed walk of weight below -tol.
  const double keep = 1.0 - options.tol;
  std::vector<double> weight(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      weight[a * n + b] = table.at(cells[a].i, cells[b].j) - keep * table.at(cells[b].i, cells[b].j);
    }
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  // dist[l][v]: lightest walk of exactly l edges from the start to v.
  std::vector<std::vector<double>> dist(len + 1, std::vector<double>(n, inf));
  std::vector<std::vector<std::size_t>> parent(len + 1, std::vector<std::size_t>(n, none));

  std::optional<Evaluated> best;
  for (std::size_t s = 0; s < n && !best; ++s) {
    for (auto& row : dist) std::fill(row.begin(), row.end(), inf);
    dist[0][s] = 0.0;
    for (std::size_t l = 1; l <= len && !best; ++l) {
      for (std::size_t a = 0; a < n; ++a) {
        const double da = dist[l - 1][a];
        if (da == inf) continue;
        for (std::size_t b = 0; b < n; ++b) {
          if (b == a) continue;
          const double d = da + weight[a * n + b];
          if (d < dist[l][b]) {
            dist[l][b] = d;
            parent[l][b] = a;
          }
        }
      }
      if (l < 2 || !(dist[l][s] < -options.tol)) continue;

      std::vector<std::size_t> walk(l + 1);
      walk[l] = s;
      for (std::size_t t = l; t > 0; --t) walk[t - 1] = parent[t][walk[t]];
      // A light walk splits into simple cycles, at least one of them light;
      // keep the one with the largest violation.
      for (const auto& cycle : simple_cycles(walk)) {
        Evaluated e = evaluate_cycle(cells, cycle, table, options.tol);
        if (e.violates && (!best || e.excess > best->excess)) best = std::move(e);
      }
    }
  }

  if (best) {
    report.is_ccm = false;
    report.witness = std::move(best->witness);
  }
  return report;
}

CcmReport verify_optimal(const Coupling& g, const CostTable& table, const CcmOptions& options) {
  if (g.rows() != table.rows() || g.cols() != table.cols()) {
    throw Error(ErrorCode::InvalidCost, "plan and cost table shapes differ");
  }
  const std::vector<Cell> cells = g.support_cells(options.support_threshold);
  if (cells.size() > options.certificate_cap) {
    throw Error(ErrorCode::CertificateOverflow,
                "support has " + std::to_string(cells.size()) + " cells, cap is " +
                    std::to_string(options.certificate_cap));
  }
  return is_ccm(cells, table, std::max<std::size_t>(cells.size(), 2), options);
}

CcmReport ccm_compatible(const Coupling& g1, const Coupling& g2, const CostTable& table,
                         std::optional<std::size_t> max_len, const CcmOptions& options) {
  if (g1.src_points() != g2.src_points() || g1.tgt_points() != g2.tgt_points()) {
    throw Error(ErrorCode::InvalidCost,
                "compatibility against a fixed table needs plans over the same points");
  }
  if (g1.rows() != table.rows() || g1.cols() != table.cols()) {
    throw Error(ErrorCode::InvalidCost, "plan and cost table shapes differ");
  }
  std::set<Cell> merged;
  for (const Cell& c : g1.support_cells(options.support_threshold)) merged.insert(c);
  for (const Cell& c : g2.support_cells(options.support_threshold)) merged.insert(c);
  const std::vector<Cell> cells(merged.begin(), merged.end());
  if (!max_len && cells.size() > options.certificate_cap) {
    throw Error(ErrorCode::CertificateOverflow,
                "union support has " + std::to_string(cells.size()) + " cells, cap is " +
                    std::to_string(options.certificate_cap));
  }
  const std::size_t len = max_len.value_or(std::max<std::size_t>(cells.size(), 2));
  return is_ccm(cells, table, len, options);
}

CcmReport ccm_compatible(const Coupling& g1, const Coupling& g2, const CostSpec& spec,
                         std::optional<std::size_t> max_len, const CcmOptions& options,
                         std::vector<Point>* union_src, std::vector<Point>* union_tgt) {
  if (g1.dimension() != g2.dimension()) {
    throw Error(ErrorCode::DimensionError, "plans live in different dimensions");
  }
  std::set<Point> src_set(g1.src_points().begin(), g1.src_points().end());
  src_set.insert(g2.src_points().begin(), g2.src_points().end());
  std::set<Point> tgt_set(g1.tgt_points().begin(), g1.tgt_points().end());
  tgt_set.insert(g2.tgt_points().begin(), g2.tgt_points().end());
  std::vector<Point> src(src_set.begin(), src_set.end());
  std::vector<Point> tgt(tgt_set.begin(), tgt_set.end());

  const Coupling e1 = embed(g1, src, tgt);
  const Coupling e2 = embed(g2, src, tgt);
  const CostTable table = build_cost_table(src, tgt, spec);
  CcmReport report = ccm_compatible(e1, e2, table, max_len, options);
  if (union_src) *union_src = std::move(src);
  if (union_tgt) *union_tgt = std::move(tgt);
  return report;
}

}  // namespace otk
