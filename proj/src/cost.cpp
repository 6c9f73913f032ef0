#include "otk/cost.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "otk/coupling.hpp"
#include "otk/error.hpp"

namespace otk {

namespace {

double squared_distance(const Point& x, const Point& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return s;
}

double squared_norm(const Point& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

CostTable::CostTable(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw Error(ErrorCode::InvalidCost, "cost table has " + std::to_string(entries_.size()) +
                                            " entries, expected " +
                                            std::to_string(rows_ * cols_));
  }
  for (double c : entries_) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidCost, "non-finite cost entry");
    if (c < 0.0) throw Error(ErrorCode::InvalidCost, "negative cost entry");
  }
}

double CostTable::max_entry() const {
  double m = 0.0;
  for (double c : entries_) m = std::max(m, c);
  return m;
}

std::string_view to_string(ConvexProfile h) {
  switch (h) {
    case ConvexProfile::Abs: return "abs";
    case ConvexProfile::Square: return "square";
    case ConvexProfile::Quartic: return "quartic";
    case ConvexProfile::CoshMinusOne: return "cosh";
  }
  return "unknown";
}

ConvexProfile parse_convex_profile(std::string_view name) {
  for (ConvexProfile h : {ConvexProfile::Abs, ConvexProfile::Square, ConvexProfile::Quartic,
                          ConvexProfile::CoshMinusOne}) {
    if (to_string(h) == name) return h;
  }
  throw Error(ErrorCode::InvalidCost, "unknown convex profile '" + std::string(name) + "'");
}

double evaluate(ConvexProfile h, double t) {
  switch (h) {
    case ConvexProfile::Abs: return std::abs(t);
    case ConvexProfile::Square: return t * t;
    case ConvexProfile::Quartic: return t * t * t * t;
    case ConvexProfile::CoshMinusOne: return std::cosh(t) - 1.0;
  }
  return 0.0;
}

CostSpec CostSpec::squared_euclidean() { return CostSpec(SquaredEuclidean{}); }

CostSpec CostSpec::power_distance(double p) {
  if (!std::isfinite(p) || p < 1.0) {
    throw Error(ErrorCode::InvalidCost, "power distance requires p >= 1");
  }
  return CostSpec(PowerDistance{p});
}

CostSpec CostSpec::convex_1d(ConvexProfile h) { return CostSpec(Convex1d{h}); }

CostSpec CostSpec::explicit_table(CostTable table) {
  return CostSpec(ExplicitTable{std::move(table)});
}

double CostSpec::operator()(const Point& x, const Point& y) const {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::InvalidCost, "cost evaluated between points of different dimension");
  }
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, SquaredEuclidean>) {
          return squared_distance(x, y);
        } else if constexpr (std::is_same_v<K, PowerDistance>) {
          const double d = std::sqrt(squared_distance(x, y));
          return k.p == 1.0 ? d : std::pow(d, k.p);
        } else if constexpr (std::is_same_v<K, Convex1d>) {
          if (x.size() != 1) {
            throw Error(ErrorCode::InvalidCost, "convex_1d cost requires dimension 1");
          }
          return evaluate(k.h, y[0] - x[0]);
        } else {
          throw Error(ErrorCode::UnsupportedCost,
                      "explicit cost tables cannot be evaluated at arbitrary points");
        }
      },
      kind_);
}

std::string CostSpec::describe() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, SquaredEuclidean>) {
          return "sqeuclidean";
        } else if constexpr (std::is_same_v<K, PowerDistance>) {
          std::ostringstream os;
          os.precision(17);
          os << "power:" << k.p;
          return os.str();
        } else if constexpr (std::is_same_v<K, Convex1d>) {
          return "convex1d:" + std::string(to_string(k.h));
        } else {
          return "table";
        }
      },
      kind_);
}

CostTable build_cost_table(std::span<const Point> src, std::span<const Point> tgt,
                           const CostSpec& spec) {
  if (const auto* t = std::get_if<ExplicitTable>(&spec.kind())) {
    if (t->table.rows() != src.size() || t->table.cols() != tgt.size()) {
      throw Error(ErrorCode::InvalidCost,
                  "explicit cost table is " + std::to_string(t->table.rows()) + "x" +
                      std::to_string(t->table.cols()) + " but the points give " +
                      std::to_string(src.size()) + "x" + std::to_string(tgt.size()));
    }
    return t->table;
  }
  std::vector<double> entries;
  entries.reserve(src.size() * tgt.size());
  for (const Point& x : src) {
    for (const Point& y : tgt) entries.push_back(spec(x, y));
  }
  return CostTable(src.size(), tgt.size(), std::move(entries));
}

SeparableBound separable_bound(const CostSpec& spec) {
  return std::visit(
      [](const auto& k) -> SeparableBound {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, SquaredEuclidean>) {
          auto side = [](const Point& x) { return 2.0 * squared_norm(x); };
          return {side, side, true};
        } else if constexpr (std::is_same_v<K, PowerDistance>) {
          const double p = k.p;
          const double scale = std::pow(2.0, p - 1.0);
          auto side = [p, scale](const Point& x) {
            return scale * std::pow(std::sqrt(squared_norm(x)), p);
          };
          return {side, side, true};
        } else if constexpr (std::is_same_v<K, Convex1d>) {
          const ConvexProfile h = k.h;
          auto cx = [h](const Point& x) { return 0.5 * evaluate(h, -2.0 * x.at(0)); };
          auto cy = [h](const Point& y) { return 0.5 * evaluate(h, 2.0 * y.at(0)); };
          return {cx, cy, true};
        } else {
          return {};
        }
      },
      spec.kind());
}

double transport_cost(const Coupling& plan, const CostTable& table) {
  if (plan.rows() != table.rows() || plan.cols() != table.cols()) {
    throw Error(ErrorCode::InvalidCost,
                "plan is " + std::to_string(plan.rows()) + "x" + std::to_string(plan.cols()) +
                    " but cost table is " + std::to_string(table.rows()) + "x" +
                    std::to_string(table.cols()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < plan.rows(); ++i) {
    for (std::size_t j = 0; j < plan.cols(); ++j) total += plan.at(i, j) * table.at(i, j);
  }
  return total;
}

}  // namespace otk
