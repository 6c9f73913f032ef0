#include "otk/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "otk/error.hpp"

namespace otk::io {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) schema("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) schema(std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema(where + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) schema(where + ": number is not finite");
  return x;
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(number(j[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

// Scalars are accepted as 1D points.
std::vector<Point> point_list(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where + ": expected an array of points");
  std::vector<Point> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string at = where + "[" + std::to_string(k) + "]";
    if (j[k].is_number()) {
      out.push_back({number(j[k], at)});
    } else {
      out.push_back(numbers(j[k], at));
    }
  }
  return out;
}

std::vector<double> matrix(const json& j, std::size_t rows, std::size_t cols,
                           const std::string& where) {
  if (!j.is_array() || j.size() != rows) {
    schema(where + ": expected " + std::to_string(rows) + " rows");
  }
  std::vector<double> out;
  out.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::vector<double> row = numbers(j[i], where + "[" + std::to_string(i) + "]");
    if (row.size() != cols) {
      schema(where + "[" + std::to_string(i) + "]: expected " + std::to_string(cols) +
             " entries");
    }
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

std::size_t dimension_of(const json& j, const std::vector<Point>& a, const std::vector<Point>& b) {
  if (j.contains("dimension")) {
    const json& d = j["dimension"];
    if (!d.is_number_integer() || d.get<long long>() <= 0) {
      schema("dimension: expected a positive integer");
    }
    return static_cast<std::size_t>(d.get<long long>());
  }
  if (!a.empty()) return a.front().size();
  if (!b.empty()) return b.front().size();
  return 1;
}

json points_json(const std::vector<Point>& points) {
  json out = json::array();
  for (const Point& p : points) out.push_back(p);
  return out;
}

json matrix_json(const std::vector<double>& entries, std::size_t rows, std::size_t cols) {
  json out = json::array();
  for (std::size_t i = 0; i < rows; ++i) {
    out.push_back(std::vector<double>(entries.begin() + static_cast<std::ptrdiff_t>(i * cols),
                                      entries.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols)));
  }
  return out;
}

json cells_json(const std::vector<Cell>& cells) {
  json out = json::array();
  for (const Cell& c : cells) out.push_back({c.i, c.j});
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool is_scalar(const json& j) { return !j.is_array() && !j.is_object(); }

void emit(const json& j, std::ostringstream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << json(it.key()).dump() << ": ";
        emit(it.value(), os, indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
      if (flat) {
        os << "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) os << ", ";
          emit(j[k], os, indent + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << ",\n";
        os << inner;
        emit(j[k], os, indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "'" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

std::string dump(const json& j) {
  std::ostringstream os;
  emit(j, os, 0);
  os << "\n";
  return os.str();
}

SignedDiscreteMeasure signed_measure_from_json(const json& j) {
  std::vector<Point> points = point_list(field(j, "points"), "points");
  std::vector<double> weights = numbers(field(j, "weights"), "weights");
  const std::size_t dim = dimension_of(j, points, {});
  return SignedDiscreteMeasure(dim, std::move(points), std::move(weights));
}

DiscreteMeasure measure_from_json(const json& j) {
  std::vector<Point> points = point_list(field(j, "points"), "points");
  std::vector<double> weights = numbers(field(j, "weights"), "weights");
  const std::size_t dim = dimension_of(j, points, {});
  return DiscreteMeasure(dim, std::move(points), std::move(weights));
}

Coupling coupling_from_json(const json& j) {
  std::vector<Point> src = point_list(field(j, "src_points"), "src_points");
  std::vector<Point> tgt = point_list(field(j, "tgt_points"), "tgt_points");
  std::vector<double> mass = matrix(field(j, "mass"), src.size(), tgt.size(), "mass");
  const std::size_t dim = dimension_of(j, src, tgt);
  return Coupling(dim, std::move(src), std::move(tgt), std::move(mass));
}

TransportKernel kernel_from_json(const json& j) {
  std::vector<Point> src = point_list(field(j, "src_points"), "src_points");
  std::vector<Point> tgt = point_list(field(j, "tgt_points"), "tgt_points");
  std::vector<double> rows = matrix(field(j, "rows"), src.size(), tgt.size(), "rows");
  std::vector<double> base = numbers(field(j, "base_weights"), "base_weights");
  const std::size_t dim = dimension_of(j, src, tgt);
  return TransportKernel(dim, std::move(src), std::move(tgt), std::move(rows), std::move(base));
}

CostTable cost_table_from_json(const json& j) {
  const json& e = field(j, "entries");
  if (!e.is_array()) schema("entries: expected an array of rows");
  const std::size_t rows = e.size();
  const std::size_t cols = rows == 0 ? 0 : (e[0].is_array() ? e[0].size() : 0);
  return CostTable(rows, cols, matrix(e, rows, cols, "entries"));
}

CostSpec parse_cost_spec(const std::string& text) {
  if (text == "sqeuclidean") return CostSpec::squared_euclidean();
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "power" && !tail.empty()) {
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(tail, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tail.size()) schema("cost '" + text + "': bad exponent");
    return CostSpec::power_distance(p);
  }
  if (head == "convex1d" && !tail.empty()) return CostSpec::convex_1d(parse_convex_profile(tail));
  if (head == "table" && !tail.empty()) {
    return CostSpec::explicit_table(cost_table_from_json(read_json_file(tail)));
  }
  schema("unknown cost '" + text + "' (sqeuclidean | power:<p> | convex1d:<h> | table:<path>)");
}

json to_json(const SignedDiscreteMeasure& m) {
  return {{"dimension", m.dimension()}, {"points", points_json(m.points())},
          {"weights", m.weights()}};
}

json to_json(const DiscreteMeasure& m) { return to_json(SignedDiscreteMeasure(m)); }

json to_json(const Coupling& g) {
  return {{"dimension", g.dimension()},
          {"src_points", points_json(g.src_points())},
          {"tgt_points", points_json(g.tgt_points())},
          {"mass", matrix_json(g.mass(), g.rows(), g.cols())}};
}

json to_json(const TransportKernel& k) {
  return {{"dimension", k.dimension()},
          {"src_points", points_json(k.src_points())},
          {"tgt_points", points_json(k.tgt_points())},
          {"rows", matrix_json(k.entries(), k.rows(), k.cols())},
          {"base_weights", k.base_weights()}};
}

json to_json(const CostTable& t) { return {{"entries", matrix_json(t.entries(), t.rows(), t.cols())}}; }

json to_json(const CcmWitness& w) {
  return {{"cells", cells_json(w.cells)},
          {"reassigned", cells_json(w.reassigned)},
          {"gap", w.gap},
          {"cycle_cost", w.cycle_cost}};
}

json to_json(const CcmReport& r) {
  return {{"is_ccm", r.is_ccm},
          {"max_len_checked", r.max_len_checked},
          {"support_size", r.support_size},
          {"complete", r.complete},
          {"witness", r.witness ? to_json(*r.witness) : json(nullptr)}};
}

json to_json(const Signature& s) {
  return {{"values", s.values}, {"boundaries", s.boundaries}};
}

json to_json(const ConnectivityResult& r) {
  json out = {{"connected", r.connected},
              {"reason", std::string(to_string(r.reason))},
              {"residual", r.residual},
              {"kernel", r.kernel ? to_json(*r.kernel) : json(nullptr)},
              {"witness", r.witness ? to_json(*r.witness) : json(nullptr)}};
  if (r.plans) {
    out["plans"] = {{"positive", to_json(r.plans->positive)},
                    {"negative", to_json(r.plans->negative)}};
  } else {
    out["plans"] = nullptr;
  }
  return out;
}

std::string plan_to_csv(const Coupling& g) {
  std::ostringstream os;
  os << "src_index,tgt_index,mass\n";
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (g.at(i, j) > 0.0) os << i << "," << j << "," << format_double(g.at(i, j)) << "\n";
    }
  }
  return os.str();
}

std::string measure_to_csv(const SignedDiscreteMeasure& m) {
  std::ostringstream os;
  for (std::size_t k = 0; k < m.dimension(); ++k) os << "x" << k << ",";
  os << "weight\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (double x : m.points()[i]) os << format_double(x) << ",";
    os << format_double(m.weights()[i]) << "\n";
  }
  return os.str();
}

std::string signature_to_csv(const Signature& s) {
  std::ostringstream os;
  os << "index,value,right_boundary\n";
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    os << k << "," << format_double(s.values[k]) << ",";
    os << (k < s.boundaries.size() ? format_double(s.boundaries[k]) : "inf") << "\n";
  }
  return os.str();
}

std::string table_to_csv(const CostTable& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (j) os << ",";
      os << format_double(t.at(i, j));
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace otk::io
