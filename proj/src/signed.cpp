#include "otk/signed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "otk/error.hpp"
#include "otk/onedim.hpp"
#include "otk/solver.hpp"

namespace otk {

namespace {

bool differs(double x, double y, double tol, double scale) {
  return std::abs(x - y) > tol * std::max(scale, 1e-300);
}

// Mass and integral must both agree; returns the failing reason if not.
std::optional<ConnectivityReason> balance_check(const SignedDiscreteMeasure& a,
                                                const SignedDiscreteMeasure& b, double tol) {
  const double scale = std::max(a.total_mass(), b.total_mass());
  if (differs(a.total_mass(), b.total_mass(), tol, scale)) return ConnectivityReason::MassMismatch;
  if (differs(a.total_integral(), b.total_integral(), tol, scale)) {
    return ConnectivityReason::IntegralMismatch;
  }
  return std::nullopt;
}

// Rows of g whose source atom carries the requested sign in a.
Coupling rows_with_sign(const Coupling& g, const SignedDiscreteMeasure& a, bool positive) {
  const PointLookup lookup(a.points());
  std::vector<double> f(g.rows(), 0.0);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    auto k = lookup.find(g.src_points()[i]);
    if (k && (a.weights()[*k] > 0.0) == positive) f[i] = 1.0;
  }
  return reweight_source(g, f);
}

CostTable sub_table(const CostTable& full, const PointLookup& rows, const PointLookup& cols,
                    const std::vector<Point>& src, const std::vector<Point>& tgt) {
  std::vector<double> entries;
  entries.reserve(src.size() * tgt.size());
  for (const Point& x : src) {
    const std::size_t i = *rows.find(x);
    for (const Point& y : tgt) entries.push_back(full.at(i, *cols.find(y)));
  }
  return CostTable(src.size(), tgt.size(), std::move(entries));
}

double verify_push(const TransportKernel& k, const SignedDiscreteMeasure& a,
                   const SignedDiscreteMeasure& b, double tol) {
  const double residual = max_atom_difference(apply_signed(k, a), b);
  if (residual > tol * std::max(1.0, a.total_mass())) {
    throw std::logic_error("connecting kernel does not send a to b (residual " +
                           std::to_string(residual) + ")");
  }
  return residual;
}

}  // namespace

Signature signature(const SignedDiscreteMeasure& a) {
  if (a.dimension() != 1) throw Error(ErrorCode::DimensionError, "signatures are 1D only");
  const SignedDiscreteMeasure c = canonicalize(a);
  if (c.empty()) throw Error(ErrorCode::EmptySignature, "the zero measure has no signature");

  Signature s;
  double run = c.weights()[0];
  for (std::size_t i = 1; i < c.size(); ++i) {
    const double w = c.weights()[i];
    if ((w > 0.0) == (run > 0.0)) {
      run += w;
      continue;
    }
    s.values.push_back(run);
    s.boundaries.push_back(0.5 * (c.points()[i - 1][0] + c.points()[i][0]));
    run = w;
  }
  s.values.push_back(run);
  return s;
}

bool same_signature(const Signature& s, const Signature& t, double tol, double scale) {
  if (s.values.size() != t.values.size()) return false;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    if ((s.values[k] > 0.0) != (t.values[k] > 0.0)) return false;
    if (differs(s.values[k], t.values[k], tol, scale)) return false;
  }
  return true;
}

std::string_view to_string(ConnectivityReason r) {
  switch (r) {
    case ConnectivityReason::SameSignature: return "SameSignature";
    case ConnectivityReason::CompatiblePlans: return "CompatiblePlans";
    case ConnectivityReason::DifferentSignature: return "DifferentSignature";
    case ConnectivityReason::IncompatiblePlans: return "IncompatiblePlans";
    case ConnectivityReason::MassMismatch: return "MassMismatch";
    case ConnectivityReason::IntegralMismatch: return "IntegralMismatch";
  }
  return "Unknown";
}

ConnectivityResult connect_1d(const SignedDiscreteMeasure& a_in, const SignedDiscreteMeasure& b_in,
                              const CostSpec& spec, const ConnectOptions& options) {
  if (a_in.dimension() != 1 || b_in.dimension() != 1) {
    throw Error(ErrorCode::DimensionError, "connect_1d needs measures on the line");
  }
  if (!spec.is_convex_1d_compatible()) {
    throw Error(ErrorCode::UnsupportedCost,
                "the monotone construction needs a convex cost of y - x");
  }
  const SignedDiscreteMeasure a = canonicalize(a_in), b = canonicalize(b_in);
  ConnectivityResult result;
  if (auto bad = balance_check(a, b, options.tol)) {
    result.reason = *bad;
    return result;
  }
  const double scale = std::max(a.total_mass(), b.total_mass());
  if (!same_signature(signature(a), signature(b), options.tol, scale)) {
    result.reason = ConnectivityReason::DifferentSignature;
    return result;
  }

  const Coupling plan = monotone_coupling(absolute(a), absolute(b));
  TransportKernel kernel = kernel_from_coupling(plan);
  result.residual = verify_push(kernel, a, b, options.tol);
  result.connected = true;
  result.reason = ConnectivityReason::SameSignature;
  result.kernel = std::move(kernel);
  result.plans = SignedPlans{rows_with_sign(plan, a, true), rows_with_sign(plan, a, false)};
  return result;
}

ConnectivityResult connect_general(const SignedDiscreteMeasure& a_in,
                                   const SignedDiscreteMeasure& b_in, const CostSpec& spec,
                                   std::optional<std::size_t> max_len,
                                   const ConnectOptions& options) {
  if (a_in.dimension() != b_in.dimension()) {
    throw Error(ErrorCode::DimensionError, "measures live in different dimensions");
  }
  const SignedDiscreteMeasure a = canonicalize(a_in), b = canonicalize(b_in);
  ConnectivityResult result;
  if (auto bad = balance_check(a, b, options.tol)) {
    result.reason = *bad;
    return result;
  }
  const JordanParts ja = jordan_decompose(a), jb = jordan_decompose(b);
  const double scale = std::max(a.total_mass(), b.total_mass());
  if (differs(ja.positive.total_mass(), jb.positive.total_mass(), options.tol, scale) ||
      differs(ja.negative.total_mass(), jb.negative.total_mass(), options.tol, scale)) {
    result.reason = ConnectivityReason::MassMismatch;
    return result;
  }

  const std::vector<Point>& src = a.points();
  const std::vector<Point>& tgt = b.points();
  const CostTable full = build_cost_table(src, tgt, spec);
  const PointLookup rows(src), cols(tgt);
  auto part_plan = [&](const DiscreteMeasure& from, const DiscreteMeasure& to) {
    if (from.empty() && to.empty()) return Coupling::zeros(a.dimension(), src, tgt);
    const CostTable t = sub_table(full, rows, cols, from.points(), to.points());
    return embed(solve(from, to, t), src, tgt);
  };
  const Coupling gamma_pos = part_plan(ja.positive, jb.positive);
  const Coupling gamma_neg = part_plan(ja.negative, jb.negative);

  const CcmReport report = ccm_compatible(gamma_pos, gamma_neg, full, max_len, options.ccm);
  if (!report.is_ccm) {
    result.reason = ConnectivityReason::IncompatiblePlans;
    result.witness = report.witness;
    result.plans = SignedPlans{gamma_pos, gamma_neg};
    return result;
  }
  if (!report.complete) {
    throw Error(ErrorCode::CertificateOverflow,
                "compatibility checked only up to cycles of length " +
                    std::to_string(report.max_len_checked) + " of " +
                    std::to_string(report.support_size));
  }

  TransportKernel kernel = kernel_from_coupling(add(gamma_pos, gamma_neg));
  result.residual = verify_push(kernel, a, b, options.tol);
  result.connected = true;
  result.reason = ConnectivityReason::CompatiblePlans;
  result.kernel = std::move(kernel);
  result.plans = SignedPlans{gamma_pos, gamma_neg};
  return result;
}

double signed_transport_cost(const ConnectivityResult& result, const CostTable& table) {
  if (!result.connected || !result.plans) {
    throw Error(ErrorCode::NotConnected, "no connecting plan to price");
  }
  return transport_cost(add(result.plans->positive, result.plans->negative), table);
}

double signed_transport_cost(const ConnectivityResult& result, const CostSpec& spec) {
  if (!result.connected || !result.plans) {
    throw Error(ErrorCode::NotConnected, "no connecting plan to price");
  }
  const Coupling& p = result.plans->positive;
  return signed_transport_cost(result, build_cost_table(p.src_points(), p.tgt_points(), spec));
}

}  // namespace otk
