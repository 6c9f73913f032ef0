#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "otk/cost.hpp"
#include "otk/coupling.hpp"
#include "otk/kernel.hpp"
#include "otk/measure.hpp"

namespace otk {

/// Alternating run sums of a signed measure on the line.
struct Signature {
  /// z_1..z_n, nonzero with strictly alternating signs.
  std::vector<double> values;
  /// p_1 < ... < p_{n-1}; run k covers (p_{k-1}, p_k] with p_0 = -inf and
  /// p_n = +inf.
  std::vector<double> boundaries;
};

/// Throws Error(EmptySignature) for the zero measure and
/// Error(DimensionError) off the line. Boundaries sit at the midpoint
/// between adjacent runs.
Signature signature(const SignedDiscreteMeasure& a);

/// Same length and z-values within tol * scale, boundaries ignored.
bool same_signature(const Signature& s, const Signature& t, double tol, double scale);

enum class ConnectivityReason {
  SameSignature,
  CompatiblePlans,
  DifferentSignature,
  IncompatiblePlans,
  MassMismatch,
  IntegralMismatch,
};

std::string_view to_string(ConnectivityReason r);

/// gamma+ and gamma-, both over (support of a) x (support of b).
struct SignedPlans {
  Coupling positive;
  Coupling negative;
};

struct ConnectivityResult {
  bool connected = false;
  ConnectivityReason reason = ConnectivityReason::DifferentSignature;
  std::optional<TransportKernel> kernel;
  std::optional<SignedPlans> plans;
  /// Cycle showing gamma+ and gamma- are not c-CM compatible.
  std::optional<CcmWitness> witness;
  /// max_x |aK(x) - b(x)| for a connecting kernel.
  double residual = 0.0;
};

struct ConnectOptions {
  /// Relative tolerance for mass, integral and signature comparisons.
  double tol = 1e-9;
  CcmOptions ccm;
};

/// Monotone-coupling construction between |a| and |b| when the signatures
/// match. Requires a convex cost of y - x (any built-in kind).
ConnectivityResult connect_1d(const SignedDiscreteMeasure& a, const SignedDiscreteMeasure& b,
                              const CostSpec& spec, const ConnectOptions& options = {});

/// Optimal plans between the Jordan parts, then a compatibility check of
/// their union. max_len defaults to the whole union support (complete
/// check); a shorter max_len that finds no violation raises
/// Error(CertificateOverflow) rather than claiming a connection. An explicit
/// cost table is indexed by the canonical atoms of a (rows) and b (columns).
ConnectivityResult connect_general(const SignedDiscreteMeasure& a, const SignedDiscreteMeasure& b,
                                   const CostSpec& spec,
                                   std::optional<std::size_t> max_len = std::nullopt,
                                   const ConnectOptions& options = {});

/// Cost of gamma+ + gamma-. Throws Error(NotConnected) for a failed result.
double signed_transport_cost(const ConnectivityResult& result, const CostTable& table);
double signed_transport_cost(const ConnectivityResult& result, const CostSpec& spec);

}  // namespace otk
