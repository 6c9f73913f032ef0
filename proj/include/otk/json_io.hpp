#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "otk/cost.hpp"
#include "otk/coupling.hpp"
#include "otk/kernel.hpp"
#include "otk/measure.hpp"
#include "otk/signed.hpp"

namespace otk::io {

using nlohmann::json;

/// Throws Error(IoError) when the file cannot be read and Error(ParseError)
/// when it is not JSON.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Serialize with every float printed as %.17g; arrays of scalars stay on
/// one line.
std::string dump(const json& j);

// Readers throw Error(ParseError) on schema problems. Domain validation
// (negative masses, non-finite values) raises the usual domain codes.
SignedDiscreteMeasure signed_measure_from_json(const json& j);
DiscreteMeasure measure_from_json(const json& j);
Coupling coupling_from_json(const json& j);
TransportKernel kernel_from_json(const json& j);
CostTable cost_table_from_json(const json& j);

/// "sqeuclidean", "power:<p>", "convex1d:<abs|square|quartic|cosh>" or
/// "table:<path.json>".
CostSpec parse_cost_spec(const std::string& text);

json to_json(const SignedDiscreteMeasure& m);
json to_json(const DiscreteMeasure& m);
json to_json(const Coupling& g);
json to_json(const TransportKernel& k);
json to_json(const CostTable& t);
json to_json(const CcmWitness& w);
json to_json(const CcmReport& r);
json to_json(const Signature& s);
json to_json(const ConnectivityResult& r);

/// Positive cells as "src_index,tgt_index,mass" lines under a header.
std::string plan_to_csv(const Coupling& g);
std::string measure_to_csv(const SignedDiscreteMeasure& m);
std::string signature_to_csv(const Signature& s);
std::string table_to_csv(const CostTable& t);

}  // namespace otk::io
