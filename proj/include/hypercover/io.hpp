#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hypercover/certify.hpp"
#include "hypercover/covering_ilp.hpp"
#include "hypercover/hypergraph.hpp"
#include "hypercover/protocol.hpp"
#include "hypercover/trace.hpp"

namespace hypercover::io {

using json = nlohmann::ordered_json;

// Instances: JSON {vertices:[{id, weight}], edges:[[id, ...]]}, or the text
// form with lines "p hvc n m", "w v weight", "e v1 v2 ...", "c comment"
// (text ids are 1..n; vertices without a "w" line get weight 1).

RawInstance instance_from_json(const json& j);
json instance_to_json(const Hypergraph& h);
RawInstance instance_from_text(std::string_view text);
std::string instance_to_text(const Hypergraph& h);

/// Picks the format from the first non-blank character ('{' means JSON).
/// Throws Error{BadInput} for unreadable or malformed files.
Hypergraph load_instance(const std::string& path);
Hypergraph parse_instance(std::string_view text);

json params_to_json(const ProtocolParams& p);
ProtocolParams params_from_json(const json& j);

/// Cover as vertex ids, rationals as "num/den" strings.
json run_result_to_json(const Hypergraph& h, const RunResult& r);
json certificate_to_json(const Hypergraph& h, const certify::Certificate& c);
json audit_to_json(const certify::AuditReport& report);

/// Trace as JSON lines: a header, one record per round, a summary.
void write_trace(std::ostream& out, const Hypergraph& h, const ProtocolParams& params,
                 const RunTrace& trace);

struct ParsedTrace {
  ProtocolParams params;
  RunTrace trace;
};
ParsedTrace read_trace(std::istream& in);

// Covering programs: {rows:[{coeffs:{var:num}, b}], weights:{var:num}}.
// Numbers may be JSON numbers or "num/den" / decimal strings. Variables
// are ordered by first appearance in "weights", then in the rows.
ilp::CoveringILP ilp_from_json(const json& j);
json ilp_to_json(const ilp::CoveringILP& p);
ilp::CoveringILP load_ilp(const std::string& path);
json ilp_solution_to_json(const ilp::CoveringILP& p, const ilp::IlpSolution& s);

/// Parses a JSON number or string as an exact rational.
Rational rational_from_json(const json& j);
std::string read_file(const std::string& path);

}  // namespace hypercover::io
