#ifndef TRANSQUAD_SPEC_IO_HPP
#define TRANSQUAD_SPEC_IO_HPP

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "transquad/impulsive.hpp"
#include "transquad/transfinite_sum.hpp"

namespace transquad {

/// Family from a JSON spec:
///   {"index": <set spec>, "values": "<expr>", "space": {"kind": ..., "dim": n}}
/// The value expression may use the digit variables n0, n1, ..., `n` for the
/// deepest digit, and the 1-based coordinate index `i`.
Family family_from_spec(const nlohmann::json& spec);

/// Step mapping: a family spec plus an optional "terminal" value.
StepMapping step_from_spec(const nlohmann::json& spec);

/// Regulated mapping from {"eval": "<expr in t, i>", "a": .., "b": ..,
/// "space": {...}, "bound": optional}. No oscillation oracle is attached, so
/// downstream results are sampling-based and flagged uncertified.
RegulatedMapping regulated_from_spec(const nlohmann::json& spec);

/// Impulsive problem with a state-independent right-hand side:
///   {"base": <regulated spec or null>, "impulses": <family spec>, ...}
ImpulsiveProblem impulsive_from_spec(const nlohmann::json& spec);

nlohmann::json summability_to_json(const SummabilityReport& rep);
nlohmann::json verdict_to_json(const IntegrabilityVerdict& v);
const char* tri_name(Tri t);

/// CSV writers (deterministic %.17g formatting).
void write_partial_sum_csv(std::ostream& os, const PartialSumTable& table);
void write_trajectory_csv(std::ostream& os, const std::vector<double>& ts,
                          const std::vector<VectorValue>& vs,
                          const std::vector<double>& residuals, const std::string& tag = "");
void write_knots_csv(std::ostream& os, const OscPartition& p);
std::string format_double(double v);

} // namespace transquad

#endif
