#pragma once

#include <json.hpp>

#include "pshift/construct.hpp"
#include "pshift/criterion.hpp"
#include "pshift/dynamics.hpp"
#include "pshift/family.hpp"
#include "pshift/pseudo_shift.hpp"
#include "pshift/report.hpp"

// JSON documents shared by the library and the CLI. Objects use sorted keys;
// non-finite numbers are written as the strings "inf", "-inf" and "nan".
// Parsers throw SchemaError on malformed input.
namespace pshift::json {

using Json = nlohmann::json;

Json number(double v);
double get_number(const Json& j, const char* key);

/// A number when exactly representable as a normal double, else text such as
/// "0x1.8p-4000" (hex mantissa, decimal binary exponent).
Json coefficient(const ExtReal& c);
ExtReal coefficient_from_json(const Json& j, const std::string& where);

/// [[index, coefficient], ...]
Json to_json(const SupportedVector& v);
SupportedVector vector_from_json(const Json& j);

Json to_json(const InducingMap& map);
InducingMap map_from_json(const Json& j);

Json to_json(const WeightRule& rule);
WeightRule weights_from_json(const Json& j);

Json to_json(const PseudoShift& shift);
PseudoShift shift_from_json(const Json& j);

/// Array of operator descriptions, or an object with an "operators" array.
Json to_json(std::span<const PseudoShift> shifts);
std::vector<PseudoShift> shifts_from_json(const Json& j);

/// {"M", "coefficients"} or {"vectors"[, "M"]}.
Json to_json(const TargetFamily& targets);
TargetFamily targets_from_json(const Json& j);

Json to_json(const FamilyParams& params);
FamilyParams family_params_from_json(const Json& j);

Json to_json(const FamilyConstants& c);

Json to_json(const WitnessCertificate& cert);
WitnessCertificate certificate_from_json(const Json& j);

Json to_json(const NoWitness& none);

Json to_json(const ScheduleCertificate& cert);
ScheduleCertificate schedule_from_json(const Json& j);
Json to_json(const ScheduleFailure& failure);

Json to_json(const DensityEstimate& est);
Json to_json(const VerificationReport& report);

/// Sorted keys; floats in the shortest form that parses back to the same double.
std::string dump(const Json& j, bool pretty);

}  // namespace pshift::json
