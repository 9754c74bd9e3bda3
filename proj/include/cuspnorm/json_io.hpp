#pragma once

// JSON (and harness CSV) encodings of the result types. Integers that fit in
// 64 bits are JSON numbers, larger ones decimal strings; rationals are "p/q"
// strings and reals are decimal strings at the reporting precision.

#include <string>

#include <json.hpp>

#include "cuspnorm/bounds.hpp"
#include "cuspnorm/conjugation.hpp"
#include "cuspnorm/counting.hpp"
#include "cuspnorm/cusps.hpp"
#include "cuspnorm/harness.hpp"
#include "cuspnorm/hecke.hpp"

namespace cuspnorm::json_io {

using json = nlohmann::ordered_json;

json to_json(const Integer& n);
json to_json(const Rational& q);
json to_json(const Real& r);
json to_json(const Mat2& m);
json to_json(const PointH& z);

/// Every from_json throws Error(ParseError) on a malformed document.
Integer integer_from_json(const json& j);
Rational rational_from_json(const json& j);
Mat2 mat_from_json(const json& j);
PointH point_from_json(const json& j);

json cusps_to_json(std::int64_t N, const std::vector<CuspClass>& cusps);
std::vector<CuspClass> cusps_from_json(const json& j);

json to_json(const GapVerdict& g);
json to_json(const ReductionCertificate& r);
json to_json(const GapReduction& r);
GapVerdict gap_from_json(const json& j);
/// The reported choice of a reduction: sigma, W, M, z, z' and the gap verdict.
GapReduction reduction_from_json(const json& j);

json to_json(const ParabolicCertificate& p);
json to_json(const CountReport& r);
CountReport count_from_json(const json& j);

json to_json(const CosetTable& t);
CosetTable coset_table_from_json(const json& j);
json to_json(const ConjugationVerdict& v);

json to_json(const HarnessRow& r);
json to_json(const HarnessResult& r);
HarnessRow harness_row_from_json(const json& j);
/// Rows, skips and the summary; the config is restored from its JSON echo.
HarnessResult harness_from_json(const json& j);
/// Versioned comment line, then lemma,N,M,L_or_Lambda,delta,x,y,lhs,rhs,ratio.
std::string harness_csv(const HarnessResult& r);
inline constexpr const char* kCsvVersionLine = "# cuspnorm harness csv v1";

json to_json(const ExponentVector& v);
ExponentVector exponent_from_json(const json& j);
json to_json(const PiecewiseLinear& f);
PiecewiseLinear pl_from_json(const json& j);
json to_json(const DerivationReport& r);
DerivationReport derivation_from_json(const json& j);

}  // namespace cuspnorm::json_io
