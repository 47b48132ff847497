#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kdv/branch.hpp"
#include "kdv/directions.hpp"
#include "kdv/engine.hpp"
#include "kdv/oracle.hpp"
#include "kdv/semimodule.hpp"

namespace kdv {

using Json = nlohmann::ordered_json;

// Curve files: {"n": int, "terms": [[exponent, "p/q"], ...]}
Json branch_to_json(const Branch& b);
Branch branch_from_json(const Json& j);
Branch load_branch_file(const std::string& path);

Json curve_to_json(const ParamCurve& c);

Json value_to_json(const Value& v);

Json trace_to_json(const StageTrace& trace);
Json basis_report_json(const Branch& b, const CxBasis& basis,
                       const std::vector<FormReport>* reports);
Json directions_to_json(const std::vector<DirectionReport>& reports);
Json classification_to_json(const CxBasis& basis, const std::vector<FormReport>& reports);
Json oracle_comparison_json(const OracleComparison& cmp);

} // namespace kdv
