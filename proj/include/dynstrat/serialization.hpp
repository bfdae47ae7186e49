#pragma once

#include <json.hpp>

#include "dynstrat/analytics.hpp"
#include "dynstrat/costs.hpp"
#include "dynstrat/estimators.hpp"
#include "dynstrat/montecarlo.hpp"
#include "dynstrat/process.hpp"
#include "dynstrat/signals.hpp"
#include "dynstrat/standard_errors.hpp"

namespace dynstrat {

using json = nlohmann::json;

// {"kind": "ar", "sigma": 1.0, "ar": [0.5], "ma": []}
ReturnProcess process_from_json(const json& j);
json process_to_json(const ReturnProcess& p);

// {"kind": "ewma", "lambda": 0.9, "k": 200}; "k" may be "auto".
FilterSpec filter_spec_from_json(const json& j);
json filter_spec_to_json(const FilterSpec& s);
json filter_to_json(const ConvolutionFilter& f);

json to_json(const StrategyStats& s);
json to_json(const ShapeStats& s);
json to_json(const QuadraticFormMoments& q);
json to_json(const StderrReport& r);
json to_json(const EmpiricalMoments& m);
json to_json(const CoverageResult& c);
json to_json(const CcaResult& c);
json to_json(const OptimizeResult& r);

json read_json_file(const std::string& path);

}  // namespace dynstrat
