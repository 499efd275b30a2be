#pragma once

// JSON function-specification documents. One document declares one function:
//
//   {"kind": "orderstat-polynomial", "arity": 2,
//    "terms": [{"coef": "1/2", "exponents": [1, 0]}], "constant": 0}
//   {"kind": "plain-polynomial", "arity": 2, "terms": [...], "constant": 0}
//   {"kind": "set-function", "arity": 2, "values": [0, "1/2", "1/2", 1]}
//   {"kind": "multiplicative", "arity": 2,
//    "factors": [{"type": "power", "scale": 1, "exponent": 0.5},
//                {"type": "polynomial", "coefficients": [0, 1]}]}
//   {"kind": "multiplicative", "arity": 3, "factor": {"type": "power", "exponent": 2}}
//   {"kind": "power-product", "arity": 3, "exponent": "1/3"}
//   {"kind": "builtin", "name": "variance", "arity": 4}
//
// Numbers may be JSON numbers or strings holding a rational ("3/7") or an
// exact decimal ("0.25", "1e-3"). Set-function values are in bitmask order,
// bit i-1 set <=> element i in the subset.

#include <string>
#include <string_view>

#include <json.hpp>

#include "osinf/function_spec.hpp"

namespace osinf {

// Throws SpecError with a location such as "$.terms[1].exponents".
FunctionSpec parse_function_spec(const nlohmann::json& document);
FunctionSpec parse_function_spec(std::string_view text);
inline FunctionSpec parse_function_spec(const char* text) { return parse_function_spec(std::string_view(text)); }
FunctionSpec load_function_spec(const std::string& path);

// Canonical JSON of a spec (used as the report echo). Black boxes other than
// builtins have no document form and throw ConfigurationError.
nlohmann::json function_spec_to_json(const FunctionSpec& f);

}  // namespace osinf
