#pragma once

#include <string>

#include <json.hpp>

#include "debtcrit/errors.hpp"

namespace debtcrit::app {

using Json = nlohmann::json;

/// Canonical JSON: keys sorted, two-space indent, floats at 17 significant
/// digits (always carrying a '.' or exponent), non-finite numbers as null.
/// Parsing the output and dumping it again reproduces the same bytes.
std::string to_canonical_json(const Json& value);

/// One "path = value" line per leaf, paths in canonical key order, numbers
/// formatted exactly as in to_canonical_json.
std::string to_text(const Json& value);

/// %.17g with a trailing ".0" when the result would otherwise read as an integer.
std::string format_double(double x);

Json to_json(const Warning& w);
Json to_json(const Warnings& ws);

/// Fresh report skeleton with every top-level key present and null.
Json empty_report();

}  // namespace debtcrit::app
