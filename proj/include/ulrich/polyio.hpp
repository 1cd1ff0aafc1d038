#pragma once

#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "ulrich/poly.hpp"

namespace ulrich {

// Grammar (whitespace insignificant):
//   expr    = [ "+" | "-" ] term { ( "+" | "-" ) term }
//   term    = factor { ( "*" | "/" ) factor }
//   factor  = primary [ "^" integer ]
//   primary = integer | identifier | "zeta" | "(" expr ")"
// Division is only allowed by a nonzero constant. `zeta` denotes the
// primitive D-th root of unity of the ring's field and needs D > 1.
MultiPoly parse_poly(std::string_view text, const Ring& ring);

// Identifiers in order of first appearance, excluding `zeta`.
std::vector<std::string> scan_variables(std::string_view text);

nlohmann::json poly_to_json(const MultiPoly& p);
MultiPoly poly_from_json(const nlohmann::json& j);

nlohmann::json rational_to_json(const Rational& q);
Rational rational_from_json(const nlohmann::json& j);

}  // namespace ulrich
