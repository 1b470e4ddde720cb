#pragma once
#include <string>

#include <nlohmann/json.hpp>

namespace gnat {

// Canonical serialization: object keys sorted, floating-point values as "%.12e", integers and
// strings verbatim, non-finite floats as the strings "nan", "inf", "-inf". Identical values give
// byte-identical text.
std::string canonical_dump(const nlohmann::json& j, int indent = 2);

// "%.12e" formatting of one value.
std::string format_float(double x);

// 64-bit FNV-1a of the canonical compact serialization, as 16 hex digits.
std::string config_hash(const nlohmann::json& j);

// A float stored so that canonical_dump prints it in fixed scientific form; NaN/inf become strings.
nlohmann::json jnum(double x);

}  // namespace gnat
