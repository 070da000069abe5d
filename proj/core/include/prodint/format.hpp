#pragma once

#include <string>

namespace prodint {

// printf-style %.<precision>g; "inf"/"nan" spelled out. Deterministic across
// runs, which the CSV writers rely on.
std::string format_number(double x, int precision = 12);

}  // namespace prodint
