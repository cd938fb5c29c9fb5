#pragma once

#include <string>

namespace bwe {

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

/// Fixed notation with `digits` decimals.
std::string format_fixed(double value, int digits);

}  // namespace bwe
