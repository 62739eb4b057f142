#pragma once

#include <string>

namespace sfwm
{
// Shortest decimal string that parses back to the same double
// ("inf", "-inf", "nan" for non-finite values).
std::string format_double(double value);

} // namespace sfwm
