#pragma once

#include <vector>

namespace sfwm::explore
{
// y = coefficient * x^exponent, least squares in (ln x, ln y).
struct FitResult
{
    double exponent = 0.0;
    double coefficient = 0.0;
    double residual_rms = 0.0;  // in ln y
    std::size_t points = 0;
};

// Needs at least 3 points, all x and y > 0, and two distinct x.
FitResult fit_power_law(std::vector<double> const& x, std::vector<double> const& y);

} // namespace sfwm::explore
