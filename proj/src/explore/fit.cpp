#include "sfwm/explore/fit.hpp"

#include <cmath>

#include "sfwm/core/errors.hpp"

namespace sfwm::explore
{
FitResult fit_power_law(std::vector<double> const& x, std::vector<double> const& y)
{
    if (x.size() != y.size())
    {
        throw ConfigError("power-law fit needs equal-length x and y");
    }
    if (x.size() < 3)
    {
        throw ConfigError("power-law fit needs at least 3 points");
    }
    std::size_t const n = x.size();
    std::vector<double> lx(n);
    std::vector<double> ly(n);
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!(x[i] > 0.0 && y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
        {
            throw ConfigError("power-law fit needs finite x, y > 0");
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0))
    {
        throw ConfigError("power-law fit needs at least two distinct x values");
    }
    FitResult fit;
    fit.exponent = sxy / sxx;
    double const intercept = my - fit.exponent * mx;
    fit.coefficient = std::exp(intercept);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        double const e = ly[i] - (intercept + fit.exponent * lx[i]);
        ss += e * e;
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(n));
    fit.points = n;
    return fit;
}

} // namespace sfwm::explore
