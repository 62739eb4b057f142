#include "sfwm/core/units.hpp"

#include <cmath>
#include <string>

#include "sfwm/core/errors.hpp"

namespace sfwm::units
{
namespace
{
// ps nm^-1 km^-1 -> s m^-2
constexpr double kDispersionToSi = 1e-12 / (1e-9 * 1e3);

void require_positive(double value, char const* what)
{
    if (!(value > 0.0))
    {
        throw ConfigError(std::string(what) + " must be positive, got " + std::to_string(value));
    }
}
} // namespace

double db_to_linear(double loss_db)
{
    return std::pow(10.0, -loss_db / 10.0);
}

double linear_to_db(double fraction)
{
    require_positive(fraction, "linear fraction");
    return -10.0 * std::log10(fraction);
}

double wavelength_to_frequency(double wavelength_m)
{
    require_positive(wavelength_m, "wavelength");
    return kSpeedOfLight / wavelength_m;
}

double frequency_to_wavelength(double frequency_hz)
{
    require_positive(frequency_hz, "frequency");
    return kSpeedOfLight / frequency_hz;
}

double wavelength_width_to_bandwidth(double width_m, double center_wavelength_m)
{
    require_positive(center_wavelength_m, "center wavelength");
    return kSpeedOfLight * width_m / (center_wavelength_m * center_wavelength_m);
}

double gamma_from_n2(double n2_m2_per_w, double a_eff_m2, double wavelength_m)
{
    if (n2_m2_per_w < 0.0)
    {
        throw ConfigError("n2 must be non-negative");
    }
    require_positive(a_eff_m2, "effective mode area");
    require_positive(wavelength_m, "wavelength");
    return 2.0 * kPi * n2_m2_per_w / (wavelength_m * a_eff_m2);
}

double beta2_from_dispersion(double d_ps_per_nm_km, double wavelength_m)
{
    require_positive(wavelength_m, "wavelength");
    double const d_si = d_ps_per_nm_km * kDispersionToSi;
    return -d_si * wavelength_m * wavelength_m / (2.0 * kPi * kSpeedOfLight);
}

double dispersion_from_beta2(double beta2_s2_per_m, double wavelength_m)
{
    require_positive(wavelength_m, "wavelength");
    double const d_si = -beta2_s2_per_m * 2.0 * kPi * kSpeedOfLight / (wavelength_m * wavelength_m);
    return d_si / kDispersionToSi;
}

double db_per_cm_to_neper_per_m(double loss_db_per_cm)
{
    return loss_db_per_cm * 100.0 * std::log(10.0) / 10.0;
}

} // namespace sfwm::units
