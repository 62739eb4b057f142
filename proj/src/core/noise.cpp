#include "sfwm/core/noise.hpp"

#include <cmath>

#include "sfwm/core/errors.hpp"
#include "sfwm/core/units.hpp"

namespace sfwm::core
{
double thermal_occupancy(double frequency_hz, double temperature_k)
{
    if (!(frequency_hz > 0.0))
    {
        throw ConfigError("thermal occupancy needs a positive frequency (diverges at 0)");
    }
    if (!(temperature_k > 0.0))
    {
        throw ConfigError("temperature must be > 0 K");
    }
    double const x = units::kPlanck * frequency_hz / (units::kBoltzmann * temperature_k);
    return 1.0 / std::expm1(x);
}

double raman_occupancy(double detuning_hz, double temperature_k)
{
    double const n = thermal_occupancy(std::abs(detuning_hz), temperature_k);
    return detuning_hz < 0.0 ? n + 1.0 : n;
}

double raman_noise_rate(NoiseModel const& noise, DetectionChannel const& ch,
                        PumpConfig const& pump, WaveguideSpec const& wg)
{
    if (ch.detuning_hz == 0.0)
    {
        throw ConfigError("Raman noise needs a nonzero channel detuning");
    }
    double const rho = noise.raman.at(ch.detuning_hz);
    double const occ = raman_occupancy(ch.detuning_hz, noise.temperature_k);
    return rho * ch.bandwidth_hz * pump.power_w * wg.effective_length() * occ;
}

double pump_photon_flux(PumpConfig const& pump)
{
    return pump.power_w / (units::kPlanck * pump.frequency_hz);
}

double pump_leakage_rate(NoiseModel const& noise, DetectionChannel const& ch,
                         PumpConfig const& pump)
{
    return pump_photon_flux(pump) * units::db_to_linear(noise.leakage.rejection_db(ch.detuning_hz));
}

} // namespace sfwm::core
