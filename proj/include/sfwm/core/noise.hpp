#pragma once

#include "sfwm/core/types.hpp"

namespace sfwm::core
{
// Bose-Einstein phonon occupancy 1/(exp(h nu / kT) - 1). nu = 0 is rejected.
double thermal_occupancy(double frequency_hz, double temperature_k);

// n_th + 1 on the Stokes (red) side, n_th on the anti-Stokes side.
double raman_occupancy(double detuning_hz, double temperature_k);

// Spontaneous Raman photons into the channel passband, referenced to the
// generation point like r: rho(nu) dnu P L_eff occ. Linear in pump power.
double raman_noise_rate(NoiseModel const& noise, DetectionChannel const& ch,
                        PumpConfig const& pump, WaveguideSpec const& wg);

// Pump photons per second, P / (h nu_pump).
double pump_photon_flux(PumpConfig const& pump);

// Residual pump transmitted into the channel: flux * 10^(-rejection/10).
double pump_leakage_rate(NoiseModel const& noise, DetectionChannel const& ch,
                         PumpConfig const& pump);

} // namespace sfwm::core
