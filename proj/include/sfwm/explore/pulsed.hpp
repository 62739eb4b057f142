#pragma once

#include <vector>

#include "sfwm/config/config.hpp"
#include "sfwm/explore/sweep.hpp"

namespace sfwm::explore
{
// Pairs generated per pulse, r * tau at the configured peak power.
double pairs_per_pulse(core::SourceConfig const& cfg);

// Peak power at which r * tau = mu, on the branch where r still rises
// with power (below the first turnover of P sinc). Throws NumericalError
// when mu lies above that turnover.
double power_for_pairs_per_pulse(core::SourceConfig const& cfg, double mu);

// CAR and the other observables against pairs per pulse; param = mu.
CurveResult car_vs_mu(config::ExperimentConfig const& cfg, std::vector<double> const& mus,
                      core::AccidentalMode mode);

// Sweep of channels.detuning_THz; param in THz. Detunings outside the
// Raman table raise ExtrapolationError.
CurveResult car_vs_detuning(config::ExperimentConfig const& cfg, std::vector<double> const& detunings_thz);

struct WindowCalibration
{
    double scale = 1.0;  // applied to rho at both channel detunings
    double rho0 = 0.0;
    double rho1 = 0.0;
    double car = 0.0;
    double car_bound = 0.0;  // CAR with the Raman term removed at the channels
    config::ExperimentConfig config;
};

// Scales the Raman table entries at the two channel detunings until the
// CAR at mu reaches target_car. Throws CalibrationError, naming the
// bound, when the target is above the noise-free CAR.
WindowCalibration calibrate_window(config::ExperimentConfig const& cfg, double target_car, double mu,
                                   core::AccidentalMode mode);

} // namespace sfwm::explore
