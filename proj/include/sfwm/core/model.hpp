#pragma once

#include "sfwm/core/types.hpp"

namespace sfwm::core
{
// (1 - exp(-alpha L)) / alpha, continuous at alpha = 0.
double effective_length(double alpha_np_per_m, double length_m);

// Mean survival of a photon generated uniformly along the guide: L_eff / L.
double eta_alpha_analytic(double alpha_np_per_m, double length_m);

// Splits a measured insertion loss into propagation and facet losses.
// Throws ConfigError when the total is below the propagation loss.
CouplingBudget coupling_from_insertion(double total_db, double prop_loss_db_per_cm,
                                       double length_m, double facet_split);
CouplingBudget coupling_budget(WaveguideSpec const& wg, CouplingSpec const& coupling);

// Unnormalized sinc, sin(x)/x with sinc(0) = 1.
double sinc(double x);

// beta2 (2 pi nu)^2 L / 2 + gamma P L
double phase_mismatch(WaveguideSpec const& wg, PumpConfig const& pump, double detuning_hz);

// SFWM pair generation rate into a passband of width bandwidth_hz at
// detuning nu: dnu (gamma P L_eff)^2 sinc^2(phase_mismatch).
double pair_generation_rate(WaveguideSpec const& wg, PumpConfig const& pump,
                            double detuning_hz, double bandwidth_hz);
double pair_generation_rate(WaveguideSpec const& wg, PumpConfig const& pump,
                            DetectionChannel const& ch);

// A pair needs both photons in band: min of the two passbands.
double pair_bandwidth(DetectionChannel const& ch0, DetectionChannel const& ch1);

// Full rate/noise/CAR model. In binned mode A = N0 N1 window; in gated
// mode (pulsed only) A = N0 N1 / B and window is ignored.
Prediction predict_observables(SourceConfig const& cfg, double window_s, AccidentalMode mode);

} // namespace sfwm::core
