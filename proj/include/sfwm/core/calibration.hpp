#pragma once

#include "sfwm/core/types.hpp"

namespace sfwm::core
{
struct EtaAlphaCalibration
{
    double eta_alpha = 1.0;
    double lossless_coincidences = 0.0;  // predicted C at eta_alpha = 1
    double pair_rate = 0.0;
    double delta_nu = 0.0;
};

// Inverts C = sigma eta_a^2 eta^2 eta0 eta1 r for eta_a. Throws
// CalibrationError when the measurement exceeds the lossless prediction.
EtaAlphaCalibration calibrate_eta_alpha(double measured_coincidences, SourceConfig const& cfg);

struct RamanCalibration
{
    double noise_rate0 = 0.0;  // r_n0
    double noise_rate1 = 0.0;
    double rho0 = 0.0;  // at ch0 detuning
    double rho1 = 0.0;  // at ch1 detuning
    double detuning0 = 0.0;
    double detuning1 = 0.0;
};

// Inverts the singles equations for the Raman rates with eta_alpha fixed
// (from cfg), then for rho at each channel detuning. Residual pump leakage
// is subtracted along with SFWM and darks. Throws CalibrationError when a
// measured rate is below its SFWM + dark floor.
RamanCalibration calibrate_raman(double measured_n0, double measured_n1, SourceConfig const& cfg);

// Rescales each side of the Raman table so it passes through the
// calibrated values, keeping the tabulated shape. A side whose current
// value at the channel is zero gets a single point inserted instead.
NoiseModel apply_raman_calibration(NoiseModel const& noise, RamanCalibration const& cal);

struct Calibration
{
    EtaAlphaCalibration eta_alpha;
    RamanCalibration raman;
    SourceConfig calibrated;
};

// eta_alpha from C, then Raman from N0/N1 with that eta_alpha.
Calibration calibrate(double measured_c, double measured_n0, double measured_n1, SourceConfig const& cfg);

} // namespace sfwm::core
