#include "sfwm/core/calibration.hpp"

#include <cmath>
#include <sstream>

#include "sfwm/core/errors.hpp"
#include "sfwm/core/model.hpp"
#include "sfwm/core/noise.hpp"

namespace sfwm::core
{
EtaAlphaCalibration calibrate_eta_alpha(double measured_coincidences, SourceConfig const& cfg)
{
    cfg.validate();
    if (!(measured_coincidences > 0.0))
    {
        throw ConfigError("measured coincidence rate must be > 0");
    }
    EtaAlphaCalibration out;
    out.delta_nu = pair_bandwidth(cfg.ch0, cfg.ch1);
    out.pair_rate = pair_generation_rate(cfg.waveguide, cfg.pump, cfg.ch0.detuning_hz, out.delta_nu);
    double const eta = coupling_budget(cfg.waveguide, cfg.coupling).output_eta;
    out.lossless_coincidences = cfg.pump.duty_cycle() * eta * eta * cfg.ch0.efficiency()
                                * cfg.ch1.efficiency() * out.pair_rate;
    if (measured_coincidences > out.lossless_coincidences)
    {
        std::ostringstream msg;
        msg << "measured coincidence rate " << measured_coincidences
            << " s^-1 exceeds the lossless (eta_alpha = 1) bound " << out.lossless_coincidences << " s^-1";
        throw CalibrationError(msg.str());
    }
    out.eta_alpha = std::sqrt(measured_coincidences / out.lossless_coincidences);
    return out;
}

RamanCalibration calibrate_raman(double measured_n0, double measured_n1, SourceConfig const& cfg)
{
    cfg.validate();
    auto const& wg = cfg.waveguide;
    double const sigma = cfg.pump.duty_cycle();
    double const eta = coupling_budget(wg, cfg.coupling).output_eta;
    double const r = pair_generation_rate(wg, cfg.pump, cfg.ch0.detuning_hz, pair_bandwidth(cfg.ch0, cfg.ch1));
    double const ea = wg.eta_alpha();
    double const leff = wg.effective_length();

    auto solve = [&](double measured, DetectionChannel const& ch, char const* name, double& rate, double& rho) {
        double const chain = sigma * eta * ch.efficiency();
        double const leak = pump_leakage_rate(cfg.noise, ch, cfg.pump);
        double const floor = ch.dark_rate + chain * (ea * r + leak);
        if (measured < floor)
        {
            std::ostringstream msg;
            msg << "measured singles " << name << " = " << measured
                << " s^-1 is below the SFWM + dark floor " << floor << " s^-1";
            throw CalibrationError(msg.str());
        }
        rate = (measured - ch.dark_rate) / chain - ea * r - leak;
        rate = std::max(rate, 0.0);
        double const denom = ch.bandwidth_hz * cfg.pump.power_w * leff
                             * raman_occupancy(ch.detuning_hz, cfg.noise.temperature_k);
        if (!(denom > 0.0))
        {
            throw CalibrationError("Raman calibration needs a positive pump power");
        }
        rho = rate / denom;
    };

    RamanCalibration out;
    out.detuning0 = cfg.ch0.detuning_hz;
    out.detuning1 = cfg.ch1.detuning_hz;
    solve(measured_n0, cfg.ch0, "N0", out.noise_rate0, out.rho0);
    solve(measured_n1, cfg.ch1, "N1", out.noise_rate1, out.rho1);
    return out;
}

NoiseModel apply_raman_calibration(NoiseModel const& noise, RamanCalibration const& cal)
{
    NoiseModel out = noise;
    auto set_side = [&](double detuning, double rho) {
        double const current = out.raman.covers(detuning) ? out.raman.at(detuning) : 0.0;
        if (current > 0.0)
        {
            out.raman = out.raman.scaled_side(detuning < 0.0, rho / current);
            // Rescaling interpolated values can leave a last-ulp residue.
            out.raman = out.raman.with_point(detuning, rho);
        }
        else
        {
            out.raman = out.raman.with_point(detuning, rho);
        }
    };
    set_side(cal.detuning0, cal.rho0);
    set_side(cal.detuning1, cal.rho1);
    return out;
}

Calibration calibrate(double measured_c, double measured_n0, double measured_n1, SourceConfig const& cfg)
{
    Calibration out;
    out.eta_alpha = calibrate_eta_alpha(measured_c, cfg);
    out.calibrated = cfg;
    out.calibrated.waveguide.calibrated_eta_alpha = out.eta_alpha.eta_alpha;
    out.raman = calibrate_raman(measured_n0, measured_n1, out.calibrated);
    out.calibrated.noise = apply_raman_calibration(out.calibrated.noise, out.raman);
    return out;
}

} // namespace sfwm::core
