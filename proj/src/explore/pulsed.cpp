#include "sfwm/explore/pulsed.hpp"

#include <cmath>
#include <string>

#include "sfwm/core/errors.hpp"
#include "sfwm/core/model.hpp"
#include "sfwm/format.hpp"

namespace sfwm::explore
{
namespace
{
double mu_at(core::SourceConfig const& cfg, double power_w)
{
    auto pump = cfg.pump;
    pump.power_w = power_w;
    double const r = core::pair_generation_rate(cfg.waveguide, pump, cfg.ch0.detuning_hz,
                                                core::pair_bandwidth(cfg.ch0, cfg.ch1));
    return r * pump.pulse().pulse_width_s;
}

core::SourceConfig at_power(core::SourceConfig cfg, double power_w)
{
    cfg.pump.power_w = power_w;
    return cfg;
}
} // namespace

double pairs_per_pulse(core::SourceConfig const& cfg)
{
    return mu_at(cfg, cfg.pump.power_w);
}

double power_for_pairs_per_pulse(core::SourceConfig const& cfg, double mu)
{
    if (!(mu > 0.0) || !std::isfinite(mu))
    {
        throw ConfigError("pairs per pulse must be > 0");
    }
    (void)cfg.pump.pulse();
    cfg.waveguide.validate();
    double const gl = cfg.waveguide.gamma * cfg.waveguide.length_m;
    if (!(gl > 0.0))
    {
        throw NumericalError("no pair generation with gamma = 0");
    }

    // Walk up in power. Steps are capped so the nonlinear phase advances
    // by at most 0.05 rad, which cannot jump over a lobe of the sinc.
    double const max_phase_step = 0.05 / gl;
    double lo = 1e-12;
    double f_lo = mu_at(cfg, lo);
    if (f_lo >= mu)
    {
        // bisect down toward zero; r is quadratic there
        double hi = lo;
        lo = 0.0;
        for (int i = 0; i < 400 && (hi - lo) > 1e-12 * hi; ++i)
        {
            double const mid = 0.5 * (lo + hi);
            (mu_at(cfg, mid) < mu ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    double hi = lo;
    double f_hi = f_lo;
    for (int step = 0;; ++step)
    {
        double const next = std::min(2.0 * hi, hi + max_phase_step);
        double const f_next = mu_at(cfg, next);
        if (f_next <= f_hi || step > 1000000)
        {
            throw NumericalError("pairs per pulse " + format_double(mu) +
                                 " is above the maximum on the rising branch (" + format_double(f_hi) +
                                 " at " + format_double(hi) + " W peak)");
        }
        lo = hi;
        f_lo = f_hi;
        hi = next;
        f_hi = f_next;
        if (f_hi >= mu)
        {
            break;
        }
    }
    for (int i = 0; i < 400 && (hi - lo) > 1e-12 * hi; ++i)
    {
        double const mid = 0.5 * (lo + hi);
        (mu_at(cfg, mid) < mu ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

CurveResult car_vs_mu(config::ExperimentConfig const& cfg, std::vector<double> const& mus,
                      core::AccidentalMode mode)
{
    SweepSpec spec{"pairs_per_pulse", mus};
    spec.validate();
    auto const& src = cfg.source();
    if (!src.pump.is_pulsed())
    {
        throw ConfigError("CAR against pairs per pulse needs a pulsed pump");
    }
    CurveResult out;
    out.param_name = "pairs_per_pulse";
    out.config_hash = cfg.hash();
    out.metadata["accidental_mode"] = config::accidental_mode_name(mode);
    out.metadata["pulse_width_s"] = format_double(src.pump.pulse().pulse_width_s);
    out.metadata["rep_rate_hz"] = format_double(src.pump.pulse().rep_rate_hz);
    for (double mu : mus)
    {
        double const p = power_for_pairs_per_pulse(src, mu);
        out.rows.push_back({mu, core::predict_observables(at_power(src, p), cfg.analysis().window_s, mode)});
    }
    return out;
}

CurveResult car_vs_detuning(config::ExperimentConfig const& cfg, std::vector<double> const& detunings_thz)
{
    for (double v : detunings_thz)
    {
        if (!(v > 0.0))
        {
            throw ConfigError("detunings must be > 0");
        }
    }
    return sweep(cfg, {"channels.detuning_THz", detunings_thz});
}

WindowCalibration calibrate_window(config::ExperimentConfig const& cfg, double target_car, double mu,
                                   core::AccidentalMode mode)
{
    if (!(target_car > 0.0) || !std::isfinite(target_car))
    {
        throw ConfigError("target CAR must be > 0");
    }
    auto const& src = cfg.source();
    double const power = power_for_pairs_per_pulse(src, mu);
    double const window = cfg.analysis().window_s;
    double const nu0 = src.ch0.detuning_hz;
    double const nu1 = src.ch1.detuning_hz;
    auto const& table = src.noise.raman;
    double const base0 = table.at(nu0);
    double const base1 = table.at(nu1);

    auto scaled = [&](double s) {
        return table.with_point(nu0, base0 * s).with_point(nu1, base1 * s);
    };
    auto car_at = [&](double s) {
        auto c = at_power(src, power);
        c.noise.raman = scaled(s);
        return core::predict_observables(c, window, mode).obs.CAR;
    };

    double const bound = car_at(0.0);
    if (!(target_car < bound))
    {
        throw CalibrationError("target CAR " + format_double(target_car) +
                               " is not below the bound " + format_double(bound) +
                               " reached with zero Raman noise at the channel detunings");
    }
    if (!(base0 > 0.0 || base1 > 0.0))
    {
        throw CalibrationError("Raman table is zero at both channel detunings; nothing to scale");
    }

    double lo = 0.0;
    double hi = 1.0;
    while (car_at(hi) > target_car)
    {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e30)
        {
            throw NumericalError("window calibration did not bracket the target CAR");
        }
    }
    for (int i = 0; i < 400 && (hi - lo) > 1e-14 * hi; ++i)
    {
        double const mid = 0.5 * (lo + hi);
        (car_at(mid) > target_car ? lo : hi) = mid;
    }
    double const s = 0.5 * (lo + hi);

    WindowCalibration out{s, base0 * s, base1 * s, car_at(s), bound,
                          cfg.with_raman_table(scaled(s), "calibrated+window")};
    return out;
}

} // namespace sfwm::explore
