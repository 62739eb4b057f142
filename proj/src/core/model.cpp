#include "sfwm/core/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sfwm/core/errors.hpp"
#include "sfwm/core/noise.hpp"
#include "sfwm/core/units.hpp"

namespace sfwm::core
{
double effective_length(double alpha_np_per_m, double length_m)
{
    double const x = alpha_np_per_m * length_m;
    if (x == 0.0)
    {
        return length_m;
    }
    // -expm1(-x)/alpha keeps full precision for small alpha L.
    return -std::expm1(-x) / alpha_np_per_m;
}

double eta_alpha_analytic(double alpha_np_per_m, double length_m)
{
    if (!(length_m > 0.0))
    {
        throw ConfigError("waveguide length must be > 0");
    }
    return effective_length(alpha_np_per_m, length_m) / length_m;
}

CouplingBudget coupling_from_insertion(double total_db, double prop_loss_db_per_cm,
                                       double length_m, double facet_split)
{
    double const propagation_db = prop_loss_db_per_cm * length_m * 100.0;
    if (total_db < propagation_db)
    {
        throw ConfigError("insertion loss " + std::to_string(total_db)
                          + " dB is less than the propagation loss " + std::to_string(propagation_db) + " dB");
    }
    if (facet_split < 0.0 || facet_split > 1.0)
    {
        throw ConfigError("facet split must be in [0, 1]");
    }
    double const facets_db = total_db - propagation_db;
    CouplingBudget b;
    b.propagation_loss_db = propagation_db;
    b.input_loss_db = facet_split * facets_db;
    b.output_loss_db = facets_db - b.input_loss_db;
    // Rounding can leave input + output + propagation one ulp off the total,
    // and nudging a single term does not always reach it. Search a few ulps
    // around each nonzero term for a bit-exact split.
    auto const offsets = [](double v, int reach) {
        std::vector<double> out{v};
        if (v == 0.0)
        {
            return out;
        }
        double up = v;
        double down = v;
        for (int i = 0; i < reach; ++i)
        {
            up = std::nextafter(up, INFINITY);
            down = std::nextafter(down, -INFINITY);
            out.push_back(up);
            out.push_back(down);
        }
        return out;
    };
    bool found = b.input_loss_db + b.output_loss_db + b.propagation_loss_db == total_db;
    for (double prop : offsets(propagation_db, 4))
    {
        for (double in : offsets(b.input_loss_db, 4))
        {
            for (double outl : offsets(b.output_loss_db, 8))
            {
                if (!found && in + outl + prop == total_db)
                {
                    b.propagation_loss_db = prop;
                    b.input_loss_db = in;
                    b.output_loss_db = outl;
                    found = true;
                }
            }
        }
    }
    b.input_eta = units::db_to_linear(b.input_loss_db);
    b.output_eta = units::db_to_linear(b.output_loss_db);
    return b;
}

CouplingBudget coupling_budget(WaveguideSpec const& wg, CouplingSpec const& coupling)
{
    auto b = coupling_from_insertion(coupling.total_insertion_loss_db, wg.prop_loss_db_per_cm,
                                     wg.length_m, coupling.facet_split);
    b.output_eta *= coupling.output_scale;
    return b;
}

double sinc(double x)
{
    if (std::abs(x) < 1e-8)
    {
        return 1.0 - x * x / 6.0;
    }
    return std::sin(x) / x;
}

double phase_mismatch(WaveguideSpec const& wg, PumpConfig const& pump, double detuning_hz)
{
    double const omega = 2.0 * units::kPi * detuning_hz;
    return wg.beta2 * omega * omega * wg.length_m / 2.0 + wg.gamma * pump.power_w * wg.length_m;
}

double pair_generation_rate(WaveguideSpec const& wg, PumpConfig const& pump,
                            double detuning_hz, double bandwidth_hz)
{
    double const gain = wg.gamma * pump.power_w * wg.effective_length();
    double const s = sinc(phase_mismatch(wg, pump, std::abs(detuning_hz)));
    return bandwidth_hz * gain * gain * s * s;
}

double pair_generation_rate(WaveguideSpec const& wg, PumpConfig const& pump,
                            DetectionChannel const& ch)
{
    return pair_generation_rate(wg, pump, ch.detuning_hz, ch.bandwidth_hz);
}

double pair_bandwidth(DetectionChannel const& ch0, DetectionChannel const& ch1)
{
    return std::min(ch0.bandwidth_hz, ch1.bandwidth_hz);
}

Prediction predict_observables(SourceConfig const& cfg, double window_s, AccidentalMode mode)
{
    cfg.validate();
    if (mode == AccidentalMode::gated && !cfg.pump.is_pulsed())
    {
        throw ConfigError("gated accidentals require a pulsed pump");
    }
    if (mode == AccidentalMode::binned && !(window_s > 0.0))
    {
        throw ConfigError("coincidence window must be > 0");
    }

    auto const& wg = cfg.waveguide;
    Prediction p;
    p.sigma = cfg.pump.duty_cycle();
    p.eta_alpha = wg.eta_alpha();
    p.eta_alpha_analytic = wg.analytic_eta_alpha();
    p.eta_alpha_calibrated = wg.calibrated_eta_alpha.has_value();
    p.eta_out = coupling_budget(wg, cfg.coupling).output_eta;
    p.delta_nu = pair_bandwidth(cfg.ch0, cfg.ch1);
    p.pump_power_w = cfg.pump.power_w;

    double const r = pair_generation_rate(wg, cfg.pump, cfg.ch0.detuning_hz, p.delta_nu);
    double const eta0 = cfg.ch0.efficiency();
    double const eta1 = cfg.ch1.efficiency();
    double const sigma = p.sigma;
    double const eta = p.eta_out;
    double const ea = p.eta_alpha;

    p.raman_rate0 = raman_noise_rate(cfg.noise, cfg.ch0, cfg.pump, wg);
    p.raman_rate1 = raman_noise_rate(cfg.noise, cfg.ch1, cfg.pump, wg);
    double const leak0 = pump_leakage_rate(cfg.noise, cfg.ch0, cfg.pump);
    double const leak1 = pump_leakage_rate(cfg.noise, cfg.ch1, cfg.pump);

    p.singles0 = {sigma * eta * eta0 * ea * r, sigma * eta * eta0 * p.raman_rate0,
                  sigma * eta * eta0 * leak0, cfg.ch0.dark_rate};
    p.singles1 = {sigma * eta * eta1 * ea * r, sigma * eta * eta1 * p.raman_rate1,
                  sigma * eta * eta1 * leak1, cfg.ch1.dark_rate};

    auto& o = p.obs;
    o.r = r;
    o.C = sigma * ea * ea * eta * eta * eta0 * eta1 * r;
    o.N0 = p.singles0.total();
    o.N1 = p.singles1.total();
    o.t = mode == AccidentalMode::gated ? 1.0 / cfg.pump.pulse().rep_rate_hz : window_s;
    o.A = o.N0 * o.N1 * o.t;
    o.CAR = o.A > 0.0 ? o.C / o.A : std::numeric_limits<double>::quiet_NaN();
    return p;
}

} // namespace sfwm::core
