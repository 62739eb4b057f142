#include "sfwm/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfwm/core/errors.hpp"
#include "sfwm/core/model.hpp"
#include "sfwm/core/units.hpp"

namespace sfwm::core
{
namespace
{
void require(bool ok, std::string const& message)
{
    if (!ok)
    {
        throw ConfigError(message);
    }
}

bool finite(double x)
{
    return std::isfinite(x);
}
} // namespace

double WaveguideSpec::alpha() const
{
    return units::db_per_cm_to_neper_per_m(prop_loss_db_per_cm);
}

double WaveguideSpec::effective_length() const
{
    return core::effective_length(alpha(), length_m);
}

double WaveguideSpec::analytic_eta_alpha() const
{
    return core::eta_alpha_analytic(alpha(), length_m);
}

double WaveguideSpec::eta_alpha() const
{
    return calibrated_eta_alpha ? *calibrated_eta_alpha : analytic_eta_alpha();
}

void WaveguideSpec::validate() const
{
    require(finite(length_m) && length_m > 0.0, "waveguide length must be > 0");
    require(finite(prop_loss_db_per_cm) && prop_loss_db_per_cm >= 0.0,
            "propagation loss must be >= 0");
    require(finite(gamma) && gamma > 0.0, "nonlinear coefficient gamma must be > 0");
    require(finite(beta2), "beta2 must be finite");
    if (calibrated_eta_alpha)
    {
        double const v = *calibrated_eta_alpha;
        require(finite(v) && v > 0.0 && v <= 1.0, "calibrated eta_alpha must be in (0, 1]");
    }
}

Pulsed const& PumpConfig::pulse() const
{
    if (auto const* p = std::get_if<Pulsed>(&mode))
    {
        return *p;
    }
    throw ConfigError("pump is continuous-wave; a pulsed pump is required");
}

double PumpConfig::duty_cycle() const
{
    if (auto const* p = std::get_if<Pulsed>(&mode))
    {
        return p->pulse_width_s * p->rep_rate_hz;
    }
    return 1.0;
}

void PumpConfig::validate() const
{
    require(finite(frequency_hz) && frequency_hz > 0.0, "pump frequency must be > 0");
    require(finite(power_w) && power_w >= 0.0, "pump power must be >= 0");
    if (auto const* p = std::get_if<Pulsed>(&mode))
    {
        require(p->pulse_width_s > 0.0 && p->rep_rate_hz > 0.0,
                "pulse width and repetition rate must be > 0");
        double const sigma = p->pulse_width_s * p->rep_rate_hz;
        require(sigma > 0.0 && sigma <= 1.0, "duty cycle tau*B must be in (0, 1], got " + std::to_string(sigma));
    }
}

double DetectionChannel::efficiency() const
{
    return detector_qe * units::db_to_linear(filter_loss_db);
}

void DetectionChannel::validate() const
{
    require(finite(detuning_hz), "channel detuning must be finite");
    require(finite(bandwidth_hz) && bandwidth_hz > 0.0, "channel bandwidth must be > 0");
    require(finite(filter_loss_db) && filter_loss_db >= 0.0, "filter loss must be >= 0 dB");
    require(finite(detector_qe) && detector_qe > 0.0 && detector_qe <= 1.0,
            "detector efficiency must be in (0, 1]");
    double const eta = efficiency();
    require(eta > 0.0 && eta <= 1.0, "collection efficiency must be in (0, 1]");
    require(finite(dark_rate) && dark_rate >= 0.0, "dark rate must be >= 0");
    require(finite(jitter_fwhm_s) && jitter_fwhm_s >= 0.0, "jitter must be >= 0");
    require(finite(dead_time_s) && dead_time_s >= 0.0, "dead time must be >= 0");
}

void CouplingSpec::validate() const
{
    require(finite(total_insertion_loss_db) && total_insertion_loss_db >= 0.0,
            "insertion loss must be >= 0 dB");
    require(facet_split >= 0.0 && facet_split <= 1.0, "facet split must be in [0, 1]");
    require(output_scale > 0.0 && output_scale <= 1.0, "output coupling scale must be in (0, 1]");
}

RamanTable::RamanTable(std::vector<RamanPoint> points)
    : points_(std::move(points))
{
    std::sort(points_.begin(), points_.end(),
              [](RamanPoint const& a, RamanPoint const& b) { return a.detuning_hz < b.detuning_hz; });
    for (std::size_t i = 0; i < points_.size(); ++i)
    {
        require(finite(points_[i].detuning_hz) && finite(points_[i].rho), "Raman table entries must be finite");
        require(points_[i].rho >= 0.0, "Raman coefficient rho must be >= 0");
        if (i > 0)
        {
            require(points_[i].detuning_hz > points_[i - 1].detuning_hz,
                    "Raman table detunings must be distinct");
        }
    }
}

bool RamanTable::covers(double detuning_hz) const
{
    return !points_.empty() && detuning_hz >= points_.front().detuning_hz
           && detuning_hz <= points_.back().detuning_hz;
}

double RamanTable::at(double detuning_hz) const
{
    if (!covers(detuning_hz))
    {
        throw ExtrapolationError("detuning " + std::to_string(detuning_hz * 1e-12)
                                 + " THz is outside the Raman table");
    }
    auto const hi = std::lower_bound(points_.begin(), points_.end(), detuning_hz,
                                     [](RamanPoint const& p, double v) { return p.detuning_hz < v; });
    if (hi->detuning_hz == detuning_hz)
    {
        return hi->rho;
    }
    auto const lo = hi - 1;
    double const w = (detuning_hz - lo->detuning_hz) / (hi->detuning_hz - lo->detuning_hz);
    return lo->rho + w * (hi->rho - lo->rho);
}

RamanTable RamanTable::scaled_side(bool stokes_side, double factor) const
{
    require(factor >= 0.0 && finite(factor), "Raman scale factor must be finite and >= 0");
    auto pts = points_;
    for (auto& p : pts)
    {
        if ((p.detuning_hz < 0.0) == stokes_side && p.detuning_hz != 0.0)
        {
            p.rho *= factor;
        }
    }
    return RamanTable(std::move(pts));
}

RamanTable RamanTable::with_point(double detuning_hz, double rho) const
{
    auto pts = points_;
    auto it = std::find_if(pts.begin(), pts.end(),
                           [&](RamanPoint const& p) { return p.detuning_hz == detuning_hz; });
    if (it != pts.end())
    {
        it->rho = rho;
    }
    else
    {
        pts.push_back({detuning_hz, rho});
    }
    return RamanTable(std::move(pts));
}

double PumpLeakage::rejection_db(double detuning_hz) const
{
    double const rising = rejection_at_zero_db + slope_db_per_hz * std::abs(detuning_hz);
    return std::min(floor_db, rising);
}

void PumpLeakage::validate() const
{
    require(rejection_at_zero_db >= 0.0, "pump rejection at zero detuning must be >= 0 dB");
    require(slope_db_per_hz >= 0.0, "pump rejection slope must be >= 0");
    require(floor_db >= rejection_at_zero_db, "pump rejection floor must be >= rejection at zero detuning");
}

void NoiseModel::validate() const
{
    require(finite(temperature_k) && temperature_k > 0.0, "temperature must be > 0 K");
    leakage.validate();
}

void SourceConfig::validate() const
{
    waveguide.validate();
    pump.validate();
    coupling.validate();
    ch0.validate();
    ch1.validate();
    noise.validate();
    require(ch0.detuning_hz != 0.0 && ch1.detuning_hz != 0.0, "channel detuning must be nonzero");
    require((ch0.detuning_hz < 0.0) != (ch1.detuning_hz < 0.0),
            "the two channels must sit on opposite sides of the pump");
    double const mismatch = std::abs(std::abs(ch0.detuning_hz) - std::abs(ch1.detuning_hz));
    require(mismatch <= 1e-9 * std::abs(ch0.detuning_hz),
            "the two channels must have equal-magnitude detuning");
    // Throws when the insertion loss cannot cover propagation loss.
    (void)coupling_budget(waveguide, coupling);
}

} // namespace sfwm::core
