#include "sfwm/explore/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sfwm/core/errors.hpp"
#include "sfwm/core/model.hpp"
#include "sfwm/explore/pulsed.hpp"
#include "sfwm/explore/sweep.hpp"

namespace sfwm::explore
{
core::SourceConfig apply_design(core::SourceConfig cfg, std::vector<std::string> const& names,
                                std::vector<double> const& x)
{
    if (names.size() != x.size())
    {
        throw ConfigError("design vector and names differ in length");
    }
    for (std::size_t i = 0; i < names.size(); ++i)
    {
        auto const& n = names[i];
        if (n == "detuning_hz")
        {
            cfg.ch0.detuning_hz = std::copysign(x[i], cfg.ch0.detuning_hz);
            cfg.ch1.detuning_hz = std::copysign(x[i], cfg.ch1.detuning_hz);
        }
        else if (n == "peak_power_w")
        {
            cfg.pump.power_w = x[i];
        }
        else if (n == "pulse_width_s" || n == "rep_rate_hz")
        {
            if (!cfg.pump.is_pulsed())
            {
                throw ConfigError(n + " is only a design parameter for a pulsed pump");
            }
            auto p = cfg.pump.pulse();
            (n == "pulse_width_s" ? p.pulse_width_s : p.rep_rate_hz) = x[i];
            cfg.pump.mode = p;
        }
        else
        {
            throw ConfigError("unknown design parameter " + n);
        }
    }
    return cfg;
}

DesignResult optimize_car(config::ExperimentConfig const& cfg, DesignBounds const& bounds,
                          DesignConstraint const& constraint, OptimizeOptions const& options)
{
    auto const& src = cfg.source();
    auto const& analysis = cfg.analysis();
    if (constraint.kind == ConstraintKind::min_pairs_per_pulse && !src.pump.is_pulsed())
    {
        throw ConfigError("a pairs-per-pulse constraint needs a pulsed pump");
    }
    if (options.grid_points < 2 || !(options.tolerance > 0.0))
    {
        throw ConfigError("optimizer needs grid_points >= 2 and tolerance > 0");
    }

    DesignResult out;
    std::vector<Interval> box;
    auto add = [&](char const* name, std::optional<Interval> const& b) {
        if (!b)
        {
            return;
        }
        if (!(b->lo <= b->hi) || !(b->lo > 0.0) || !std::isfinite(b->hi))
        {
            throw ConfigError(std::string("bounds for ") + name + " must satisfy 0 < lo <= hi");
        }
        out.names.emplace_back(name);
        box.push_back(*b);
    };
    add("detuning_hz", bounds.detuning_hz);
    add("pulse_width_s", bounds.pulse_width_s);
    add("rep_rate_hz", bounds.rep_rate_hz);
    add("peak_power_w", bounds.peak_power_w);
    if (box.empty())
    {
        throw ConfigError("optimizer needs at least one bounded parameter");
    }
    std::size_t const dims = box.size();

    auto evaluate = [&](std::vector<double> const& x) {
        TracePoint tp;
        tp.x = x;
        auto const c = apply_design(src, out.names, x);
        if (c.pump.is_pulsed() && c.pump.duty_cycle() > 1.0)
        {
            tp.car = std::numeric_limits<double>::quiet_NaN();
            out.trace.push_back(tp);
            return tp;
        }
        auto const p = core::predict_observables(c, analysis.window_s, analysis.accidental_mode);
        tp.car = p.obs.CAR;
        tp.coincidences = p.obs.C;
        tp.mu = c.pump.is_pulsed() ? p.obs.r * c.pump.pulse().pulse_width_s
                                   : std::numeric_limits<double>::quiet_NaN();
        double const achieved = constraint.kind == ConstraintKind::min_pairs_per_pulse ? tp.mu : tp.coincidences;
        tp.feasible = std::isfinite(tp.car) && achieved >= constraint.value;
        out.trace.push_back(tp);
        return tp;
    };

    std::vector<std::vector<double>> axes;
    for (auto const& b : box)
    {
        axes.push_back(b.lo == b.hi ? std::vector<double>{b.lo}
                                    : spaced_values(b.lo, b.hi, options.grid_points, Spacing::linear));
    }

    std::optional<TracePoint> best;
    std::vector<std::size_t> idx(dims, 0);
    while (true)
    {
        std::vector<double> x(dims);
        for (std::size_t d = 0; d < dims; ++d)
        {
            x[d] = axes[d][idx[d]];
        }
        auto const tp = evaluate(x);
        if (tp.feasible && (!best || tp.car > best->car))
        {
            best = tp;
        }
        std::size_t d = 0;
        while (d < dims && ++idx[d] == axes[d].size())
        {
            idx[d] = 0;
            ++d;
        }
        if (d == dims)
        {
            break;
        }
    }
    if (!best)
    {
        throw ConfigError("no grid point satisfies the constraint inside the bounds");
    }

    std::vector<double> step(dims);
    for (std::size_t d = 0; d < dims; ++d)
    {
        step[d] = (box[d].hi - box[d].lo) / static_cast<double>(options.grid_points - 1);
    }
    auto active = [&](std::size_t d) {
        return step[d] > options.tolerance * std::abs(best->x[d]);
    };
    while (out.trace.size() < options.max_evaluations)
    {
        bool any_active = false;
        bool improved = false;
        for (std::size_t d = 0; d < dims && !improved; ++d)
        {
            if (!active(d))
            {
                continue;
            }
            any_active = true;
            for (double dir : {1.0, -1.0})
            {
                auto x = best->x;
                x[d] = std::clamp(x[d] + dir * step[d], box[d].lo, box[d].hi);
                if (x[d] == best->x[d])
                {
                    continue;
                }
                auto const tp = evaluate(x);
                if (tp.feasible && tp.car > best->car)
                {
                    best = tp;
                    improved = true;
                    break;
                }
            }
        }
        if (!any_active)
        {
            break;
        }
        if (!improved)
        {
            for (auto& s : step)
            {
                s *= 0.5;
            }
        }
    }

    out.best = best->x;
    out.car = best->car;
    out.mu = best->mu;
    out.coincidences = best->coincidences;
    return out;
}

} // namespace sfwm::explore
