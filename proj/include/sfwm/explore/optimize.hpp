#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfwm/config/config.hpp"

namespace sfwm::explore
{
struct Interval
{
    double lo = 0.0;
    double hi = 0.0;
};

// Free parameters; unset ones stay at their configured value. SI units.
struct DesignBounds
{
    std::optional<Interval> detuning_hz;
    std::optional<Interval> pulse_width_s;
    std::optional<Interval> rep_rate_hz;
    std::optional<Interval> peak_power_w;
};

enum class ConstraintKind
{
    min_pairs_per_pulse,
    min_coincidences,
};

struct DesignConstraint
{
    ConstraintKind kind = ConstraintKind::min_pairs_per_pulse;
    double value = 0.0;
};

struct OptimizeOptions
{
    std::size_t grid_points = 9;  // per free dimension
    double tolerance = 1e-3;      // relative step at which refinement stops
    std::size_t max_evaluations = 100000;
};

struct TracePoint
{
    std::vector<double> x;
    double car = 0.0;
    double mu = 0.0;
    double coincidences = 0.0;
    bool feasible = false;
};

struct DesignResult
{
    std::vector<std::string> names;  // e.g. detuning_hz, peak_power_w
    std::vector<double> best;
    double car = 0.0;
    double mu = 0.0;
    double coincidences = 0.0;
    std::vector<TracePoint> trace;
};

// Source with the named design parameters overwritten.
core::SourceConfig apply_design(core::SourceConfig cfg, std::vector<std::string> const& names,
                                std::vector<double> const& x);

// Grid scan, then coordinate descent from the best feasible grid point.
// Throws ConfigError when no grid point satisfies the constraint.
DesignResult optimize_car(config::ExperimentConfig const& cfg, DesignBounds const& bounds,
                          DesignConstraint const& constraint, OptimizeOptions const& options = {});

} // namespace sfwm::explore
