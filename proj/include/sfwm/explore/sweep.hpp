#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sfwm/config/config.hpp"
#include "sfwm/core/types.hpp"

namespace sfwm::explore
{
enum class Spacing
{
    linear,
    log,
};

struct SweepSpec
{
    std::string path;  // dot-addressed numeric field of the config document
    std::vector<double> values;

    // Non-empty, finite, strictly increasing or strictly decreasing.
    void validate() const;
};

// Inclusive grid from lo to hi. count = 1 requires lo == hi.
std::vector<double> spaced_values(double lo, double hi, std::size_t count, Spacing spacing);

// "a,b,c" or "min:max[:count[:lin|log]]" (count defaults to 11, spacing to lin).
std::vector<double> parse_values(std::string_view spec);

struct CurveRow
{
    double param = 0.0;
    core::Prediction prediction;
};

struct CurveResult
{
    std::string param_name;
    std::string config_hash;
    std::vector<CurveRow> rows;
    std::map<std::string, std::string> metadata;

    std::vector<double> params() const;
    std::vector<double> coincidences() const;
    std::vector<double> cars() const;
};

// Model evaluated at each value with everything else frozen.
CurveResult sweep(config::ExperimentConfig const& cfg, SweepSpec const& spec);

} // namespace sfwm::explore
