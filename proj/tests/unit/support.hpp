#pragma once

#include <cmath>
#include <filesystem>
#include <string>

#include "sfwm/config/config.hpp"
#include "sfwm/core/types.hpp"

namespace sfwm::test
{
inline double rel(double actual, double expected)
{
    if (expected == 0.0)
    {
        return std::abs(actual);
    }
    return std::abs(actual - expected) / std::abs(expected);
}

inline std::filesystem::path source_dir()
{
    return SFWM_SOURCE_DIR;
}

inline config::ExperimentConfig shipped(std::string const& name)
{
    return config::load_config(source_dir() / "configs" / (name + ".json"));
}

// Measured device with every efficiency 1 and all noise and darks removed.
inline core::SourceConfig ideal_source()
{
    auto cfg = config::paper_defaults().source();
    cfg.waveguide.prop_loss_db_per_cm = 0.0;
    cfg.coupling.total_insertion_loss_db = 0.0;
    for (auto* ch : {&cfg.ch0, &cfg.ch1})
    {
        ch->filter_loss_db = 0.0;
        ch->detector_qe = 1.0;
        ch->dark_rate = 0.0;
    }
    cfg.noise.raman = core::RamanTable({{-20e12, 0.0}, {20e12, 0.0}});
    double const inf = INFINITY;
    cfg.noise.leakage = {inf, 0.0, inf};
    return cfg;
}

inline core::SourceConfig pulsed(core::SourceConfig cfg, double tau, double rate)
{
    cfg.pump.mode = core::Pulsed{tau, rate};
    return cfg;
}

} // namespace sfwm::test
