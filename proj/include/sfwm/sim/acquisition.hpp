#pragma once

#include <cstdint>
#include <vector>

#include "sfwm/core/types.hpp"
#include "sfwm/sim/pairs.hpp"
#include "sfwm/sim/tia.hpp"

namespace sfwm::sim
{
struct AcquisitionOptions
{
    double duration = 1.0;
    std::uint64_t seed = 0;
    // Streams are generated and histogrammed one segment at a time, each
    // from its own derived seed, so memory stays bounded. Delays across a
    // segment boundary are lost (fraction ~ max_delay / segment_length).
    double segment_length = 0.5;
    // 0 = hardware concurrency. Results do not depend on this.
    unsigned threads = 0;
    // pairs.stop_delay is ignored; the TIA configs' stop_delay is used.
    PairStreamOptions pairs;
};

struct AcquisitionResult
{
    // One histogram per requested TIA configuration, all built from the
    // same detection streams.
    std::vector<HistogramResult> histograms;
    std::uint64_t start_events = 0;
    std::uint64_t stop_events = 0;
    double duration = 0.0;

    double start_rate() const { return duration > 0.0 ? static_cast<double>(start_events) / duration : 0.0; }
    double stop_rate() const { return duration > 0.0 ? static_cast<double>(stop_events) / duration : 0.0; }
};

AcquisitionResult simulate_acquisition(core::SourceConfig const& cfg, std::vector<TiaConfig> const& tias,
                                       AcquisitionOptions const& options);

} // namespace sfwm::sim
