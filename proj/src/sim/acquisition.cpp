#include "sfwm/sim/acquisition.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "sfwm/core/errors.hpp"
#include "sfwm/format.hpp"
#include "sfwm/sim/rng.hpp"

namespace sfwm::sim
{
namespace
{
struct SegmentResult
{
    std::vector<HistogramResult> histograms;
    std::uint64_t start_events = 0;
    std::uint64_t stop_events = 0;
};
} // namespace

AcquisitionResult simulate_acquisition(core::SourceConfig const& cfg, std::vector<TiaConfig> const& tias,
                                       AcquisitionOptions const& options)
{
    cfg.validate();
    if (tias.empty())
    {
        throw ConfigError("at least one TIA configuration is required");
    }
    if (!(options.duration >= 0.0) || !(options.segment_length > 0.0))
    {
        throw ConfigError("duration must be >= 0 and segment length > 0");
    }

    // The inserted stop-arm delay is part of the TIA setup; all
    // histograms share one pair of streams, so it must agree.
    auto pairs = options.pairs;
    pairs.stop_delay = tias.front().stop_delay;
    for (auto const& tia : tias)
    {
        if (tia.stop_delay != pairs.stop_delay)
        {
            throw ConfigError("all TIA configurations of one acquisition need the same stop delay");
        }
    }

    AcquisitionResult out;
    out.duration = options.duration;
    for (auto const& tia : tias)
    {
        out.histograms.push_back(empty_histogram(tia));
    }

    auto const segments = static_cast<std::size_t>(std::ceil(options.duration / options.segment_length));
    std::vector<SegmentResult> results(segments);

    auto run_segment = [&](std::size_t k) {
        double const begin = static_cast<double>(k) * options.segment_length;
        double const length = std::min(options.segment_length, options.duration - begin);
        auto streams = make_pair_streams(cfg, pairs, length, derive_seed(options.seed, 0, k));
        SegmentResult seg;
        seg.start_events = streams.start.size();
        seg.stop_events = streams.stop.size();
        for (auto const& tia : tias)
        {
            seg.histograms.push_back(tia_histogram(streams.start, streams.stop, tia));
        }
        results[k] = std::move(seg);
    };

    unsigned workers = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(segments, 1)));
    if (workers <= 1)
    {
        for (std::size_t k = 0; k < segments; ++k)
        {
            run_segment(k);
        }
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
        {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < segments; k = next++)
                {
                    try
                    {
                        run_segment(k);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(failure_mutex);
                        failure = std::current_exception();
                    }
                }
            });
        }
        pool.clear();
        if (failure)
        {
            std::rethrow_exception(failure);
        }
    }

    // Merged in segment order; counts are integers so the sum is exact anyway.
    for (auto const& seg : results)
    {
        out.start_events += seg.start_events;
        out.stop_events += seg.stop_events;
        for (std::size_t i = 0; i < tias.size(); ++i)
        {
            out.histograms[i].accumulate(seg.histograms[i]);
        }
    }
    for (auto& h : out.histograms)
    {
        h.acquisition_time = options.duration;
        h.metadata["seed"] = std::to_string(options.seed);
        h.metadata["rng"] = std::string(kRngAlgorithm);
        h.metadata["segment_length_s"] = format_double(options.segment_length);
        h.metadata["pair_sampling"] = options.pairs.sampling == PairSampling::split ? "split" : "thin";
    }
    return out;
}

} // namespace sfwm::sim
