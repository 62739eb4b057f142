#include "sfwm/sim/pairs.hpp"

#include "sfwm/core/model.hpp"
#include "sfwm/core/noise.hpp"
#include "sfwm/sim/rng.hpp"

namespace sfwm::sim
{
namespace
{
enum : std::uint64_t
{
    kPairsBoth = 11,
    kPairsStartOnly = 12,
    kPairsStopOnly = 13,
    kPairsEmitted = 14,
    kNoiseStart = 15,
    kNoiseStop = 16,
    kDetectStart = 17,
    kDetectStop = 18,
};

// Emission-side process: gated to pulse windows when the pump is pulsed.
EventStream source_stream(core::PumpConfig const& pump, double rate, double duration, std::uint64_t seed)
{
    if (auto const* p = std::get_if<core::Pulsed>(&pump.mode))
    {
        return pulsed_stream(rate, p->pulse_width_s, p->rep_rate_hz, duration, seed);
    }
    return poisson_stream(rate, duration, seed);
}
} // namespace

ArmSurvival pair_survival(core::SourceConfig const& cfg)
{
    double const common = cfg.waveguide.eta_alpha() * core::coupling_budget(cfg.waveguide, cfg.coupling).output_eta;
    return {common * cfg.ch0.efficiency(), common * cfg.ch1.efficiency()};
}

PairStreams make_pair_streams(core::SourceConfig const& cfg, PairStreamOptions const& options,
                              double duration, std::uint64_t seed)
{
    cfg.validate();
    auto const& wg = cfg.waveguide;
    auto const& pump = cfg.pump;
    double const r = core::pair_generation_rate(wg, pump, cfg.ch0.detuning_hz,
                                                core::pair_bandwidth(cfg.ch0, cfg.ch1));
    auto const p = pair_survival(cfg);
    double const eta = core::coupling_budget(wg, cfg.coupling).output_eta;

    EventStream start_photons;
    EventStream stop_photons;
    if (options.sampling == PairSampling::split)
    {
        auto both = source_stream(pump, r * p.start * p.stop, duration, derive_seed(seed, kPairsBoth));
        auto start_only = source_stream(pump, r * p.start * (1.0 - p.stop), duration,
                                        derive_seed(seed, kPairsStartOnly));
        auto stop_only = source_stream(pump, r * (1.0 - p.start) * p.stop, duration,
                                       derive_seed(seed, kPairsStopOnly));
        start_photons = merge(both, start_only);
        stop_photons = merge(both, stop_only);
    }
    else
    {
        auto emitted = source_stream(pump, r, duration, derive_seed(seed, kPairsEmitted));
        std::uint64_t const thin_seed = derive_seed(seed, kPairsEmitted, 1);
        start_photons = detect(emitted, {p.start, 0.0, 0.0, 0.0}, derive_seed(thin_seed, 0));
        stop_photons = detect(emitted, {p.stop, 0.0, 0.0, 0.0}, derive_seed(thin_seed, 1));
    }

    auto noise_rate = [&](core::DetectionChannel const& ch) {
        return eta * ch.efficiency()
               * (core::raman_noise_rate(cfg.noise, ch, pump, wg) + core::pump_leakage_rate(cfg.noise, ch, pump));
    };
    start_photons = merge(start_photons, source_stream(pump, noise_rate(cfg.ch0), duration,
                                                       derive_seed(seed, kNoiseStart)));
    stop_photons = merge(stop_photons, source_stream(pump, noise_rate(cfg.ch1), duration,
                                                     derive_seed(seed, kNoiseStop)));

    // The delay line sits in front of detector-1.
    stop_photons = shifted(stop_photons, options.stop_delay);

    PairStreams out;
    out.start = detect(start_photons, {1.0, cfg.ch0.jitter_fwhm_s, cfg.ch0.dark_rate, cfg.ch0.dead_time_s},
                       derive_seed(seed, kDetectStart));
    out.stop = detect(stop_photons, {1.0, cfg.ch1.jitter_fwhm_s, cfg.ch1.dark_rate, cfg.ch1.dead_time_s},
                      derive_seed(seed, kDetectStop));
    out.start.label = "detector0";
    out.stop.label = "detector1";
    return out;
}

} // namespace sfwm::sim
