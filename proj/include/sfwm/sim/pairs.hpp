#pragma once

#include <cstdint>

#include "sfwm/core/types.hpp"
#include "sfwm/sim/stream.hpp"

namespace sfwm::sim
{
enum class PairSampling
{
    // Sample the per-arm thinned pair processes directly: pairs detected in
    // both arms, start only, and stop only are independent Poisson
    // processes (Poisson colouring). Same law as thin, but cost scales with
    // detected events instead of emitted pairs.
    split,
    // Generate every emitted pair and thin each arm with Bernoulli trials.
    thin,
};

struct PairStreamOptions
{
    double stop_delay = 0.0;  // inserted delay in the stop arm
    PairSampling sampling = PairSampling::split;
};

struct PairStreams
{
    EventStream start;
    EventStream stop;
};

// Per-photon survival of a pair member reaching detector i:
// eta_alpha * eta_out * eta_i.
struct ArmSurvival
{
    double start = 0.0;
    double stop = 0.0;
};
ArmSurvival pair_survival(core::SourceConfig const& cfg);

// Detector timestamp streams for both arms. Pair emissions occur at rate
// r (in-pulse, gated to pulse windows when pulsed); noise photons at
// eta eta_i (r_ni + leakage_i) while the pump is on; darks at d_i. Rates
// converge to core::predict_observables.
PairStreams make_pair_streams(core::SourceConfig const& cfg, PairStreamOptions const& options,
                              double duration, std::uint64_t seed);

} // namespace sfwm::sim
