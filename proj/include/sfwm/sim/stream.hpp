#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sfwm::sim
{
// Sorted detection (or emission) times in seconds, all within [0, duration).
struct EventStream
{
    std::vector<double> timestamps;
    double duration = 0.0;
    std::string label;

    std::size_t size() const { return timestamps.size(); }
    bool empty() const { return timestamps.empty(); }
    // Throws ConfigError if unsorted or out of range.
    void validate() const;
};

// Homogeneous Poisson process by exponential inter-arrival sampling.
EventStream poisson_stream(double rate, double duration, std::uint64_t seed, std::string label = {});

// Poisson process active only inside pulse windows [k/B, k/B + tau).
// Mean count = in_pulse_rate * tau * B * duration. tau*B = 1 reproduces
// poisson_stream draw for draw.
EventStream pulsed_stream(double in_pulse_rate, double tau, double rep_rate, double duration,
                          std::uint64_t seed, std::string label = {});

struct DetectorResponse
{
    double survival = 1.0;
    double jitter_fwhm = 0.0;
    double dark_rate = 0.0;
    double dead_time = 0.0;
};

// Bernoulli thinning, Gaussian timing smear (sigma = FWHM/2.3548), merge
// with dark counts, dead-time pruning. Events smeared outside
// [0, duration) are dropped.
EventStream detect(EventStream const& source, DetectorResponse const& response, std::uint64_t seed);

// Merge of two sorted streams over the longer duration.
EventStream merge(EventStream const& a, EventStream const& b);

// Every timestamp + delay, dropping those that leave [0, duration).
EventStream shifted(EventStream const& s, double delay);

} // namespace sfwm::sim
