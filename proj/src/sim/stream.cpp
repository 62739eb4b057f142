#include "sfwm/sim/stream.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "sfwm/core/errors.hpp"
#include "sfwm/sim/rng.hpp"

namespace sfwm::sim
{
namespace
{
constexpr double kFwhmPerSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)

// Stream ids mixed into derive_seed so the sub-draws of one call never
// share a generator.
enum : std::uint64_t
{
    kThinning = 1,
    kJitter = 2,
    kDarks = 3,
};

// Jitter only reorders events that are closer than a few sigma, so
// insertion sort finishes in near-linear time.
void sort_nearly_sorted(std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
    {
        double const x = v[i];
        if (!(x < v[i - 1]))
        {
            continue;
        }
        std::size_t j = i;
        while (j > 0 && x < v[j - 1])
        {
            v[j] = v[j - 1];
            --j;
        }
        v[j] = x;
    }
}
} // namespace

void EventStream::validate() const
{
    for (std::size_t i = 0; i < timestamps.size(); ++i)
    {
        double const t = timestamps[i];
        if (!(t >= 0.0 && t < duration))
        {
            throw ConfigError("event timestamp outside [0, duration)");
        }
        if (i > 0 && t < timestamps[i - 1])
        {
            throw ConfigError("event stream is not sorted");
        }
    }
}

EventStream poisson_stream(double rate, double duration, std::uint64_t seed, std::string label)
{
    if (rate < 0.0 || duration < 0.0)
    {
        throw ConfigError("Poisson rate and duration must be >= 0");
    }
    EventStream s;
    s.duration = duration;
    s.label = std::move(label);
    if (rate == 0.0 || duration == 0.0)
    {
        return s;
    }
    double const expected = rate * duration;
    s.timestamps.reserve(static_cast<std::size_t>(expected + 6.0 * std::sqrt(expected) + 16.0));
    Rng rng(seed);
    double const mean_gap = 1.0 / rate;
    double t = rng.exponential() * mean_gap;
    while (t < duration)
    {
        s.timestamps.push_back(t);
        t += rng.exponential() * mean_gap;
    }
    return s;
}

EventStream pulsed_stream(double in_pulse_rate, double tau, double rep_rate, double duration,
                          std::uint64_t seed, std::string label)
{
    if (!(tau > 0.0) || !(rep_rate > 0.0) || tau * rep_rate > 1.0)
    {
        throw ConfigError("pulsed stream needs tau > 0, B > 0 and tau*B <= 1");
    }
    double const period = 1.0 / rep_rate;
    // Sample on the concatenation of all pulse windows, then map back.
    double const pulses = std::ceil(duration * rep_rate);
    EventStream compressed = poisson_stream(in_pulse_rate, pulses * tau, seed);
    EventStream s;
    s.duration = duration;
    s.label = std::move(label);
    if (tau * rep_rate == 1.0)
    {
        for (double t : compressed.timestamps)
        {
            if (t < duration)
            {
                s.timestamps.push_back(t);
            }
        }
        return s;
    }
    s.timestamps.reserve(compressed.size());
    for (double t : compressed.timestamps)
    {
        double const k = std::floor(t / tau);
        double const offset = t - k * tau;
        double const real = k * period + offset;
        if (real < duration)
        {
            s.timestamps.push_back(real);
        }
    }
    return s;
}

EventStream merge(EventStream const& a, EventStream const& b)
{
    EventStream out;
    out.duration = std::max(a.duration, b.duration);
    out.label = a.label;
    out.timestamps.reserve(a.size() + b.size());
    std::merge(a.timestamps.begin(), a.timestamps.end(), b.timestamps.begin(), b.timestamps.end(),
               std::back_inserter(out.timestamps));
    return out;
}

EventStream shifted(EventStream const& s, double delay)
{
    EventStream out;
    out.duration = s.duration;
    out.label = s.label;
    out.timestamps.reserve(s.size());
    for (double t : s.timestamps)
    {
        double const moved = t + delay;
        if (moved >= 0.0 && moved < s.duration)
        {
            out.timestamps.push_back(moved);
        }
    }
    return out;
}

EventStream detect(EventStream const& source, DetectorResponse const& response, std::uint64_t seed)
{
    if (response.survival < 0.0 || response.survival > 1.0)
    {
        throw ConfigError("survival probability must be in [0, 1]");
    }
    if (response.jitter_fwhm < 0.0 || response.dark_rate < 0.0 || response.dead_time < 0.0)
    {
        throw ConfigError("jitter, dark rate and dead time must be >= 0");
    }

    EventStream out;
    out.duration = source.duration;
    out.label = source.label;
    auto& ts = out.timestamps;
    ts.reserve(source.size());

    if (response.survival >= 1.0)
    {
        ts = source.timestamps;
    }
    else if (response.survival > 0.0)
    {
        Rng thin(derive_seed(seed, kThinning));
        for (double t : source.timestamps)
        {
            if (thin.bernoulli(response.survival))
            {
                ts.push_back(t);
            }
        }
    }

    if (response.jitter_fwhm > 0.0 && !ts.empty())
    {
        Rng jitter(derive_seed(seed, kJitter));
        double const sigma = response.jitter_fwhm / kFwhmPerSigma;
        for (double& t : ts)
        {
            t += sigma * jitter.normal();
        }
        std::erase_if(ts, [&](double t) { return t < 0.0 || t >= out.duration; });
        sort_nearly_sorted(ts);
    }

    if (response.dark_rate > 0.0)
    {
        auto darks = poisson_stream(response.dark_rate, source.duration, derive_seed(seed, kDarks));
        std::vector<double> merged;
        merged.reserve(ts.size() + darks.size());
        std::merge(ts.begin(), ts.end(), darks.timestamps.begin(), darks.timestamps.end(),
                   std::back_inserter(merged));
        ts.swap(merged);
    }

    if (response.dead_time > 0.0 && !ts.empty())
    {
        std::size_t kept = 1;
        double last = ts.front();
        for (std::size_t i = 1; i < ts.size(); ++i)
        {
            if (ts[i] - last >= response.dead_time)
            {
                last = ts[i];
                ts[kept++] = ts[i];
            }
        }
        ts.resize(kept);
    }
    return out;
}

} // namespace sfwm::sim
