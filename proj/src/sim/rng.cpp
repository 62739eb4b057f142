#include "sfwm/sim/rng.hpp"

#include <cmath>

namespace sfwm::sim
{
std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t segment)
{
    std::uint64_t state = seed;
    std::uint64_t h = splitmix64(state);
    state = h ^ (stream * 0xD1B54A32D192ED03ULL);
    h = splitmix64(state);
    state = h ^ (segment * 0x8CB92BA72F3D8DD7ULL);
    return splitmix64(state);
}

Rng::Rng(std::uint64_t seed)
    : engine_(seed)
{
}

double Rng::uniform()
{
    // 53 random bits, offset by half an ulp so 0 is never returned.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::exponential()
{
    return -std::log(uniform());
}

double Rng::normal()
{
    if (has_spare_)
    {
        has_spare_ = false;
        return spare_;
    }
    double const radius = std::sqrt(-2.0 * std::log(uniform()));
    double const angle = 2.0 * 3.14159265358979323846 * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

bool Rng::bernoulli(double p)
{
    return uniform() < p;
}

} // namespace sfwm::sim
