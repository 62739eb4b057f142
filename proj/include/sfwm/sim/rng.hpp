#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sfwm::sim
{
// Recorded in every histogram's metadata. Streams are std::mt19937_64
// (whose output sequence the standard fixes) seeded through SplitMix64 of
// (seed, stream id, segment). Distributions are sampled here rather than
// with <random> distributions, whose algorithms are implementation-defined.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64/splitmix64-v1";

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t segment = 0);

class Rng
{
  public:
    explicit Rng(std::uint64_t seed);

    // Uniform on the open interval (0, 1).
    double uniform();
    // Unit-mean exponential.
    double exponential();
    // Standard normal (Box-Muller, second variate cached).
    double normal();
    bool bernoulli(double p);

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace sfwm::sim
