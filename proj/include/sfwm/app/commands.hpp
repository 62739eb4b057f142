#pragma once

#include <cstdint>
#include <iosfwd>

namespace sfwm::app
{
inline constexpr std::uint64_t kDefaultSeed = 1549315;

// Exit codes: 0 success, 1 unexpected failure, 2 usage or config error,
// 3 calibration inconsistency, 4 numerical failure.
int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

} // namespace sfwm::app
