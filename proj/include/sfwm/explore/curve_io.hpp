#pragma once

#include <iosfwd>
#include <string>

#include "sfwm/explore/fit.hpp"
#include "sfwm/explore/optimize.hpp"
#include "sfwm/explore/sweep.hpp"

namespace sfwm::explore
{
// `param,r,C,N0,N1,A,CAR` after `# key=value` metadata lines.
void write_curve_csv(std::ostream& os, CurveResult const& curve);
std::string format_fit(FitResult const& fit);
std::string format_design(DesignResult const& design);
// One row per evaluated point: the parameters, then car,mu,C,feasible.
void write_trace_csv(std::ostream& os, DesignResult const& design);

} // namespace sfwm::explore
