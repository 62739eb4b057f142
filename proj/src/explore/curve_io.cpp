#include "sfwm/explore/curve_io.hpp"

#include <ostream>
#include <sstream>

#include "sfwm/format.hpp"

namespace sfwm::explore
{
void write_curve_csv(std::ostream& os, CurveResult const& curve)
{
    os << "# param=" << curve.param_name << "\n";
    os << "# config_hash=" << curve.config_hash << "\n";
    for (auto const& [k, v] : curve.metadata)
    {
        os << "# " << k << "=" << v << "\n";
    }
    os << "param,r,C,N0,N1,A,CAR\n";
    for (auto const& row : curve.rows)
    {
        auto const& o = row.prediction.obs;
        os << format_double(row.param) << ',' << format_double(o.r) << ',' << format_double(o.C) << ','
           << format_double(o.N0) << ',' << format_double(o.N1) << ',' << format_double(o.A) << ','
           << format_double(o.CAR) << "\n";
    }
}

std::string format_fit(FitResult const& fit)
{
    std::ostringstream os;
    os << "exponent: " << format_double(fit.exponent) << "\n"
       << "coefficient: " << format_double(fit.coefficient) << "\n"
       << "residual_rms_log: " << format_double(fit.residual_rms) << "\n"
       << "points: " << fit.points << "\n";
    return os.str();
}

std::string format_design(DesignResult const& design)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < design.names.size(); ++i)
    {
        os << design.names[i] << ": " << format_double(design.best[i]) << "\n";
    }
    os << "car: " << format_double(design.car) << "\n"
       << "pairs_per_pulse: " << format_double(design.mu) << "\n"
       << "coincidence_rate: " << format_double(design.coincidences) << "\n"
       << "evaluations: " << design.trace.size() << "\n";
    return os.str();
}

void write_trace_csv(std::ostream& os, DesignResult const& design)
{
    for (auto const& n : design.names)
    {
        os << n << ',';
    }
    os << "car,mu,C,feasible\n";
    for (auto const& tp : design.trace)
    {
        for (double v : tp.x)
        {
            os << format_double(v) << ',';
        }
        os << format_double(tp.car) << ',' << format_double(tp.mu) << ',' << format_double(tp.coincidences) << ','
           << (tp.feasible ? 1 : 0) << "\n";
    }
}

} // namespace sfwm::explore
