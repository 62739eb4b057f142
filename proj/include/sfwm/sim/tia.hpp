#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sfwm/sim/stream.hpp"

namespace sfwm::sim
{
enum class StopPolicy
{
    first_stop,  // each start pairs with the earliest stop at or after start + min_delay
    multi_stop,  // each start pairs with every stop in [start + min_delay, start + max_delay)
};

struct TiaConfig
{
    double bin_width = 16e-12;
    double min_delay = 0.0;
    double max_delay = 40e-9;
    StopPolicy policy = StopPolicy::first_stop;
    double stop_delay = 11.1e-9;

    std::size_t bin_count() const;
    void validate() const;
};

struct HistogramResult
{
    std::vector<double> bin_edges;  // lower edges, bin_count + 1 entries
    std::vector<std::uint64_t> counts;
    double acquisition_time = 0.0;
    std::uint64_t start_events = 0;
    std::uint64_t stop_events = 0;
    std::map<std::string, std::string> metadata;

    double bin_width() const;
    double bin_center(std::size_t i) const;
    std::uint64_t total() const;
    // Counts are additive over disjoint acquisitions.
    void accumulate(HistogramResult const& other);
};

HistogramResult empty_histogram(TiaConfig const& cfg);

// Start-stop delay histogram over [min_delay, max_delay).
HistogramResult tia_histogram(EventStream const& starts, EventStream const& stops, TiaConfig const& cfg);

struct AnalysisOptions
{
    double peak_window = 1e-9;     // full width integrated around the located peak
    double floor_sideband = 5e-9;  // half-width of the off-peak region used for the floor; <= 0 uses every bin
    double search_width = 250e-12; // sliding kernel used to locate the peak, about one FWHM
};

enum AnalysisFlag : unsigned
{
    kFlagNone = 0,
    kFlagEmpty = 1u << 0,           // no counts at all
    kFlagNegativeClamped = 1u << 1, // peak below floor, C clamped to 0
    kFlagNotSignificant = 1u << 2,  // net counts below 3 standard errors
    kFlagFitFailed = 1u << 3,       // Gaussian peak fit did not converge; moments used
};

struct AnalysisResult
{
    double peak_delay = 0.0;
    double peak_fwhm = 0.0;
    double coincidence_rate = 0.0;   // C, s^-1
    double coincidence_error = 0.0;
    double accidental_rate_per_bin = 0.0;
    double accidental_error_per_bin = 0.0;
    double car = 0.0;
    double car_error = 0.0;
    double floor_counts = 0.0;        // per bin
    double max_bin_counts = 0.0;
    double peak_excess = 0.0;         // (max bin - floor) / floor
    double net_counts = 0.0;
    std::size_t window_bins = 0;
    std::size_t floor_bins = 0;
    unsigned flags = kFlagNone;

    bool has(AnalysisFlag f) const { return (flags & f) != 0; }
};

// Floor = median of off-peak bins; C = (window counts - floor * window
// bins) / T; CAR = net window counts / floor counts in the window. Peak
// position and width come from a Gaussian fit over the window on top of
// the fixed floor.
AnalysisResult analyze_histogram(HistogramResult const& h, AnalysisOptions const& options = {});

// `delay_s,counts` with `#`-prefixed metadata lines first.
void write_histogram_csv(std::ostream& os, HistogramResult const& h);
std::string format_analysis(AnalysisResult const& a);

} // namespace sfwm::sim
