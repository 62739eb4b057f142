#include "sfwm/sim/tia.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "sfwm/core/errors.hpp"
#include "sfwm/format.hpp"

namespace sfwm::sim
{
namespace
{
constexpr double kFwhmPerSigma = 2.3548200450309493;

char const* policy_name(StopPolicy p)
{
    return p == StopPolicy::first_stop ? "first-stop" : "multi-stop";
}

// Median of integer counts, interpolated within the median class (grouped
// median). The plain median of sparse Poisson bins sits up to half a count
// off the mean; this keeps low-count floors close to unbiased.
double median(std::vector<double> v)
{
    auto const n = v.size();
    auto const mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    double const m = *mid;
    auto const below = static_cast<double>(std::count_if(v.begin(), v.end(), [m](double x) { return x < m; }));
    auto const equal = static_cast<double>(std::count(v.begin(), v.end(), m));
    return m - 0.5 + (0.5 * static_cast<double>(n) - below) / equal;
}

struct GaussianFit
{
    double amplitude = 0.0;
    double center = 0.0;
    double sigma = 0.0;
    bool ok = false;
};

// Weighted Levenberg-Marquardt for y = a exp(-(x - mu)^2 / (2 s^2)),
// weights 1/max(count, 1) (Poisson variance of the raw bins).
GaussianFit fit_gaussian(std::vector<double> const& x, std::vector<double> const& y,
                         std::vector<double> const& weight, GaussianFit start)
{
    Eigen::Vector3d p(start.amplitude, start.center, start.sigma);
    auto chi2_at = [&](Eigen::Vector3d const& q) {
        double chi2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            double const z = (x[i] - q[1]) / q[2];
            double const res = y[i] - q[0] * std::exp(-0.5 * z * z);
            chi2 += weight[i] * res * res;
        }
        return chi2;
    };

    double chi2 = chi2_at(p);
    double lambda = 1e-3;
    for (int iter = 0; iter < 200; ++iter)
    {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            double const z = (x[i] - p[1]) / p[2];
            double const g = std::exp(-0.5 * z * z);
            Eigen::Vector3d const j(g, p[0] * g * z / p[2], p[0] * g * z * z / p[2]);
            double const res = y[i] - p[0] * g;
            jtj += weight[i] * j * j.transpose();
            jtr += weight[i] * res * j;
        }
        Eigen::Matrix3d damped = jtj;
        damped.diagonal() *= (1.0 + lambda);
        Eigen::Vector3d const step = damped.ldlt().solve(jtr);
        Eigen::Vector3d trial = p + step;
        if (!trial.allFinite() || trial[2] <= 0.0)
        {
            lambda *= 10.0;
            if (lambda > 1e12)
            {
                break;
            }
            continue;
        }
        double const trial_chi2 = chi2_at(trial);
        if (trial_chi2 <= chi2)
        {
            bool const done = std::abs(chi2 - trial_chi2) <= 1e-12 * std::max(chi2, 1.0)
                              && step.cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, p.cwiseAbs().maxCoeff());
            p = trial;
            chi2 = trial_chi2;
            lambda = std::max(lambda / 10.0, 1e-12);
            if (done)
            {
                return {p[0], p[1], p[2], true};
            }
        }
        else
        {
            lambda *= 10.0;
            if (lambda > 1e12)
            {
                break;
            }
        }
    }
    // Stalled at a minimum without meeting the step criterion is still a fit.
    return {p[0], p[1], p[2], p.allFinite() && p[2] > 0.0 && p[0] > 0.0};
}
} // namespace

std::size_t TiaConfig::bin_count() const
{
    double const n = (max_delay - min_delay) / bin_width;
    double const rounded = std::round(n);
    if (std::abs(n - rounded) < 1e-6 * std::max(1.0, n))
    {
        return static_cast<std::size_t>(rounded);
    }
    return static_cast<std::size_t>(std::ceil(n));
}

void TiaConfig::validate() const
{
    if (!(bin_width > 0.0))
    {
        throw ConfigError("TIA bin width must be > 0");
    }
    if (!(max_delay > min_delay))
    {
        throw ConfigError("TIA range is empty");
    }
    if (stop_delay < min_delay || stop_delay >= max_delay)
    {
        throw ConfigError("TIA range must span the stop delay");
    }
    if (bin_count() > 100'000'000)
    {
        throw ConfigError("TIA range / bin width gives too many bins");
    }
}

double HistogramResult::bin_width() const
{
    return bin_edges.size() >= 2 ? bin_edges[1] - bin_edges[0] : 0.0;
}

double HistogramResult::bin_center(std::size_t i) const
{
    return 0.5 * (bin_edges[i] + bin_edges[i + 1]);
}

std::uint64_t HistogramResult::total() const
{
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

void HistogramResult::accumulate(HistogramResult const& other)
{
    if (other.counts.size() != counts.size())
    {
        throw ConfigError("cannot merge histograms with different binning");
    }
    for (std::size_t i = 0; i < counts.size(); ++i)
    {
        counts[i] += other.counts[i];
    }
    acquisition_time += other.acquisition_time;
    start_events += other.start_events;
    stop_events += other.stop_events;
}

HistogramResult empty_histogram(TiaConfig const& cfg)
{
    cfg.validate();
    HistogramResult h;
    std::size_t const n = cfg.bin_count();
    h.counts.assign(n, 0);
    h.bin_edges.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
    {
        h.bin_edges[i] = cfg.min_delay + static_cast<double>(i) * cfg.bin_width;
    }
    h.metadata["tia_bin_width_s"] = format_double(cfg.bin_width);
    h.metadata["tia_min_delay_s"] = format_double(cfg.min_delay);
    h.metadata["tia_max_delay_s"] = format_double(cfg.max_delay);
    h.metadata["tia_policy"] = policy_name(cfg.policy);
    h.metadata["tia_stop_delay_s"] = format_double(cfg.stop_delay);
    return h;
}

HistogramResult tia_histogram(EventStream const& starts, EventStream const& stops, TiaConfig const& cfg)
{
    HistogramResult h = empty_histogram(cfg);
    h.acquisition_time = starts.duration;
    h.start_events = starts.size();
    h.stop_events = stops.size();

    auto const& st = starts.timestamps;
    auto const& sp = stops.timestamps;
    std::size_t const n = h.counts.size();
    double const inv_bin = 1.0 / cfg.bin_width;
    std::size_t j = 0;
    for (double const s : st)
    {
        double const lo = s + cfg.min_delay;
        while (j < sp.size() && sp[j] < lo)
        {
            ++j;
        }
        for (std::size_t k = j; k < sp.size(); ++k)
        {
            double const d = sp[k] - s;
            if (d >= cfg.max_delay)
            {
                break;
            }
            auto idx = static_cast<std::size_t>((d - cfg.min_delay) * inv_bin);
            h.counts[std::min(idx, n - 1)] += 1;
            if (cfg.policy == StopPolicy::first_stop)
            {
                break;
            }
        }
    }
    return h;
}

AnalysisResult analyze_histogram(HistogramResult const& h, AnalysisOptions const& options)
{
    if (h.counts.empty())
    {
        throw ConfigError("histogram has no bins");
    }
    double const range = h.bin_edges.back() - h.bin_edges.front();
    if (!(options.peak_window > 0.0) || options.peak_window > range)
    {
        throw ConfigError("peak window must be > 0 and no wider than the histogram range");
    }
    if (!(options.search_width > 0.0))
    {
        throw ConfigError("peak search width must be > 0");
    }

    AnalysisResult a;
    if (h.total() == 0 || !(h.acquisition_time > 0.0))
    {
        a.flags = kFlagEmpty | kFlagNotSignificant;
        a.peak_delay = std::numeric_limits<double>::quiet_NaN();
        a.peak_fwhm = std::numeric_limits<double>::quiet_NaN();
        a.car = std::numeric_limits<double>::quiet_NaN();
        return a;
    }

    std::size_t const n = h.counts.size();
    double const bin = h.bin_width();
    double const half = 0.5 * options.peak_window + 1e-6 * bin;
    // Peak = largest sliding sum of a ~FWHM kernel after removing a linear
    // trend (the first-stop floor decays with delay). The integration
    // window is then centred there.
    auto const reach = static_cast<std::size_t>(std::floor(half / bin));
    auto const kernel = static_cast<std::size_t>(
        std::floor((0.5 * std::min(options.search_width, options.peak_window) + 1e-6 * bin) / bin));
    std::size_t m = std::min(kernel, n - 1);
    {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            double const x = static_cast<double>(i);
            double const y = static_cast<double>(h.counts[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double const dn = static_cast<double>(n);
        double const den = dn * sxx - sx * sx;
        double const slope = den > 0.0 ? (dn * sxy - sx * sy) / den : 0.0;
        double const icpt = (sy - slope * sx) / dn;
        std::vector<double> resid(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            resid[i] = static_cast<double>(h.counts[i]) - (icpt + slope * static_cast<double>(i));
        }
        std::size_t const last = n > kernel ? n - 1 - kernel : m;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t c = std::min(kernel, n - 1); c <= std::max(m, last); ++c)
        {
            double sum = 0.0;
            for (std::size_t i = c - std::min(c, kernel); i <= std::min(n - 1, c + kernel); ++i)
            {
                sum += resid[i];
            }
            if (sum > best)
            {
                best = sum;
                m = c;
            }
        }
    }
    double const cm = h.bin_center(m);
    auto const lo_it = h.counts.begin() + static_cast<std::ptrdiff_t>(m - std::min(m, reach));
    auto const hi_it = h.counts.begin() + static_cast<std::ptrdiff_t>(std::min(n - 1, m + reach) + 1);
    auto const max_it = std::max_element(lo_it, hi_it);

    std::vector<std::size_t> window;
    std::vector<double> off_peak;
    for (std::size_t i = 0; i < n; ++i)
    {
        double const dist = std::abs(h.bin_center(i) - cm);
        if (dist <= half)
        {
            window.push_back(i);
        }
        else if (options.floor_sideband <= 0.0 || dist <= options.floor_sideband)
        {
            off_peak.push_back(static_cast<double>(h.counts[i]));
        }
    }
    if (off_peak.empty())
    {
        throw ConfigError("no off-peak bins left for the floor estimate");
    }

    double const T = h.acquisition_time;
    double const floor = median(off_peak);
    double const floor_var = floor * 3.14159265358979323846 / (2.0 * static_cast<double>(off_peak.size()));
    double window_counts = 0.0;
    for (auto i : window)
    {
        window_counts += static_cast<double>(h.counts[i]);
    }
    double const nw = static_cast<double>(window.size());
    double net = window_counts - floor * nw;
    double const net_err = std::sqrt(window_counts + nw * nw * floor_var);

    a.window_bins = window.size();
    a.floor_bins = off_peak.size();
    a.floor_counts = floor;
    a.max_bin_counts = static_cast<double>(*max_it);
    a.peak_excess = floor > 0.0 ? (a.max_bin_counts - floor) / floor : std::numeric_limits<double>::infinity();
    if (net < 0.0)
    {
        net = 0.0;
        a.flags |= kFlagNegativeClamped;
    }
    if (net < 3.0 * net_err)
    {
        a.flags |= kFlagNotSignificant;
    }
    a.net_counts = net;
    a.coincidence_rate = net / T;
    a.coincidence_error = net_err / T;
    a.accidental_rate_per_bin = floor / T;
    a.accidental_error_per_bin = std::sqrt(floor_var) / T;
    double const floor_window = floor * nw;
    a.car = floor_window > 0.0 ? net / floor_window : std::numeric_limits<double>::infinity();
    if (floor_window > 0.0 && net > 0.0)
    {
        double const rel_floor = std::sqrt(floor_var) / floor;
        a.car_error = a.car * std::sqrt(std::pow(net_err / net, 2) + rel_floor * rel_floor);
    }

    // Moment estimates seed the fit and are the fallback.
    std::vector<double> xs, ys, ws;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (auto i : window)
    {
        double const x = h.bin_center(i) - cm;
        double const c = static_cast<double>(h.counts[i]);
        double const y = c - floor;
        xs.push_back(x);
        ys.push_back(y);
        ws.push_back(1.0 / std::max(c, 1.0));
        double const pos = std::max(y, 0.0);
        s0 += pos;
        s1 += pos * x;
        s2 += pos * x * x;
    }
    double mom_center = s0 > 0.0 ? s1 / s0 : 0.0;
    double mom_sigma = s0 > 0.0 ? std::sqrt(std::max(s2 / s0 - mom_center * mom_center, 0.0)) : bin;
    mom_sigma = std::clamp(mom_sigma, 0.5 * bin, 0.25 * options.peak_window);

    GaussianFit fit;
    if (a.max_bin_counts > floor)
    {
        fit = fit_gaussian(xs, ys, ws, {a.max_bin_counts - floor, mom_center, mom_sigma, false});
    }
    if (fit.ok && std::abs(fit.center) <= half && fit.sigma < options.peak_window)
    {
        a.peak_delay = cm + fit.center;
        a.peak_fwhm = kFwhmPerSigma * fit.sigma;
    }
    else
    {
        a.flags |= kFlagFitFailed;
        a.peak_delay = cm + mom_center;
        a.peak_fwhm = kFwhmPerSigma * mom_sigma;
    }
    return a;
}

void write_histogram_csv(std::ostream& os, HistogramResult const& h)
{
    os << "# acquisition_time_s=" << format_double(h.acquisition_time) << '\n';
    os << "# start_events=" << h.start_events << '\n';
    os << "# stop_events=" << h.stop_events << '\n';
    for (auto const& [key, value] : h.metadata)
    {
        os << "# " << key << '=' << value << '\n';
    }
    os << "delay_s,counts\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i)
    {
        os << format_double(h.bin_edges[i]) << ',' << h.counts[i] << '\n';
    }
}

std::string format_analysis(AnalysisResult const& a)
{
    std::ostringstream os;
    auto line = [&](char const* key, double v) { os << key << ": " << format_double(v) << '\n'; };
    line("peak_delay_s", a.peak_delay);
    line("peak_fwhm_s", a.peak_fwhm);
    line("coincidence_rate_per_s", a.coincidence_rate);
    line("coincidence_rate_error_per_s", a.coincidence_error);
    line("accidental_rate_per_bin_per_s", a.accidental_rate_per_bin);
    line("accidental_rate_per_bin_error_per_s", a.accidental_error_per_bin);
    line("car", a.car);
    line("car_error", a.car_error);
    line("floor_counts_per_bin", a.floor_counts);
    line("max_bin_counts", a.max_bin_counts);
    line("peak_excess", a.peak_excess);
    line("net_counts", a.net_counts);
    os << "window_bins: " << a.window_bins << '\n';
    os << "floor_bins: " << a.floor_bins << '\n';
    os << "flags:";
    if (a.flags == kFlagNone)
    {
        os << " none";
    }
    if (a.has(kFlagEmpty))
    {
        os << " empty";
    }
    if (a.has(kFlagNegativeClamped))
    {
        os << " negative-clamped";
    }
    if (a.has(kFlagNotSignificant))
    {
        os << " not-significant";
    }
    if (a.has(kFlagFitFailed))
    {
        os << " fit-failed";
    }
    os << '\n';
    return os.str();
}

} // namespace sfwm::sim
