#include "sfwm/explore/sweep.hpp"

#include <charconv>
#include <cmath>

#include "sfwm/core/errors.hpp"
#include "sfwm/core/model.hpp"

namespace sfwm::explore
{
namespace
{
double parse_number(std::string_view text, std::string_view whole)
{
    double v = 0.0;
    auto const* end = text.data() + text.size();
    auto const res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
    {
        throw ConfigError("bad number '" + std::string(text) + "' in value list '" + std::string(whole) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true)
    {
        auto const pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos)
        {
            return out;
        }
        start = pos + 1;
    }
}
} // namespace

void SweepSpec::validate() const
{
    if (values.empty())
    {
        throw ConfigError("sweep needs at least one value");
    }
    for (double v : values)
    {
        if (!std::isfinite(v))
        {
            throw ConfigError("sweep values must be finite");
        }
    }
    if (values.size() < 2)
    {
        return;
    }
    bool const up = values[1] > values[0];
    for (std::size_t i = 1; i < values.size(); ++i)
    {
        if (up ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1]))
        {
            throw ConfigError("sweep values must be strictly monotone");
        }
    }
}

std::vector<double> spaced_values(double lo, double hi, std::size_t count, Spacing spacing)
{
    if (count == 0 || !std::isfinite(lo) || !std::isfinite(hi))
    {
        throw ConfigError("value range needs finite ends and count >= 1");
    }
    if (count == 1)
    {
        if (lo != hi)
        {
            throw ConfigError("a single-point range needs min == max");
        }
        return {lo};
    }
    if (spacing == Spacing::log && !(lo > 0.0 && hi > 0.0))
    {
        throw ConfigError("log spacing needs positive ends");
    }
    std::vector<double> out(count);
    double const n = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
    {
        double const f = static_cast<double>(i) / n;
        out[i] = spacing == Spacing::linear ? lo + (hi - lo) * f
                                            : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * f);
    }
    // endpoints exactly as given
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> parse_values(std::string_view spec)
{
    if (spec.find(':') != std::string_view::npos)
    {
        auto const parts = split(spec, ':');
        if (parts.size() < 2 || parts.size() > 4)
        {
            throw ConfigError("range must be min:max[:count[:lin|log]], got '" + std::string(spec) + "'");
        }
        double const lo = parse_number(parts[0], spec);
        double const hi = parse_number(parts[1], spec);
        std::size_t count = 11;
        if (parts.size() >= 3)
        {
            double const c = parse_number(parts[2], spec);
            if (c < 1 || c != std::floor(c) || c > 1e7)
            {
                throw ConfigError("range count must be a positive integer in '" + std::string(spec) + "'");
            }
            count = static_cast<std::size_t>(c);
        }
        Spacing spacing = Spacing::linear;
        if (parts.size() == 4)
        {
            if (parts[3] == "log")
            {
                spacing = Spacing::log;
            }
            else if (parts[3] != "lin")
            {
                throw ConfigError("range spacing must be lin or log in '" + std::string(spec) + "'");
            }
        }
        return spaced_values(lo, hi, count, spacing);
    }
    std::vector<double> out;
    for (auto part : split(spec, ','))
    {
        out.push_back(parse_number(part, spec));
    }
    return out;
}

std::vector<double> CurveResult::params() const
{
    std::vector<double> out;
    for (auto const& row : rows)
    {
        out.push_back(row.param);
    }
    return out;
}

std::vector<double> CurveResult::coincidences() const
{
    std::vector<double> out;
    for (auto const& row : rows)
    {
        out.push_back(row.prediction.obs.C);
    }
    return out;
}

std::vector<double> CurveResult::cars() const
{
    std::vector<double> out;
    for (auto const& row : rows)
    {
        out.push_back(row.prediction.obs.CAR);
    }
    return out;
}

CurveResult sweep(config::ExperimentConfig const& cfg, SweepSpec const& spec)
{
    spec.validate();
    auto const path = cfg.canonical_path(spec.path);
    (void)cfg.parameter(path);

    CurveResult out;
    out.param_name = path;
    out.config_hash = cfg.hash();
    out.metadata["accidental_mode"] = config::accidental_mode_name(cfg.analysis().accidental_mode);
    for (double v : spec.values)
    {
        auto const point = cfg.with_parameter(path, v);
        auto const& a = point.analysis();
        out.rows.push_back({v, core::predict_observables(point.source(), a.window_s, a.accidental_mode)});
    }
    return out;
}

} // namespace sfwm::explore
