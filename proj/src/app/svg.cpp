#include "sfwm/app/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>


namespace sfwm::app
{
namespace
{
constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 80;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 60;

char const* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(std::string const& s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

struct Axis
{
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;

    double unit(double v) const
    {
        double const a = log ? std::log10(lo) : lo;
        double const b = log ? std::log10(hi) : hi;
        double const x = log ? std::log10(v) : v;
        return b > a ? (x - a) / (b - a) : 0.5;
    }
};

Axis make_axis(std::vector<double> const& values, bool log)
{
    Axis ax;
    ax.log = log;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : values)
    {
        if (std::isfinite(v) && (!log || v > 0.0))
        {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!std::isfinite(lo))
    {
        lo = log ? 1.0 : 0.0;
        hi = log ? 10.0 : 1.0;
    }
    if (lo == hi)
    {
        lo = log ? lo / 2 : lo - 0.5;
        hi = log ? hi * 2 : hi + 0.5;
    }
    ax.lo = lo;
    ax.hi = hi;
    return ax;
}

double px(Axis const& ax, double v)
{
    return kLeft + ax.unit(v) * (kWidth - kLeft - kRight);
}

double py(Axis const& ax, double v)
{
    return kHeight - kBottom - ax.unit(v) * (kHeight - kTop - kBottom);
}

void frame(std::ostringstream& os, Axis const& ax, Axis const& ay, PlotLabels const& labels)
{
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight << "\" height=\""
       << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape(labels.title)
       << "</text>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
       << escape(labels.x) << "</text>\n";
    os << "<text transform=\"translate(18," << kHeight / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(labels.y) << "</text>\n";
    // end ticks only
    double const yb = kHeight - kBottom;
    os << "<text x=\"" << kLeft << "\" y=\"" << yb + 16 << "\" text-anchor=\"start\">" << num(ax.lo) << "</text>\n";
    os << "<text x=\"" << kWidth - kRight << "\" y=\"" << yb + 16 << "\" text-anchor=\"end\">" << num(ax.hi)
       << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << yb << "\" text-anchor=\"end\">" << num(ay.lo) << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 10 << "\" text-anchor=\"end\">" << num(ay.hi)
       << "</text>\n";
}
} // namespace

std::string step_plot_svg(std::vector<double> const& edges, std::vector<double> const& counts,
                          PlotLabels const& labels)
{
    auto const ax = make_axis(edges, false);
    auto ay = make_axis(counts, false);
    ay.lo = std::min(ay.lo, 0.0);
    std::ostringstream os;
    frame(os, ax, ay, labels);
    os << "<polyline fill=\"none\" stroke=\"" << kColors[0] << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < counts.size() && i + 1 < edges.size(); ++i)
    {
        double const y = py(ay, counts[i]);
        os << num(px(ax, edges[i])) << ',' << num(y) << ' ' << num(px(ax, edges[i + 1])) << ',' << num(y) << ' ';
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

std::string line_plot_svg(std::vector<Series> const& series, PlotLabels const& labels, bool log_x, bool log_y)
{
    std::vector<double> xs;
    std::vector<double> ys;
    for (auto const& s : series)
    {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    auto const ax = make_axis(xs, log_x);
    auto const ay = make_axis(ys, log_y);
    std::ostringstream os;
    frame(os, ax, ay, labels);
    for (std::size_t k = 0; k < series.size(); ++k)
    {
        auto const& s = series[k];
        char const* color = kColors[k % std::size(kColors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
        {
            bool const ok = std::isfinite(s.x[i]) && std::isfinite(s.y[i]) && (!log_x || s.x[i] > 0.0) &&
                            (!log_y || s.y[i] > 0.0);
            if (ok)
            {
                os << num(px(ax, s.x[i])) << ',' << num(py(ay, s.y[i])) << ' ';
            }
        }
        os << "\"/>\n";
        if (!s.label.empty())
        {
            os << "<text x=\"" << kWidth - kRight - 8 << "\" y=\"" << kTop + 16 + 14 * static_cast<double>(k)
               << "\" text-anchor=\"end\" fill=\"" << color << "\">" << escape(s.label) << "</text>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace sfwm::app
