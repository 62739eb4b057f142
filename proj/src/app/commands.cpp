#include "sfwm/app/commands.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "sfwm/app/manifest.hpp"
#include "sfwm/app/svg.hpp"
#include "sfwm/config/config.hpp"
#include "sfwm/core/calibration.hpp"
#include "sfwm/core/errors.hpp"
#include "sfwm/core/model.hpp"
#include "sfwm/explore/curve_io.hpp"
#include "sfwm/explore/fit.hpp"
#include "sfwm/explore/optimize.hpp"
#include "sfwm/explore/pulsed.hpp"
#include "sfwm/explore/sweep.hpp"
#include "sfwm/format.hpp"
#include "sfwm/sim/acquisition.hpp"

namespace sfwm::app
{
namespace fs = std::filesystem;
using config::ExperimentConfig;

namespace
{
struct Common
{
    std::string config_path;
    std::uint64_t seed = kDefaultSeed;
    std::string out_dir = "sfwm-out";
    std::string mode;
};

// Collects outputs for the manifest and writes files under the output dir.
class Run
{
  public:
    Run(std::string command, Common const& common, std::ostream& out)
        : common_(common)
        , out_(out)
        , cfg_(common.config_path.empty() ? config::paper_defaults() : config::load_config(common.config_path))
    {
        manifest_.command = std::move(command);
        manifest_.seed = common.seed;
        manifest_.tool_version = SFWM_VERSION;
        if (!common.mode.empty())
        {
            (void)config::parse_accidental_mode(common.mode);
            cfg_ = cfg_.with_value("analysis.accidental_mode", common.mode);
        }
        fs::create_directories(common.out_dir);
    }

    ExperimentConfig const& cfg() const { return cfg_; }
    void set_cfg(ExperimentConfig c) { cfg_ = std::move(c); }
    std::ostream& out() { return out_; }

    void write(std::string const& name, std::string const& content)
    {
        auto const path = fs::path(common_.out_dir) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f)
        {
            throw ConfigError("cannot write " + path.string());
        }
        f << content;
        manifest_.outputs.push_back(name);
    }

    void finish()
    {
        manifest_.config_hash = cfg_.hash();
        auto const path = write_manifest(common_.out_dir, manifest_);
        for (auto const& name : manifest_.outputs)
        {
            out_ << "wrote " << (fs::path(common_.out_dir) / name).string() << "\n";
        }
        out_ << "wrote " << path.string() << "\n";
    }

  private:
    Common common_;
    std::ostream& out_;
    ExperimentConfig cfg_;
    RunManifest manifest_;
};

void add_common(CLI::App* sub, Common& c, bool with_seed, bool with_mode)
{
    sub->add_option("--config", c.config_path, "experiment config (JSON); built-in defaults when omitted");
    sub->add_option("--out", c.out_dir, "output directory")->capture_default_str();
    if (with_seed)
    {
        sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
    }
    if (with_mode)
    {
        sub->add_option("--mode", c.mode, "accidental mode: binned or gated")->check(CLI::IsMember({"binned", "gated"}));
    }
}

std::string curve_csv(explore::CurveResult const& curve)
{
    std::ostringstream os;
    explore::write_curve_csv(os, curve);
    return os.str();
}

explore::Interval parse_interval(std::string const& text, double scale)
{
    auto const v = explore::parse_values(text.find(':') == std::string::npos ? text : text + ":2");
    return {v.front() * scale, v.back() * scale};
}

void print_prediction(std::ostream& os, core::Prediction const& p, ExperimentConfig const& cfg)
{
    auto const& o = p.obs;
    auto const& a = cfg.analysis();
    os << "pump_power_W: " << format_double(p.pump_power_w)
       << (cfg.source().pump.is_pulsed() ? " (peak)" : " (cw)") << "\n"
       << "duty_cycle: " << format_double(p.sigma) << "\n"
       << "eta_alpha: " << format_double(p.eta_alpha) << (p.eta_alpha_calibrated ? " (calibrated)" : " (analytic)")
       << "\n"
       << "eta_alpha_analytic: " << format_double(p.eta_alpha_analytic) << "\n"
       << "eta_out: " << format_double(p.eta_out) << "\n"
       << "delta_nu_Hz: " << format_double(p.delta_nu) << "\n"
       << "accidental_mode: " << config::accidental_mode_name(a.accidental_mode) << "\n"
       << "window_s: " << format_double(o.t) << "\n"
       << "r_pairs_per_s: " << format_double(o.r) << "\n"
       << "C_per_s: " << format_double(o.C) << "\n"
       << "N0_per_s: " << format_double(o.N0) << "\n"
       << "N1_per_s: " << format_double(o.N1) << "\n"
       << "A_per_s: " << format_double(o.A) << "\n"
       << "CAR: " << format_double(o.CAR) << "\n";
    auto part = [&](char const* name, core::SinglesBreakdown const& s) {
        os << name << "_sfwm: " << format_double(s.sfwm) << "\n"
           << name << "_raman: " << format_double(s.raman) << "\n"
           << name << "_leakage: " << format_double(s.leakage) << "\n"
           << name << "_dark: " << format_double(s.dark) << "\n";
    };
    part("N0", p.singles0);
    part("N1", p.singles1);
}

core::Prediction predict(ExperimentConfig const& cfg)
{
    auto const& a = cfg.analysis();
    return core::predict_observables(cfg.source(), a.window_s, a.accidental_mode);
}

} // namespace

int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"SFWM photon-pair source model and coincidence simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(SFWM_VERSION));

    std::function<void()> action;
    Common common;

    auto* defaults = app.add_subcommand("defaults", "write the built-in device config");
    add_common(defaults, common, false, false);
    defaults->callback([&] {
        action = [&] {
            Run r("defaults", common, out);
            r.write("config.json", config::serialize(r.cfg()));
            r.finish();
        };
    });

    std::optional<double> power_mw;
    auto* rates = app.add_subcommand("rates", "evaluate the rate model");
    add_common(rates, common, false, true);
    rates->add_option("--power", power_mw, "pump power in mW (peak when pulsed)");
    rates->callback([&] {
        action = [&] {
            Run r("rates", common, out);
            if (power_mw)
            {
                r.set_cfg(r.cfg().with_parameter("pump.power_mW", *power_mw));
            }
            auto const p = predict(r.cfg());
            print_prediction(out, p, r.cfg());
            explore::CurveResult curve;
            curve.param_name = "pump.power_mW";
            curve.config_hash = r.cfg().hash();
            curve.metadata["accidental_mode"] = config::accidental_mode_name(r.cfg().analysis().accidental_mode);
            curve.rows.push_back({r.cfg().parameter("pump.power_mW"), p});
            r.write("rates.csv", curve_csv(curve));
            r.finish();
        };
    });

    double meas_c = 0.0;
    double meas_n0 = 0.0;
    double meas_n1 = 0.0;
    auto* calibrate = app.add_subcommand("calibrate", "fit eta_alpha and the Raman table to measured rates");
    add_common(calibrate, common, false, false);
    calibrate->add_option("--coincidences", meas_c, "measured coincidence rate, 1/s")->required();
    calibrate->add_option("--singles0", meas_n0, "measured detector-0 singles, 1/s")->required();
    calibrate->add_option("--singles1", meas_n1, "measured detector-1 singles, 1/s")->required();
    calibrate->callback([&] {
        action = [&] {
            if (!(meas_c > 0.0 && meas_n0 > 0.0 && meas_n1 > 0.0))
            {
                throw ConfigError("measured rates must be > 0");
            }
            Run r("calibrate", common, out);
            auto const cal = core::calibrate(meas_c, meas_n0, meas_n1, r.cfg().source());
            r.set_cfg(r.cfg().with_calibration(cal));
            auto const p = predict(r.cfg());
            out << "eta_alpha: " << format_double(cal.eta_alpha.eta_alpha) << "\n"
                << "lossless_C_per_s: " << format_double(cal.eta_alpha.lossless_coincidences) << "\n"
                << "raman_rate0_per_s: " << format_double(cal.raman.noise_rate0) << "\n"
                << "raman_rate1_per_s: " << format_double(cal.raman.noise_rate1) << "\n"
                << "rho0: " << format_double(cal.raman.rho0) << "\n"
                << "rho1: " << format_double(cal.raman.rho1) << "\n"
                << "reproduced_C_per_s: " << format_double(p.obs.C) << "\n"
                << "reproduced_N0_per_s: " << format_double(p.obs.N0) << "\n"
                << "reproduced_N1_per_s: " << format_double(p.obs.N1) << "\n";
            r.write("calibration.json", config::serialize(r.cfg()));
            r.finish();
        };
    });

    double target_car = 0.0;
    double window_mu = 0.01;
    auto* cal_window = app.add_subcommand("calibrate-window", "scale Raman entries at the channel detuning to hit a CAR");
    add_common(cal_window, common, false, true);
    cal_window->add_option("--target-car", target_car, "CAR to reach")->required();
    cal_window->add_option("--mu", window_mu, "pairs per pulse")->capture_default_str();
    cal_window->callback([&] {
        action = [&] {
            Run r("calibrate-window", common, out);
            auto const w =
                explore::calibrate_window(r.cfg(), target_car, window_mu, r.cfg().analysis().accidental_mode);
            out << "scale: " << format_double(w.scale) << "\n"
                << "rho0: " << format_double(w.rho0) << "\n"
                << "rho1: " << format_double(w.rho1) << "\n"
                << "car: " << format_double(w.car) << "\n"
                << "car_bound: " << format_double(w.car_bound) << "\n";
            r.set_cfg(w.config);
            r.write("window-calibration.json", config::serialize(r.cfg()));
            r.finish();
        };
    });

    double duration = 300.0;
    bool svg = false;
    unsigned threads = 0;
    auto* histogram = app.add_subcommand("histogram", "simulate a start-stop delay histogram");
    add_common(histogram, common, true, false);
    histogram->add_option("--duration", duration, "acquisition time, s")->capture_default_str();
    histogram->add_option("--threads", threads, "worker threads (0 = all cores)");
    histogram->add_flag("--svg", svg, "also write histogram.svg");
    histogram->callback([&] {
        action = [&] {
            Run r("histogram", common, out);
            auto const& a = r.cfg().analysis();
            sim::AcquisitionOptions opt;
            opt.duration = duration;
            opt.seed = common.seed;
            opt.threads = threads;
            auto const acq = sim::simulate_acquisition(r.cfg().source(), {a.tia}, opt);
            auto h = acq.histograms.front();
            h.metadata["config_hash"] = r.cfg().hash();
            auto const res = sim::analyze_histogram(h, a.peak);
            std::ostringstream csv;
            sim::write_histogram_csv(csv, h);
            r.write("histogram.csv", csv.str());
            auto const text = sim::format_analysis(res);
            out << text;
            r.write("analysis.txt", text);
            if (svg)
            {
                std::vector<double> x(h.bin_edges.size());
                std::transform(h.bin_edges.begin(), h.bin_edges.end(), x.begin(), [](double v) { return v * 1e9; });
                std::vector<double> y(h.counts.begin(), h.counts.end());
                r.write("histogram.svg", step_plot_svg(x, y, {"start-stop delays", "delay (ns)", "counts per bin"}));
            }
            r.finish();
        };
    });

    std::string param;
    std::string values;
    std::string fit_obs = "C";
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate the model over one config field");
    add_common(sweep_cmd, common, false, true);
    sweep_cmd->add_option("--param", param, "dot path into the config, e.g. pump.power_mW")->required();
    sweep_cmd->add_option("--values", values, "a,b,c or min:max[:count[:lin|log]]")->required();
    sweep_cmd->add_option("--fit", fit_obs, "power-law fit of C, N0, N1 or none")
        ->check(CLI::IsMember({"C", "N0", "N1", "none"}))
        ->capture_default_str();
    sweep_cmd->add_flag("--svg", svg, "also write sweep.svg");
    sweep_cmd->callback([&] {
        action = [&] {
            Run r("sweep", common, out);
            auto const curve = explore::sweep(r.cfg(), {param, explore::parse_values(values)});
            r.write("sweep.csv", curve_csv(curve));
            std::vector<double> y;
            for (auto const& row : curve.rows)
            {
                auto const& o = row.prediction.obs;
                y.push_back(fit_obs == "N0" ? o.N0 : fit_obs == "N1" ? o.N1 : o.C);
            }
            if (fit_obs != "none")
            {
                auto const fit = explore::fit_power_law(curve.params(), y);
                auto const text = "observable: " + fit_obs + "\n" + explore::format_fit(fit);
                out << text;
                r.write("fit.txt", text);
            }
            if (svg)
            {
                r.write("sweep.svg", line_plot_svg({{curve.params(), curve.coincidences(), "C"}},
                                                   {"sweep", curve.param_name, "C (1/s)"}, true, true));
            }
            r.finish();
        };
    });

    std::string mu_values = "0.001:0.02:21:log";
    auto* car_curve = app.add_subcommand("car-curve", "CAR against pairs per pulse (pulsed pump)");
    add_common(car_curve, common, false, true);
    car_curve->add_option("--mu", mu_values, "pairs-per-pulse values")->capture_default_str();
    car_curve->add_flag("--svg", svg, "also write car_curve.svg");
    car_curve->callback([&] {
        action = [&] {
            Run r("car-curve", common, out);
            auto const curve = explore::car_vs_mu(r.cfg(), explore::parse_values(mu_values),
                                                  r.cfg().analysis().accidental_mode);
            auto const csv = curve_csv(curve);
            out << csv;
            r.write("car_curve.csv", csv);
            if (svg)
            {
                r.write("car_curve.svg", line_plot_svg({{curve.params(), curve.cars(), "CAR"}},
                                                       {"CAR against pairs per pulse", "pairs per pulse", "CAR"},
                                                       true, true));
            }
            r.finish();
        };
    });

    std::string detunings = "0.2:2:19";
    auto* car_detuning = app.add_subcommand("car-detuning", "CAR against channel detuning");
    add_common(car_detuning, common, false, true);
    car_detuning->add_option("--values", detunings, "detunings in THz")->capture_default_str();
    car_detuning->add_flag("--svg", svg, "also write car_detuning.svg");
    car_detuning->callback([&] {
        action = [&] {
            Run r("car-detuning", common, out);
            auto const curve = explore::car_vs_detuning(r.cfg(), explore::parse_values(detunings));
            auto const csv = curve_csv(curve);
            out << csv;
            r.write("car_detuning.csv", csv);
            if (svg)
            {
                r.write("car_detuning.svg", line_plot_svg({{curve.params(), curve.cars(), "CAR"}},
                                                          {"CAR against detuning", "detuning (THz)", "CAR"}));
            }
            r.finish();
        };
    });

    std::string b_detuning;
    std::string b_width;
    std::string b_rate;
    std::string b_power;
    std::optional<double> min_mu;
    std::optional<double> min_c;
    std::size_t grid = 9;
    auto* optimize = app.add_subcommand("optimize", "maximize CAR over a parameter box");
    add_common(optimize, common, false, true);
    optimize->add_option("--detuning-THz", b_detuning, "lo:hi or a single value");
    optimize->add_option("--pulse-width-ps", b_width, "lo:hi or a single value");
    optimize->add_option("--rep-rate-MHz", b_rate, "lo:hi or a single value");
    optimize->add_option("--peak-power-mW", b_power, "lo:hi or a single value");
    auto* o_mu = optimize->add_option("--min-mu", min_mu, "require pairs per pulse >= value");
    optimize->add_option("--min-coincidences", min_c, "require C >= value (1/s)")->excludes(o_mu);
    optimize->add_option("--grid", grid, "grid points per free parameter")->capture_default_str();
    optimize->callback([&] {
        action = [&] {
            Run r("optimize", common, out);
            explore::DesignBounds bounds;
            if (!b_detuning.empty())
            {
                bounds.detuning_hz = parse_interval(b_detuning, 1e12);
            }
            if (!b_width.empty())
            {
                bounds.pulse_width_s = parse_interval(b_width, 1e-12);
            }
            if (!b_rate.empty())
            {
                bounds.rep_rate_hz = parse_interval(b_rate, 1e6);
            }
            if (!b_power.empty())
            {
                bounds.peak_power_w = parse_interval(b_power, 1e-3);
            }
            explore::DesignConstraint constraint;
            if (min_c)
            {
                constraint = {explore::ConstraintKind::min_coincidences, *min_c};
            }
            else
            {
                constraint = {r.cfg().source().pump.is_pulsed() ? explore::ConstraintKind::min_pairs_per_pulse
                                                                : explore::ConstraintKind::min_coincidences,
                              min_mu.value_or(0.0)};
            }
            explore::OptimizeOptions opt;
            opt.grid_points = grid;
            auto const design = explore::optimize_car(r.cfg(), bounds, constraint, opt);
            auto const text = explore::format_design(design);
            out << text;
            r.write("design.txt", text);
            std::ostringstream trace;
            explore::write_trace_csv(trace, design);
            r.write("trace.csv", trace.str());
            r.finish();
        };
    });

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::Success const& e)
    {
        return app.exit(e, out, err);
    }
    catch (CLI::ParseError const& e)
    {
        app.exit(e, out, err);
        return 2;
    }

    try
    {
        action();
        return 0;
    }
    catch (CalibrationError const& e)
    {
        err << "calibration error: " << e.what() << "\n";
        return 3;
    }
    catch (NumericalError const& e)
    {
        err << "numerical error: " << e.what() << "\n";
        return 4;
    }
    catch (ConfigError const& e)
    {
        err << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (fs::filesystem_error const& e)
    {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    catch (std::exception const& e)
    {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace sfwm::app
