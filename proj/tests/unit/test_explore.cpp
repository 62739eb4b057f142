#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sfwm/config/config.hpp"
#include "sfwm/core/errors.hpp"
#include "sfwm/core/model.hpp"
#include "sfwm/core/noise.hpp"
#include "sfwm/explore/curve_io.hpp"
#include "sfwm/explore/fit.hpp"
#include "sfwm/explore/optimize.hpp"
#include "sfwm/explore/pulsed.hpp"
#include "sfwm/explore/sweep.hpp"
#include "support.hpp"

using namespace sfwm;
using nlohmann::json;
using sfwm::test::rel;

namespace
{
config::ExperimentConfig calibrated()
{
    return sfwm::test::shipped("paper-calibrated");
}

config::ExperimentConfig pulsed_calibrated()
{
    return sfwm::test::shipped("paper-pulsed");
}
} // namespace

TEST_CASE("value specs")
{
    CHECK(explore::parse_values("1,2,3.5") == std::vector<double>{1, 2, 3.5});
    auto const lin = explore::parse_values("10:60:6");
    CHECK(lin == std::vector<double>{10, 20, 30, 40, 50, 60});
    auto const lg = explore::parse_values("0.001:0.1:3:log");
    CHECK(lg.front() == 0.001);
    CHECK(rel(lg[1], 0.01) < 1e-14);
    CHECK(lg.back() == 0.1);
    CHECK(explore::parse_values("1:2").size() == 11);
    CHECK(explore::parse_values("5:5:1") == std::vector<double>{5});
    CHECK_THROWS_AS(explore::parse_values("1,,2"), ConfigError);
    CHECK_THROWS_AS(explore::parse_values("1:2:0"), ConfigError);
    CHECK_THROWS_AS(explore::parse_values("1:2:3:cubic"), ConfigError);
    CHECK_THROWS_AS(explore::parse_values("0:2:3:log"), ConfigError);
    CHECK_THROWS_AS(explore::parse_values("a"), ConfigError);
}

TEST_CASE("sweep spec validation")
{
    CHECK_THROWS_AS((explore::SweepSpec{"pump.power_mW", {}}).validate(), ConfigError);
    CHECK_THROWS_AS((explore::SweepSpec{"pump.power_mW", {1, 3, 2}}).validate(), ConfigError);
    CHECK_THROWS_AS((explore::SweepSpec{"pump.power_mW", {1, 1}}).validate(), ConfigError);
    CHECK_NOTHROW((explore::SweepSpec{"pump.power_mW", {3, 2, 1}}).validate());
    CHECK_THROWS_AS(explore::sweep(calibrated(), {"pump.wattage", {1, 2}}), ConfigError);
}

TEST_CASE("power sweep")
{
    auto const cfg = calibrated();
    auto const curve = explore::sweep(cfg, {"pump.power_mW", explore::parse_values("10:60:6")});
    REQUIRE(curve.rows.size() == 6);
    CHECK(curve.config_hash == cfg.hash());
    auto const c = curve.coincidences();
    for (std::size_t i = 1; i < c.size(); ++i)
    {
        CHECK(c[i] > c[i - 1]);
    }
    auto const fit = explore::fit_power_law(curve.params(), c);
    CHECK(fit.exponent >= 1.95);
    CHECK(fit.exponent <= 2.05);
    CHECK(fit.points == 6);

    // singles decompose into quadratic, linear and constant parts
    for (auto const& row : curve.rows)
    {
        auto const& s = row.prediction.singles0;
        CHECK(row.prediction.obs.N0 == s.sfwm + s.raman + s.leakage + s.dark);
        CHECK(s.dark == 1000.0);
    }
    auto const& lo = curve.rows.front().prediction.singles0;
    auto const& hi = curve.rows.back().prediction.singles0;
    CHECK(rel(hi.raman / lo.raman, 6.0) < 1e-12);
    CHECK(rel(hi.leakage / lo.leakage, 6.0) < 1e-12);
    double const r_ratio = curve.rows.back().prediction.obs.r / curve.rows.front().prediction.obs.r;
    CHECK(rel(hi.sfwm / lo.sfwm, r_ratio) < 1e-12);
}

TEST_CASE("coupling sweep follows eta squared")
{
    auto const cfg = calibrated();
    auto const curve = explore::sweep(cfg, {"coupling.output_scale", {0.25, 0.5, 0.75, 1.0}});
    double const cmax = curve.rows.back().prediction.obs.C;
    std::vector<double> const expected{1.0 / 16, 1.0 / 4, 9.0 / 16, 1.0};
    for (std::size_t i = 0; i < 4; ++i)
    {
        CHECK(std::abs(curve.rows[i].prediction.obs.C / cmax - expected[i]) < 1e-9);
    }
    auto const fit = explore::fit_power_law(curve.params(), curve.coincidences());
    CHECK(std::abs(fit.exponent - 2.0) < 1e-6);
}

TEST_CASE("sweeps are pure")
{
    auto const cfg = calibrated();
    std::vector<double> v{10, 25, 40, 55};
    auto const fwd = explore::sweep(cfg, {"pump.power", v});
    std::reverse(v.begin(), v.end());
    auto const rev = explore::sweep(cfg, {"pump.power", v});
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        auto const& a = fwd.rows[i];
        auto const& b = rev.rows[v.size() - 1 - i];
        CHECK(a.param == b.param);
        CHECK(a.prediction.obs.C == b.prediction.obs.C);
        CHECK(a.prediction.obs.CAR == b.prediction.obs.CAR);
    }
    auto const one = explore::sweep(cfg, {"pump.power", {25}});
    CHECK(one.rows[0].prediction.obs.C == fwd.rows[1].prediction.obs.C);
}

TEST_CASE("power-law fit")
{
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x)
    {
        y.push_back(3 * v * v);
    }
    auto const f = explore::fit_power_law(x, y);
    CHECK(std::abs(f.exponent - 2.0) < 1e-12);
    CHECK(rel(f.coefficient, 3.0) < 1e-12);
    CHECK(f.residual_rms < 1e-12);

    auto const flat = explore::fit_power_law(x, {7, 7, 7, 7, 7});
    CHECK(std::abs(flat.exponent) < 1e-12);

    CHECK_THROWS_AS(explore::fit_power_law({1, 2}, {1, 4}), ConfigError);
    CHECK_THROWS_AS(explore::fit_power_law({1, 2, 3}, {1, 0, 9}), ConfigError);
    CHECK_THROWS_AS(explore::fit_power_law({1, 2, -3}, {1, 4, 9}), ConfigError);
    CHECK_THROWS_AS(explore::fit_power_law({2, 2, 2}, {1, 4, 9}), ConfigError);
}

TEST_CASE("peak power for a pairs-per-pulse target")
{
    auto const src = pulsed_calibrated().source();
    double const p = explore::power_for_pairs_per_pulse(src, 0.01);
    CHECK(rel(p, 0.45305403040144643) < 1e-8);
    CHECK(p > 0.1);
    CHECK(p < 1.0);
    for (double mu : {1e-6, 1e-4, 0.01, 0.02})
    {
        auto c = src;
        c.pump.power_w = explore::power_for_pairs_per_pulse(src, mu);
        CHECK(rel(explore::pairs_per_pulse(c), mu) < 1e-6);
    }
    double const p1 = explore::power_for_pairs_per_pulse(src, 1e-6);
    double const p4 = explore::power_for_pairs_per_pulse(src, 4e-6);
    CHECK(rel(p4 / p1, 2.0) < 0.02);
    CHECK(rel(p4 / p1, 2.0022442235895625) < 1e-6);

    CHECK_THROWS_AS(explore::power_for_pairs_per_pulse(src, 0.5), NumericalError);
    CHECK_THROWS_AS(explore::power_for_pairs_per_pulse(src, 0.0), ConfigError);
    CHECK_THROWS_AS(explore::power_for_pairs_per_pulse(calibrated().source(), 0.01), ConfigError);
}

TEST_CASE("CAR against pairs per pulse")
{
    auto const cfg = pulsed_calibrated();
    auto const mus = explore::parse_values("0.001:0.02:12:log");
    auto const curve = explore::car_vs_mu(cfg, mus, core::AccidentalMode::gated);
    auto const car = curve.cars();
    // Darks fix the accidental floor at low mu, so CAR first rises, peaks
    // near mu = 0.0039 and then falls.
    for (std::size_t i = 1; i < car.size(); ++i)
    {
        if (mus[i] <= 0.0035)
        {
            CHECK(car[i] > car[i - 1]);
        }
        if (mus[i - 1] >= 0.0045)
        {
            CHECK(car[i] < car[i - 1]);
        }
    }

    auto doc = cfg.to_json();
    doc["channels"]["detector0"]["dark_rate_per_s"] = 0.0;
    doc["channels"]["detector1"]["dark_rate_per_s"] = 0.0;
    auto const dark_free = explore::car_vs_mu(config::ExperimentConfig::from_json(doc), mus,
                                              core::AccidentalMode::gated).cars();
    for (std::size_t i = 1; i < dark_free.size(); ++i)
    {
        CHECK(dark_free[i] < dark_free[i - 1]);
    }
    auto const at = explore::car_vs_mu(cfg, {0.01}, core::AccidentalMode::gated);
    auto const& o = at.rows[0].prediction.obs;
    CHECK(rel(o.C, 1.8478165494984425) < 1e-7);
    CHECK(rel(o.N0, 16442.354268027512) < 1e-7);
    CHECK(rel(o.N1, 7051.2547955694264) < 1e-7);
    CHECK(rel(o.CAR, 1.5937802582732114) < 1e-7);
    CHECK_THROWS_AS(explore::car_vs_mu(calibrated(), {0.01}, core::AccidentalMode::binned), ConfigError);
}

TEST_CASE("binned CAR times mu is constant without noise")
{
    auto doc = pulsed_calibrated().to_json();
    doc["noise"]["raman_table"] = json::array({json::array({-20.0, 0.0}), json::array({20.0, 0.0})});
    doc["noise"]["pump_leakage"] = nullptr;
    doc["channels"]["detector0"]["dark_rate_per_s"] = 0.0;
    doc["channels"]["detector1"]["dark_rate_per_s"] = 0.0;
    auto const cfg = config::ExperimentConfig::from_json(doc);
    auto const curve = explore::car_vs_mu(cfg, explore::parse_values("0.001:0.02:8:log"), core::AccidentalMode::binned);
    double const ref = curve.rows[0].prediction.obs.CAR * curve.rows[0].param;
    for (auto const& row : curve.rows)
    {
        CHECK(rel(row.prediction.obs.CAR * row.param, ref) < 1e-9);
    }
}

TEST_CASE("CAR against detuning")
{
    auto const base = calibrated();
    double const n_ref = core::thermal_occupancy(1e12, 300.0);

    SUBCASE("flat noise density leaves only the phase-matching envelope")
    {
        // rho * occupancy held constant on both sides, no pump leakage
        auto doc = base.to_json();
        json table = json::array();
        for (double nu = 0.2; nu <= 3.0 + 1e-9; nu += 0.1)
        {
            double const n = core::thermal_occupancy(nu * 1e12, 300.0);
            table.push_back(json::array({-nu, 0.4 * (n_ref + 1) / (n + 1)}));
            table.push_back(json::array({nu, 0.4 * n_ref / n}));
        }
        doc["noise"]["raman_table"] = table;
        doc["noise"]["pump_leakage"] = nullptr;
        auto const cfg = config::ExperimentConfig::from_json(doc);
        auto const curve = explore::car_vs_detuning(cfg, explore::parse_values("0.6:1.4:9"));
        auto const car = curve.cars();
        double const lo = *std::min_element(car.begin(), car.end());
        double const hi = *std::max_element(car.begin(), car.end());
        // independent envelope: sinc^2 at the band edges
        auto envelope = [&](double nu) {
            auto const& s = cfg.source();
            double const x = core::phase_mismatch(s.waveguide, s.pump, nu * 1e12);
            return std::pow(std::sin(x) / x, 2);
        };
        double const expected = 1.0 - envelope(1.4) / envelope(0.6);
        CHECK(rel(1.0 - lo / hi, expected) < 0.05);
    }
    SUBCASE("leakage roll-off produces the low-detuning drop")
    {
        auto const curve = explore::car_vs_detuning(base, {0.3, 1.0});
        CHECK(curve.rows[0].prediction.obs.CAR < 0.5 * curve.rows[1].prediction.obs.CAR);
    }
    SUBCASE("infinite rejection removes the drop")
    {
        auto doc = base.to_json();
        doc["noise"]["pump_leakage"] = nullptr;
        auto const cfg = config::ExperimentConfig::from_json(doc);
        auto const curve = explore::car_vs_detuning(cfg, {0.3, 1.0});
        for (auto const& row : curve.rows)
        {
            CHECK(row.prediction.singles0.leakage == 0.0);
        }
        auto const with = explore::car_vs_detuning(base, {0.3});
        CHECK(curve.rows[0].prediction.obs.CAR > with.rows[0].prediction.obs.CAR);
    }
    CHECK_THROWS_AS(explore::car_vs_detuning(base, {13.0}), ExtrapolationError);
    CHECK_THROWS_AS(explore::car_vs_detuning(base, {0.0, 1.0}), ConfigError);
}

TEST_CASE("window calibration")
{
    auto const eng = sfwm::test::shipped("engineered-pulsed");
    auto const w = explore::calibrate_window(eng, 10.0, 0.01, core::AccidentalMode::gated);
    auto const curve = explore::car_vs_mu(w.config, {0.01}, core::AccidentalMode::gated);
    CHECK(rel(curve.rows[0].prediction.obs.CAR, 10.0) < 1e-9);
    CHECK(w.config.to_json()["noise"]["raman_table_source"] == "calibrated+window");
    try
    {
        (void)explore::calibrate_window(eng, 250.0, 0.01, core::AccidentalMode::gated);
        FAIL("expected a calibration error");
    }
    catch (CalibrationError const& e)
    {
        CHECK(std::string(e.what()).find("bound") != std::string::npos);
    }
    auto const binned = explore::calibrate_window(eng, 250.0, 0.01, core::AccidentalMode::binned);
    CHECK(rel(binned.car, 250.0) < 1e-9);
}

TEST_CASE("optimizer")
{
    auto const eng = sfwm::test::shipped("engineered-pulsed");

    SUBCASE("point box returns the point")
    {
        explore::DesignBounds b;
        b.detuning_hz = explore::Interval{7.4e12, 7.4e12};
        b.peak_power_w = explore::Interval{0.3, 0.3};
        auto const d = explore::optimize_car(eng, b, {explore::ConstraintKind::min_pairs_per_pulse, 0.0});
        CHECK(d.best == std::vector<double>{7.4e12, 0.3});
    }
    SUBCASE("detuning lands in the low-Raman window")
    {
        // two low windows: a shallow one near 4 THz and the deep one at 7.4 THz
        auto doc = eng.to_json();
        json table = json::array();
        for (double s : {-1.0, 1.0})
        {
            for (auto const& [nu, rho] : std::vector<std::pair<double, double>>{
                     {3.0, 0.7}, {4.0, 0.5}, {5.0, 0.96}, {6.5, 1.04}, {7.4, 0.2}, {8.3, 1.2}, {10.3, 3.2}})
            {
                table.push_back(json::array({s * nu, rho}));
            }
        }
        doc["noise"]["raman_table"] = table;
        auto const cfg = config::ExperimentConfig::from_json(doc);
        explore::DesignBounds b;
        b.detuning_hz = explore::Interval{3.0e12, 10.3e12};
        explore::OptimizeOptions opt;
        opt.grid_points = 12;
        auto const d = explore::optimize_car(cfg, b, {explore::ConstraintKind::min_pairs_per_pulse, 0.0}, opt);

        // fine grid oracle over the same table
        double best_nu = 0.0;
        double best_car = -1.0;
        for (double nu = 3.0e12; nu <= 10.3e12; nu += 0.001e12)
        {
            auto const s = explore::apply_design(cfg.source(), {"detuning_hz"}, {nu});
            double const car = core::predict_observables(s, 16e-12, core::AccidentalMode::gated).obs.CAR;
            if (car > best_car)
            {
                best_car = car;
                best_nu = nu;
            }
        }
        CHECK(std::abs(best_nu - 7.4e12) < 0.01e12);
        CHECK(std::abs(d.best[0] - 7.4e12) < 0.05e12);
        // converged to the parameter tolerance; CAR has a kink at the optimum
        CHECK(std::abs(d.best[0] - best_nu) <= 1e-3 * best_nu);
        CHECK(d.car <= best_car);
    }
    SUBCASE("consistency and constraints")
    {
        explore::DesignBounds b;
        b.detuning_hz = explore::Interval{6.0e12, 9.0e12};
        b.peak_power_w = explore::Interval{0.05, 1.0};
        explore::DesignConstraint const c{explore::ConstraintKind::min_pairs_per_pulse, 0.005};
        auto const d = explore::optimize_car(eng, b, c);
        auto const s = explore::apply_design(eng.source(), d.names, d.best);
        auto const a = eng.analysis();
        auto const p = core::predict_observables(s, a.window_s, a.accidental_mode);
        CHECK(rel(p.obs.CAR, d.car) < 1e-9);
        CHECK(d.mu >= 0.005);
        double best_grid = -1.0;
        for (auto const& tp : d.trace)
        {
            if (tp.feasible)
            {
                CHECK(tp.car <= d.car);
                CHECK(tp.mu >= 0.005);
                best_grid = std::max(best_grid, tp.car);
            }
        }
        CHECK(d.car >= best_grid);
        auto const again = explore::optimize_car(eng, b, c);
        CHECK(again.best == d.best);
        CHECK(again.trace.size() == d.trace.size());
    }
    SUBCASE("errors")
    {
        explore::DesignBounds b;
        CHECK_THROWS_AS(explore::optimize_car(eng, b, {}), ConfigError);
        b.peak_power_w = explore::Interval{0.01, 0.02};
        CHECK_THROWS_AS(explore::optimize_car(eng, b, {explore::ConstraintKind::min_pairs_per_pulse, 0.5}),
                        ConfigError);
        b.peak_power_w = explore::Interval{0.2, 0.1};
        CHECK_THROWS_AS(explore::optimize_car(eng, b, {}), ConfigError);
    }
}

TEST_CASE("curve CSV")
{
    auto const curve = explore::sweep(calibrated(), {"pump.power_mW", {10, 20}});
    std::ostringstream os;
    explore::write_curve_csv(os, curve);
    auto const text = os.str();
    CHECK(text.rfind("# param=pump.power_mW\n# config_hash=", 0) == 0);
    CHECK(text.find("\nparam,r,C,N0,N1,A,CAR\n10,") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.back() == '\n');
}
