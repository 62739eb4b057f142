#include "doctest.h"

#include <string>

#include "sfwm/config/config.hpp"
#include "sfwm/core/calibration.hpp"
#include "sfwm/core/errors.hpp"
#include "sfwm/core/model.hpp"
#include "support.hpp"

using namespace sfwm;
using sfwm::test::rel;

namespace
{
core::SourceConfig paper()
{
    return config::paper_defaults().source();
}

core::ModelObservables predict(core::SourceConfig const& cfg)
{
    return core::predict_observables(cfg, 16e-12, core::AccidentalMode::binned).obs;
}
} // namespace

TEST_CASE("eta_alpha calibration")
{
    auto cfg = paper();
    auto const cal = core::calibrate_eta_alpha(80.0, cfg);
    CHECK(rel(cal.eta_alpha, 0.15158219100529828) < 1e-12);
    CHECK(cal.delta_nu == 50e9);

    CHECK(rel(core::calibrate_eta_alpha(cal.lossless_coincidences, cfg).eta_alpha, 1.0) < 1e-15);

    cfg.waveguide.calibrated_eta_alpha = cal.eta_alpha;
    CHECK(rel(predict(cfg).C, 80.0) < 1e-9);

    try
    {
        (void)core::calibrate_eta_alpha(1e5, paper());
        FAIL("expected a calibration error");
    }
    catch (CalibrationError const& e)
    {
        CHECK(std::string(e.what()).find("bound") != std::string::npos);
    }
    CHECK_THROWS_AS(core::calibrate_eta_alpha(0.0, paper()), ConfigError);
}

TEST_CASE("Raman calibration")
{
    auto cfg = paper();
    cfg.waveguide.calibrated_eta_alpha = 0.15158219100529828;
    auto const cal = core::calibrate_raman(3.45e6, 1.34e6, cfg);
    CHECK(rel(cal.noise_rate0, 242406701.91013516) < 1e-9);
    CHECK(rel(cal.noise_rate1, 223237983.89480456) < 1e-9);
    CHECK(rel(cal.rho0, 0.40359893447512056) < 1e-9);
    CHECK(rel(cal.rho1, 0.46498624197206967) < 1e-9);
    CHECK(rel(cal.noise_rate0, cal.noise_rate1) < 0.1);

    auto applied = cfg;
    applied.noise = core::apply_raman_calibration(cfg.noise, cal);
    auto const o = predict(applied);
    CHECK(rel(o.N0, 3.45e6) < 1e-9);
    CHECK(rel(o.N1, 1.34e6) < 1e-9);
}

TEST_CASE("Raman calibration at the noise-free singles gives rho = 0")
{
    auto cfg = paper();
    cfg.noise.leakage = {INFINITY, 0.0, INFINITY};
    auto const p = core::predict_observables(cfg, 16e-12, core::AccidentalMode::binned);
    double const n0 = p.singles0.sfwm + p.singles0.dark;
    double const n1 = p.singles1.sfwm + p.singles1.dark;
    auto const cal = core::calibrate_raman(n0, n1, cfg);
    CHECK(std::abs(cal.rho0) < 1e-9);
    CHECK(std::abs(cal.rho1) < 1e-9);
    CHECK_THROWS_AS(core::calibrate_raman(0.5 * n0, n1, cfg), CalibrationError);
    CHECK_THROWS_AS(core::calibrate_raman(n0, 0.5 * n1, cfg), CalibrationError);
}

TEST_CASE("full calibration reproduces the measurements")
{
    auto const cal = core::calibrate(80.0, 3.45e6, 1.34e6, paper());
    auto const o = predict(cal.calibrated);
    CHECK(rel(o.C, 80.0) < 1e-9);
    CHECK(rel(o.N0, 3.45e6) < 1e-9);
    CHECK(rel(o.N1, 1.34e6) < 1e-9);
    CHECK(cal.calibrated.waveguide.calibrated_eta_alpha.has_value());
}
