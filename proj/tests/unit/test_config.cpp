#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "sfwm/config/config.hpp"
#include "sfwm/core/calibration.hpp"
#include "sfwm/core/errors.hpp"
#include "sfwm/core/model.hpp"
#include "sfwm/core/units.hpp"
#include "support.hpp"

using namespace sfwm;
using nlohmann::json;
using sfwm::test::rel;

namespace
{
json defaults_doc()
{
    return config::paper_defaults().to_json();
}
} // namespace

TEST_CASE("built-in defaults")
{
    auto const cfg = config::paper_defaults();
    auto const& s = cfg.source();
    CHECK(s.waveguide.length_m == 0.071);
    CHECK(s.pump.power_w == 0.057);
    CHECK(rel(s.pump.frequency_hz, 193500003549955.95) < 1e-14);
    CHECK(rel(s.waveguide.beta2, 3.0483211967930351e-25) < 1e-12);
    CHECK(s.ch0.detuning_hz == -1.4e12);
    CHECK(s.ch1.detuning_hz == 1.4e12);
    CHECK(s.ch0.is_stokes());
    CHECK(s.ch0.bandwidth_hz == 50e9);
    CHECK(s.ch0.jitter_fwhm_s == 141e-12);
    CHECK(cfg.analysis().window_s == 16e-12);
    CHECK(cfg.analysis().tia.stop_delay == 11.1e-9);
    CHECK(cfg.analysis().accidental_mode == core::AccidentalMode::binned);
}

TEST_CASE("round trips")
{
    for (auto const* name : {"paper-defaults", "paper-calibrated", "paper-pulsed", "engineered-pulsed"})
    {
        CAPTURE(name);
        auto const cfg = sfwm::test::shipped(name);
        auto const again = config::ExperimentConfig::from_json(json::parse(config::serialize(cfg)));
        CHECK(again == cfg);
        CHECK(again.hash() == cfg.hash());
        CHECK(config::serialize(again) == config::serialize(cfg));
    }
    auto const tmp = std::filesystem::temp_directory_path() / "sfwm-config-roundtrip.json";
    auto const cfg = sfwm::test::shipped("paper-calibrated");
    config::save_config(tmp, cfg);
    CHECK(config::load_config(tmp) == cfg);
    std::filesystem::remove(tmp);
    CHECK(config::paper_defaults() == sfwm::test::shipped("paper-defaults"));
}

TEST_CASE("hash is a fixed function of the document")
{
    auto const cfg = config::paper_defaults();
    CHECK(cfg.hash().size() == 16);
    CHECK(cfg.hash() == config::paper_defaults().hash());
    CHECK(cfg.with_parameter("pump.power_mW", 58.0).hash() != cfg.hash());
}

TEST_CASE("strict schema")
{
    auto doc = defaults_doc();
    doc["extra"] = 1;
    CHECK_THROWS_AS(config::ExperimentConfig::from_json(doc), ConfigError);

    doc = defaults_doc();
    doc["pump"]["power_W"] = 0.057;
    CHECK_THROWS_AS(config::ExperimentConfig::from_json(doc), ConfigError);

    doc = defaults_doc();
    doc["channels"]["detector0"]["qe"] = 0.2;
    CHECK_THROWS_AS(config::ExperimentConfig::from_json(doc), ConfigError);

    doc = defaults_doc();
    doc["pump"]["power_mW"] = "57";
    CHECK_THROWS_AS(config::ExperimentConfig::from_json(doc), ConfigError);

    doc = defaults_doc();
    doc.erase("coupling");
    CHECK_THROWS_AS(config::ExperimentConfig::from_json(doc), ConfigError);

    doc = defaults_doc();
    doc["channels"]["detector1"]["side"] = "idler";
    CHECK_THROWS_AS(config::ExperimentConfig::from_json(doc), ConfigError);

    doc = defaults_doc();
    doc["waveguide"]["n2_m2_per_W"] = 3e-18;
    doc["waveguide"]["a_eff_um2"] = 0.86;
    CHECK_THROWS_AS(config::ExperimentConfig::from_json(doc), ConfigError);

    doc = defaults_doc();
    doc["waveguide"]["beta2_s2_per_m"] = 1e-25;
    CHECK_THROWS_AS(config::ExperimentConfig::from_json(doc), ConfigError);

    doc = defaults_doc();
    doc["pump"]["pulse_width_ps"] = 5.0;
    CHECK_THROWS_AS(config::ExperimentConfig::from_json(doc), ConfigError);

    doc = defaults_doc();
    doc["analysis"]["accidental_mode"] = "gated";
    CHECK_THROWS_AS(config::ExperimentConfig::from_json(doc), ConfigError);

    doc = defaults_doc();
    doc["coupling"]["total_insertion_loss_dB"] = 3.0;
    CHECK_THROWS_AS(config::ExperimentConfig::from_json(doc), ConfigError);

    doc = defaults_doc();
    doc["noise"]["raman_table"] = json::array({json::array({1.0, -0.5}), json::array({2.0, 1.0})});
    CHECK_THROWS_AS(config::ExperimentConfig::from_json(doc), ConfigError);

    doc = defaults_doc();
    doc["waveguide"]["length_cm"] = 0.0;
    CHECK_THROWS_AS(config::ExperimentConfig::from_json(doc), ConfigError);

    CHECK_THROWS_AS(config::load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("derived waveguide parameters")
{
    auto doc = defaults_doc();
    doc["waveguide"].erase("gamma_per_W_per_m");
    doc["waveguide"]["n2_m2_per_W"] = 3e-18;
    doc["waveguide"]["a_eff_um2"] = 0.86;
    doc["waveguide"].erase("dispersion_ps_per_nm_km");
    doc["waveguide"]["beta2_s2_per_m"] = -2.8e-26;
    auto const cfg = config::ExperimentConfig::from_json(doc);
    double const expected = 2 * units::kPi * 3e-18 / (1550e-9 * 0.86e-12);
    CHECK(rel(cfg.source().waveguide.gamma, expected) < 1e-9);
    CHECK(cfg.source().waveguide.beta2 == -2.8e-26);
}

TEST_CASE("defaults are filled in")
{
    json doc = defaults_doc();
    doc.erase("analysis");
    doc["coupling"].erase("facet_split");
    doc["noise"].erase("pump_leakage");
    auto const cfg = config::ExperimentConfig::from_json(doc);
    CHECK(cfg.to_json()["analysis"]["window_ps"] == 16.0);
    CHECK(cfg.to_json()["coupling"]["facet_split"] == 0.5);
    CHECK(cfg.to_json()["noise"]["pump_leakage"].is_null());
    CHECK(core::predict_observables(cfg.source(), 16e-12, core::AccidentalMode::binned).singles0.leakage == 0.0);
    CHECK(config::ExperimentConfig::from_json(cfg.to_json()) == cfg);
}

TEST_CASE("parameter paths")
{
    auto const cfg = config::paper_defaults();
    CHECK(cfg.parameter("pump.power_mW") == 57.0);
    CHECK(cfg.parameter("pump.power") == 57.0);
    CHECK(cfg.canonical_path("pump.power") == "pump.power_mW");
    CHECK(cfg.parameter("channels.detector1.detector_qe") == 0.08);
    CHECK(cfg.parameter("noise.raman_table.0.0") == -12.0);
    auto const p = cfg.with_parameter("pump.power", 30.0);
    CHECK(p.source().pump.power_w == 0.03);
    CHECK_THROWS_AS(cfg.parameter("pump.wattage"), ConfigError);
    CHECK_THROWS_AS(cfg.parameter("pump.mode"), ConfigError);
    CHECK_THROWS_AS(cfg.parameter("pump..power_mW"), ConfigError);
    CHECK_THROWS_AS(cfg.with_parameter("channels.detector0.detector_qe", 0.0), ConfigError);
}

TEST_CASE("calibration written back into the document")
{
    auto const cfg = config::paper_defaults();
    auto const cal = core::calibrate(80.0, 3.45e6, 1.34e6, cfg.source());
    auto const written = cfg.with_calibration(cal);
    CHECK(written.to_json()["waveguide"]["eta_alpha"] == cal.eta_alpha.eta_alpha);
    CHECK(written.to_json()["noise"]["raman_table_source"] == "calibrated");
    auto const reloaded = config::ExperimentConfig::from_json(json::parse(config::serialize(written)));
    auto const o = core::predict_observables(reloaded.source(), 16e-12, core::AccidentalMode::binned).obs;
    CHECK(rel(o.C, 80.0) < 1e-9);
    CHECK(rel(o.N0, 3.45e6) < 1e-9);
    CHECK(rel(o.N1, 1.34e6) < 1e-9);
    auto const& pts = reloaded.source().noise.raman.points();
    auto const& orig = cal.calibrated.noise.raman.points();
    REQUIRE(pts.size() == orig.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        CHECK(pts[i].detuning_hz == orig[i].detuning_hz);
        CHECK(pts[i].rho == orig[i].rho);
    }
}

TEST_CASE("accidental mode names")
{
    CHECK(config::parse_accidental_mode("gated") == core::AccidentalMode::gated);
    CHECK(std::string(config::accidental_mode_name(core::AccidentalMode::binned)) == "binned");
    CHECK_THROWS_AS(config::parse_accidental_mode("windowed"), ConfigError);
}
