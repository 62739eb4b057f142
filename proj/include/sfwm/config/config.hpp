#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "sfwm/core/calibration.hpp"
#include "sfwm/core/types.hpp"
#include "sfwm/sim/tia.hpp"

namespace sfwm::config
{
struct AnalysisSettings
{
    double window_s = 16e-12;
    core::AccidentalMode accidental_mode = core::AccidentalMode::binned;
    sim::TiaConfig tia;
    sim::AnalysisOptions peak;
};

// Full experiment description. Keys carry their units (power_mW,
// detuning_THz, ...) and are converted to SI once, here. The normalized
// document (defaults filled in) is kept so that load -> save -> load is
// the identity and the hash is stable.
class ExperimentConfig
{
  public:
    // Strict: unknown keys, wrong types and invariant violations throw ConfigError.
    static ExperimentConfig from_json(nlohmann::json const& doc);

    nlohmann::json const& to_json() const { return doc_; }
    core::SourceConfig const& source() const { return source_; }
    AnalysisSettings const& analysis() const { return analysis_; }

    // FNV-1a 64 of the canonical (sorted-key, shortest-float) serialization.
    std::string hash() const;

    // Dot-addressed numeric field, e.g. "pump.power_mW" or
    // "channels.detector1.detector_qe". Throws ConfigError when the path
    // does not resolve to a number.
    double parameter(std::string_view path) const;
    // Expands unit-less segments to the unique key carrying a unit suffix
    // ("pump.power" -> "pump.power_mW"). Unresolvable paths come back as is.
    std::string canonical_path(std::string_view path) const;
    ExperimentConfig with_parameter(std::string_view path, double value) const;
    // Replace any value (string, object, ...) at a path, then re-validate.
    ExperimentConfig with_value(std::string_view path, nlohmann::json value) const;

    // Writes calibrated eta_alpha and the Raman table back into the document.
    ExperimentConfig with_calibration(core::Calibration const& cal) const;
    ExperimentConfig with_raman_table(core::RamanTable const& table, std::string_view source_tag) const;

    bool operator==(ExperimentConfig const& other) const { return doc_ == other.doc_; }

  private:
    nlohmann::json doc_;
    core::SourceConfig source_;
    AnalysisSettings analysis_;
};

// The measured device and setup as published: 7.1 cm As2S3 guide, TE
// mode, 57 mW CW at 1549.315 nm, +-1.4 THz channels. eta_alpha analytic,
// Raman table at nominal scale (uncalibrated).
ExperimentConfig paper_defaults();

ExperimentConfig load_config(std::filesystem::path const& path);
void save_config(std::filesystem::path const& path, ExperimentConfig const& cfg);
std::string serialize(ExperimentConfig const& cfg);

char const* accidental_mode_name(core::AccidentalMode mode);
core::AccidentalMode parse_accidental_mode(std::string_view name);

} // namespace sfwm::config
