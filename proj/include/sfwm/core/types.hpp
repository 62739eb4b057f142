#pragma once

#include <optional>
#include <variant>
#include <vector>

// Domain types for the photon-pair source model. All fields are SI:
// meters, seconds, hertz, watts. Loss figures stay in dB because that is
// how they are measured and budgeted.

namespace sfwm::core
{
struct WaveguideSpec
{
    double length_m = 0.0;
    double prop_loss_db_per_cm = 0.0;  // power loss, per polarization
    double gamma = 0.0;                // W^-1 m^-1
    double beta2 = 0.0;                // s^2 m^-1

    // Pair-photon in-guide survival override. Unset means the analytic
    // default L_eff/L.
    std::optional<double> calibrated_eta_alpha;

    // Power attenuation coefficient, Np/m.
    double alpha() const;
    double effective_length() const;
    double analytic_eta_alpha() const;
    double eta_alpha() const;

    void validate() const;
};

struct ContinuousWave
{
};

struct Pulsed
{
    double pulse_width_s = 0.0;
    double rep_rate_hz = 0.0;
};

using PumpMode = std::variant<ContinuousWave, Pulsed>;

struct PumpConfig
{
    double frequency_hz = 0.0;
    // In-waveguide power. Peak power when pulsed.
    double power_w = 0.0;
    PumpMode mode = ContinuousWave{};

    bool is_pulsed() const { return std::holds_alternative<Pulsed>(mode); }
    Pulsed const& pulse() const;  // throws ConfigError when CW
    // 1 for CW, tau*B for pulsed.
    double duty_cycle() const;

    void validate() const;
};

// One arm of the measurement: filter passband plus detector.
struct DetectionChannel
{
    double detuning_hz = 0.0;   // signed; signal > 0, idler < 0
    double bandwidth_hz = 0.0;  // effective rectangular passband
    double filter_loss_db = 0.0;
    double detector_qe = 1.0;
    double dark_rate = 0.0;  // s^-1
    double jitter_fwhm_s = 0.0;
    double dead_time_s = 0.0;

    // detector_qe * 10^(-filter_loss/10)
    double efficiency() const;
    // The idler (red) side is Stokes for Raman bookkeeping.
    bool is_stokes() const { return detuning_hz < 0.0; }

    void validate() const;
};

struct CouplingSpec
{
    double total_insertion_loss_db = 0.0;
    // Fraction of the non-propagation loss assigned to the input facet.
    double facet_split = 0.5;
    // Normalized output coupling (misalignment), 1 at the optimum.
    double output_scale = 1.0;

    void validate() const;
};

struct CouplingBudget
{
    double propagation_loss_db = 0.0;
    double input_loss_db = 0.0;
    double output_loss_db = 0.0;
    double input_eta = 1.0;
    double output_eta = 1.0;
};

struct RamanPoint
{
    double detuning_hz = 0.0;
    double rho = 0.0;  // photons s^-1 Hz^-1 W^-1 m^-1
};

// Spectral Raman coefficient tabulated on signed detuning and linearly
// interpolated. Lookups outside the table throw ExtrapolationError.
class RamanTable
{
  public:
    RamanTable() = default;
    explicit RamanTable(std::vector<RamanPoint> points);

    double at(double detuning_hz) const;
    bool covers(double detuning_hz) const;
    std::vector<RamanPoint> const& points() const { return points_; }

    // Multiply every entry on one side of the pump (sign of detuning) by factor.
    RamanTable scaled_side(bool stokes_side, double factor) const;
    // Set the value at a detuning, inserting a point when none exists there.
    RamanTable with_point(double detuning_hz, double rho) const;

  private:
    std::vector<RamanPoint> points_;
};

// Filter rejection of residual pump: rises linearly with |detuning| from
// rejection_at_zero_db until it saturates at floor_db.
struct PumpLeakage
{
    double rejection_at_zero_db = 0.0;
    double slope_db_per_hz = 0.0;
    double floor_db = 0.0;

    double rejection_db(double detuning_hz) const;
    void validate() const;
};

struct NoiseModel
{
    RamanTable raman;
    double temperature_k = 300.0;
    PumpLeakage leakage;

    void validate() const;
};

enum class AccidentalMode
{
    binned,  // A = N0 N1 t
    gated    // A = N0 N1 / B, pulsed pump only
};

// Everything the analytic model needs for one operating point.
struct SourceConfig
{
    WaveguideSpec waveguide;
    PumpConfig pump;
    CouplingSpec coupling;
    DetectionChannel ch0;  // TIA start, detector-0
    DetectionChannel ch1;  // TIA stop, detector-1
    NoiseModel noise;

    void validate() const;
};

struct ModelObservables
{
    double r = 0.0;    // pairs/s generated (in-pulse when pulsed)
    double C = 0.0;    // net coincidences/s
    double N0 = 0.0;   // singles/s
    double N1 = 0.0;
    double A = 0.0;    // accidentals/s in window t
    double CAR = 0.0;  // C/A, NaN when A == 0
    double t = 0.0;    // effective window, 1/B in gated mode
};

// Contributions to one singles rate, already multiplied through the
// detection chain.
struct SinglesBreakdown
{
    double sfwm = 0.0;
    double raman = 0.0;
    double leakage = 0.0;
    double dark = 0.0;

    double total() const { return sfwm + raman + leakage + dark; }
};

// Observables plus the conventions used to obtain them.
struct Prediction
{
    ModelObservables obs;
    double sigma = 1.0;
    double eta_alpha = 1.0;
    double eta_alpha_analytic = 1.0;
    bool eta_alpha_calibrated = false;
    double eta_out = 1.0;
    double delta_nu = 0.0;
    double pump_power_w = 0.0;
    double raman_rate0 = 0.0;  // r_n0, generation-referenced
    double raman_rate1 = 0.0;
    SinglesBreakdown singles0;
    SinglesBreakdown singles1;
};

} // namespace sfwm::core
