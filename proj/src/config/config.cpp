#include "sfwm/config/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "sfwm/core/errors.hpp"
#include "sfwm/core/model.hpp"
#include "sfwm/core/units.hpp"

namespace sfwm::config
{
using nlohmann::json;

namespace
{
constexpr double kThz = 1e12;

// Reads one JSON object, remembers which keys were consumed and writes
// the normalized form (defaults filled in) to `out`.
class ObjectReader
{
  public:
    ObjectReader(json const& in, std::string path, json& out)
        : in_(in)
        , path_(std::move(path))
        , out_(out)
    {
        if (!in_.is_object())
        {
            throw ConfigError(where("") + " must be an object");
        }
        out_ = json::object();
    }

    bool has(std::string const& key) const { return in_.contains(key) && !in_.at(key).is_null(); }
    bool contains(std::string const& key) const { return in_.contains(key); }

    double number(std::string const& key)
    {
        if (!has(key))
        {
            throw ConfigError("missing required key " + where(key));
        }
        return take_number(key);
    }

    double number_or(std::string const& key, double fallback)
    {
        if (!has(key))
        {
            seen_.insert(key);
            out_[key] = fallback;
            return fallback;
        }
        return take_number(key);
    }

    std::optional<double> optional_number(std::string const& key)
    {
        if (!has(key))
        {
            seen_.insert(key);
            return std::nullopt;
        }
        return take_number(key);
    }

    std::string string_or(std::string const& key, std::string fallback)
    {
        seen_.insert(key);
        if (!has(key))
        {
            out_[key] = fallback;
            return fallback;
        }
        auto const& v = in_.at(key);
        if (!v.is_string())
        {
            throw ConfigError(where(key) + " must be a string");
        }
        out_[key] = v;
        return v.get<std::string>();
    }

    json const& raw(std::string const& key)
    {
        seen_.insert(key);
        return in_.at(key);
    }

    void put(std::string const& key, json value) { out_[key] = std::move(value); }

    ObjectReader child(std::string const& key)
    {
        seen_.insert(key);
        static json const empty = json::object();
        json const& sub = has(key) ? in_.at(key) : empty;
        return ObjectReader(sub, where(key), out_[key]);
    }

    ObjectReader required_child(std::string const& key)
    {
        if (!has(key))
        {
            throw ConfigError("missing required section " + where(key));
        }
        return child(key);
    }

    std::string where(std::string const& key) const
    {
        if (key.empty())
        {
            return path_.empty() ? "<root>" : path_;
        }
        return path_.empty() ? key : path_ + "." + key;
    }

    void finish() const
    {
        for (auto const& [key, value] : in_.items())
        {
            if (!seen_.count(key))
            {
                throw ConfigError("unknown key " + where(key));
            }
        }
    }

  private:
    double take_number(std::string const& key)
    {
        seen_.insert(key);
        auto const& v = in_.at(key);
        if (!v.is_number())
        {
            throw ConfigError(where(key) + " must be a number");
        }
        double const d = v.get<double>();
        if (!std::isfinite(d))
        {
            throw ConfigError(where(key) + " must be finite");
        }
        out_[key] = v;
        return d;
    }

    json const& in_;
    std::string path_;
    json& out_;
    std::set<std::string> seen_;
};

core::DetectionChannel read_detector(ObjectReader r, double detuning_hz, double bandwidth_hz,
                                     bool& is_idler)
{
    core::DetectionChannel ch;
    auto const side = r.string_or("side", "");
    if (side != "idler" && side != "signal")
    {
        throw ConfigError(r.where("side") + " must be \"idler\" or \"signal\"");
    }
    is_idler = side == "idler";
    ch.detuning_hz = is_idler ? -detuning_hz : detuning_hz;
    ch.bandwidth_hz = bandwidth_hz;
    ch.filter_loss_db = r.number("filter_loss_dB");
    ch.detector_qe = r.number("detector_qe");
    ch.dark_rate = r.number("dark_rate_per_s");
    ch.jitter_fwhm_s = r.number_or("jitter_fwhm_ps", 0.0) * 1e-12;
    ch.dead_time_s = r.number_or("dead_time_ns", 0.0) * 1e-9;
    r.finish();
    return ch;
}

// Inverse of x * 1e12 that survives the round trip bit for bit.
double hz_to_thz(double hz)
{
    double t = hz / kThz;
    if (t * kThz == hz)
    {
        return t;
    }
    for (double cand : {std::nextafter(t, -INFINITY), std::nextafter(t, INFINITY)})
    {
        if (cand * kThz == hz)
        {
            return cand;
        }
    }
    return t;
}

std::vector<std::string> split_path(std::string_view path)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path)
    {
        if (c == '.')
        {
            parts.push_back(cur);
            cur.clear();
        }
        else
        {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    for (auto const& p : parts)
    {
        if (p.empty())
        {
            throw ConfigError("malformed parameter path '" + std::string(path) + "'");
        }
    }
    return parts;
}

json* resolve(json& doc, std::string_view path)
{
    json* node = &doc;
    for (auto const& part : split_path(path))
    {
        if (node->is_object())
        {
            auto it = node->find(part);
            if (it == node->end())
            {
                return nullptr;
            }
            node = &*it;
        }
        else if (node->is_array())
        {
            std::size_t idx = 0;
            auto const* first = part.data();
            auto const res = std::from_chars(first, first + part.size(), idx);
            if (res.ec != std::errc() || res.ptr != first + part.size() || idx >= node->size())
            {
                return nullptr;
            }
            node = &(*node)[idx];
        }
        else
        {
            return nullptr;
        }
    }
    return node;
}

} // namespace

char const* accidental_mode_name(core::AccidentalMode mode)
{
    return mode == core::AccidentalMode::gated ? "gated" : "binned";
}

core::AccidentalMode parse_accidental_mode(std::string_view name)
{
    if (name == "binned")
    {
        return core::AccidentalMode::binned;
    }
    if (name == "gated")
    {
        return core::AccidentalMode::gated;
    }
    throw ConfigError("accidental mode must be \"binned\" or \"gated\", got \"" + std::string(name) + "\"");
}

ExperimentConfig ExperimentConfig::from_json(json const& doc)
{
    ExperimentConfig cfg;
    ObjectReader root(doc, "", cfg.doc_);
    auto& src = cfg.source_;

    // pump first: the wavelength is needed to convert filter widths.
    {
        auto r = root.required_child("pump");
        double const lambda = r.number("wavelength_nm") * 1e-9;
        src.pump.frequency_hz = units::wavelength_to_frequency(lambda);
        src.pump.power_w = r.number("power_mW") * 1e-3;
        auto const mode = r.string_or("mode", "cw");
        if (mode == "cw")
        {
            src.pump.mode = core::ContinuousWave{};
            if (r.has("pulse_width_ps") || r.has("rep_rate_MHz"))
            {
                throw ConfigError("pump.pulse_width_ps / rep_rate_MHz are only valid with mode \"pulsed\"");
            }
            (void)r.optional_number("pulse_width_ps");
            (void)r.optional_number("rep_rate_MHz");
        }
        else if (mode == "pulsed")
        {
            core::Pulsed p;
            p.pulse_width_s = r.number("pulse_width_ps") * 1e-12;
            p.rep_rate_hz = r.number("rep_rate_MHz") * 1e6;
            src.pump.mode = p;
        }
        else
        {
            throw ConfigError("pump.mode must be \"cw\" or \"pulsed\"");
        }
        r.finish();
    }
    double const pump_lambda = units::frequency_to_wavelength(src.pump.frequency_hz);

    {
        auto r = root.required_child("waveguide");
        auto& wg = src.waveguide;
        wg.length_m = r.number("length_cm") * 1e-2;
        wg.prop_loss_db_per_cm = r.number("prop_loss_dB_per_cm");
        double const ref = r.number_or("reference_wavelength_nm", 1550.0) * 1e-9;

        bool const has_gamma = r.has("gamma_per_W_per_m");
        bool const has_n2 = r.has("n2_m2_per_W") || r.has("a_eff_um2");
        if (has_gamma == has_n2)
        {
            throw ConfigError("waveguide needs exactly one of gamma_per_W_per_m or (n2_m2_per_W, a_eff_um2)");
        }
        if (has_gamma)
        {
            wg.gamma = r.number("gamma_per_W_per_m");
            (void)r.optional_number("n2_m2_per_W");
            (void)r.optional_number("a_eff_um2");
        }
        else
        {
            (void)r.optional_number("gamma_per_W_per_m");
            double const n2 = r.number("n2_m2_per_W");
            double const a_eff = r.number("a_eff_um2") * 1e-12;
            wg.gamma = units::gamma_from_n2(n2, a_eff, ref);
        }

        bool const has_d = r.has("dispersion_ps_per_nm_km");
        bool const has_b2 = r.has("beta2_s2_per_m");
        if (has_d == has_b2)
        {
            throw ConfigError("waveguide needs exactly one of dispersion_ps_per_nm_km or beta2_s2_per_m");
        }
        if (has_d)
        {
            wg.beta2 = units::beta2_from_dispersion(r.number("dispersion_ps_per_nm_km"), ref);
            (void)r.optional_number("beta2_s2_per_m");
        }
        else
        {
            wg.beta2 = r.number("beta2_s2_per_m");
            (void)r.optional_number("dispersion_ps_per_nm_km");
        }

        if (r.has("eta_alpha") && r.raw("eta_alpha").is_number())
        {
            wg.calibrated_eta_alpha = r.number("eta_alpha");
        }
        else
        {
            auto const mode = r.string_or("eta_alpha", "analytic");
            if (mode != "analytic")
            {
                throw ConfigError("waveguide.eta_alpha must be \"analytic\" or a number");
            }
        }
        r.finish();
    }

    {
        auto r = root.required_child("coupling");
        src.coupling.total_insertion_loss_db = r.number("total_insertion_loss_dB");
        src.coupling.facet_split = r.number_or("facet_split", 0.5);
        src.coupling.output_scale = r.number_or("output_scale", 1.0);
        r.finish();
    }

    {
        auto r = root.required_child("channels");
        double const detuning = r.number("detuning_THz") * kThz;
        if (!(detuning > 0.0))
        {
            throw ConfigError("channels.detuning_THz must be > 0 (sides are set per detector)");
        }
        double bandwidth = r.number("awg_fwhm_GHz") * 1e9;
        if (auto bpf = r.optional_number("bpf_fwhm_nm"))
        {
            bandwidth = std::min(bandwidth, units::wavelength_width_to_bandwidth(*bpf * 1e-9, pump_lambda));
        }
        bool idler0 = false;
        bool idler1 = false;
        src.ch0 = read_detector(r.required_child("detector0"), detuning, bandwidth, idler0);
        src.ch1 = read_detector(r.required_child("detector1"), detuning, bandwidth, idler1);
        if (idler0 == idler1)
        {
            throw ConfigError("detector0 and detector1 must be on different sides (idler / signal)");
        }
        r.finish();
    }

    {
        auto r = root.required_child("noise");
        src.noise.temperature_k = r.number_or("temperature_K", 300.0);
        (void)r.string_or("raman_table_source", "nominal");
        auto const& table = r.raw("raman_table");
        if (!table.is_array() || table.empty())
        {
            throw ConfigError("noise.raman_table must be a non-empty array of [detuning_THz, rho]");
        }
        std::vector<core::RamanPoint> points;
        for (auto const& row : table)
        {
            if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
            {
                throw ConfigError("noise.raman_table rows must be [detuning_THz, rho]");
            }
            points.push_back({row[0].get<double>() * kThz, row[1].get<double>()});
        }
        src.noise.raman = core::RamanTable(std::move(points));
        r.put("raman_table", table);

        if (r.has("pump_leakage"))
        {
            auto lr = r.child("pump_leakage");
            src.noise.leakage.rejection_at_zero_db = lr.number("rejection_at_zero_dB");
            src.noise.leakage.slope_db_per_hz = lr.number("slope_dB_per_THz") / kThz;
            src.noise.leakage.floor_db = lr.number("floor_dB");
            lr.finish();
        }
        else
        {
            if (r.contains("pump_leakage"))
            {
                (void)r.raw("pump_leakage");
            }
            r.put("pump_leakage", nullptr);
            double const inf = std::numeric_limits<double>::infinity();
            src.noise.leakage = {inf, 0.0, inf};
        }
        r.finish();
    }

    {
        auto r = root.child("analysis");
        auto& a = cfg.analysis_;
        a.window_s = r.number_or("window_ps", 16.0) * 1e-12;
        a.accidental_mode = parse_accidental_mode(r.string_or("accidental_mode", "binned"));
        a.peak.peak_window = r.number_or("peak_window_ns", 1.0) * 1e-9;
        a.peak.floor_sideband = r.number_or("floor_sideband_ns", 5.0) * 1e-9;
        auto t = r.child("tia");
        a.tia.bin_width = t.number_or("bin_ps", 16.0) * 1e-12;
        a.tia.min_delay = t.number_or("min_delay_ns", 0.0) * 1e-9;
        a.tia.max_delay = t.number_or("max_delay_ns", 40.0) * 1e-9;
        a.tia.stop_delay = t.number_or("stop_delay_ns", 11.1) * 1e-9;
        auto const policy = t.string_or("policy", "first-stop");
        if (policy == "first-stop")
        {
            a.tia.policy = sim::StopPolicy::first_stop;
        }
        else if (policy == "multi-stop")
        {
            a.tia.policy = sim::StopPolicy::multi_stop;
        }
        else
        {
            throw ConfigError("analysis.tia.policy must be \"first-stop\" or \"multi-stop\"");
        }
        t.finish();
        r.finish();
        if (!(a.window_s > 0.0))
        {
            throw ConfigError("analysis.window_ps must be > 0");
        }
        a.tia.validate();
        if (a.accidental_mode == core::AccidentalMode::gated && !src.pump.is_pulsed())
        {
            throw ConfigError("gated accidentals require a pulsed pump");
        }
    }
    root.finish();

    src.validate();
    return cfg;
}

std::string ExperimentConfig::hash() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : doc_.dump())
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string ExperimentConfig::canonical_path(std::string_view path) const
{
    json const* node = &doc_;
    std::string out;
    for (auto const& part : split_path(path))
    {
        std::string key = part;
        if (node->is_object() && !node->contains(part))
        {
            std::string match;
            int hits = 0;
            for (auto const& [k, v] : node->items())
            {
                if (k.size() > part.size() + 1 && k.compare(0, part.size() + 1, part + "_") == 0)
                {
                    match = k;
                    ++hits;
                }
            }
            if (hits != 1)
            {
                return std::string(path);
            }
            key = match;
        }
        out += out.empty() ? key : "." + key;
        if (node->is_object())
        {
            node = &node->at(key);
        }
        else if (node->is_array())
        {
            std::size_t idx = 0;
            auto const res = std::from_chars(key.data(), key.data() + key.size(), idx);
            if (res.ec != std::errc() || res.ptr != key.data() + key.size() || idx >= node->size())
            {
                return std::string(path);
            }
            node = &(*node)[idx];
        }
        else
        {
            return std::string(path);
        }
    }
    return out;
}

double ExperimentConfig::parameter(std::string_view path) const
{
    json copy = doc_;
    json const* node = resolve(copy, canonical_path(path));
    if (node == nullptr || !node->is_number())
    {
        throw ConfigError("parameter path '" + std::string(path) + "' does not resolve to a numeric field");
    }
    return node->get<double>();
}

ExperimentConfig ExperimentConfig::with_parameter(std::string_view path, double value) const
{
    json copy = doc_;
    json* node = resolve(copy, canonical_path(path));
    if (node == nullptr || !node->is_number())
    {
        throw ConfigError("parameter path '" + std::string(path) + "' does not resolve to a numeric field");
    }
    *node = value;
    return from_json(copy);
}

ExperimentConfig ExperimentConfig::with_value(std::string_view path, json value) const
{
    json copy = doc_;
    auto parts = split_path(path);
    auto const leaf = parts.back();
    parts.pop_back();
    json* parent = &copy;
    for (auto const& part : parts)
    {
        if (!parent->is_object() || !parent->contains(part))
        {
            throw ConfigError("parameter path '" + std::string(path) + "' does not resolve");
        }
        parent = &(*parent)[part];
    }
    if (!parent->is_object())
    {
        throw ConfigError("parameter path '" + std::string(path) + "' does not resolve");
    }
    (*parent)[leaf] = std::move(value);
    return from_json(copy);
}

ExperimentConfig ExperimentConfig::with_raman_table(core::RamanTable const& table, std::string_view source_tag) const
{
    json rows = json::array();
    for (auto const& p : table.points())
    {
        rows.push_back(json::array({hz_to_thz(p.detuning_hz), p.rho}));
    }
    json copy = doc_;
    copy["noise"]["raman_table"] = rows;
    copy["noise"]["raman_table_source"] = std::string(source_tag);
    return from_json(copy);
}

ExperimentConfig ExperimentConfig::with_calibration(core::Calibration const& cal) const
{
    auto out = with_value("waveguide.eta_alpha", cal.eta_alpha.eta_alpha);
    return out.with_raman_table(cal.calibrated.noise.raman, "calibrated");
}

ExperimentConfig paper_defaults()
{
    // Raman shape per side, |detuning| in THz -> rho at nominal scale 0.4.
    // Linear onset below 1.4 THz, low-gain window at 7.4 THz, main band
    // near 10.3 THz.
    std::vector<std::pair<double, double>> const shape = {
        {0.1, 0.4 * 0.1 / 1.4}, {1.4, 0.4}, {3.0, 0.72}, {5.0, 0.96}, {6.5, 1.04},
        {7.4, 0.2},             {8.3, 1.2}, {10.3, 3.2}, {12.0, 1.2},
    };
    json table = json::array();
    for (auto it = shape.rbegin(); it != shape.rend(); ++it)
    {
        table.push_back(json::array({-it->first, it->second}));
    }
    for (auto const& [nu, rho] : shape)
    {
        table.push_back(json::array({nu, rho}));
    }

    json doc = {
        {"waveguide",
         {
             {"length_cm", 7.1},
             {"prop_loss_dB_per_cm", 0.7},
             {"gamma_per_W_per_m", 14.0},
             {"dispersion_ps_per_nm_km", -239.0},
             {"reference_wavelength_nm", 1550.0},
             {"eta_alpha", "analytic"},
         }},
        {"pump", {{"wavelength_nm", 1549.315}, {"power_mW", 57.0}, {"mode", "cw"}}},
        {"coupling", {{"total_insertion_loss_dB", 14.24}, {"facet_split", 0.5}, {"output_scale", 1.0}}},
        {"channels",
         {
             {"detuning_THz", 1.4},
             {"awg_fwhm_GHz", 50.0},
             {"bpf_fwhm_nm", 0.5},
             {"detector0",
              {{"side", "idler"}, {"filter_loss_dB", 6.51}, {"detector_qe", 0.18}, {"dark_rate_per_s", 1000.0},
               {"jitter_fwhm_ps", 141.0}, {"dead_time_ns", 0.0}}},
             {"detector1",
              {{"side", "signal"}, {"filter_loss_dB", 6.75}, {"detector_qe", 0.08}, {"dark_rate_per_s", 1000.0},
               {"jitter_fwhm_ps", 141.0}, {"dead_time_ns", 0.0}}},
         }},
        {"noise",
         {
             {"temperature_K", 300.0},
             {"raman_table_source", "nominal"},
             {"raman_table", table},
             {"pump_leakage", {{"rejection_at_zero_dB", 60.0}, {"slope_dB_per_THz", 100.0}, {"floor_dB", 120.0}}},
         }},
        {"analysis",
         {
             {"window_ps", 16.0},
             {"accidental_mode", "binned"},
             {"peak_window_ns", 1.0},
             {"floor_sideband_ns", 5.0},
             {"tia",
              {{"bin_ps", 16.0}, {"min_delay_ns", 0.0}, {"max_delay_ns", 40.0}, {"policy", "first-stop"},
               {"stop_delay_ns", 11.1}}},
         }},
    };
    return ExperimentConfig::from_json(doc);
}

ExperimentConfig load_config(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot open config file " + path.string());
    }
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (json::parse_error const& e)
    {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return ExperimentConfig::from_json(doc);
}

std::string serialize(ExperimentConfig const& cfg)
{
    return cfg.to_json().dump(2) + "\n";
}

void save_config(std::filesystem::path const& path, ExperimentConfig const& cfg)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw ConfigError("cannot write config file " + path.string());
    }
    out << serialize(cfg);
}

} // namespace sfwm::config
