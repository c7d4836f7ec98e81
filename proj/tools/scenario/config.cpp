#include "config.hpp"

#include <cmath>
#include <set>

#include "biphoton/errors.hpp"
#include "biphoton/units.hpp"

namespace biphoton::scenario {

using nlohmann::json;

std::vector<double> AngleRange::values() const {
    std::vector<double> out;
    if (!(step > 0.0) || stop < start) return out;
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

namespace {

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class BlockReader {
public:
    BlockReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) fail(path_.empty() ? "/" : path_, "expected an object");
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = find(key)) out = as_number(*v, key);
    }

    void optional_number(const std::string& key, std::optional<double>& out) {
        if (const json* v = find(key)) {
            if (v->is_null()) out.reset();
            else out = as_number(*v, key);
        }
    }

    void count(const std::string& key, std::uint64_t& out) {
        if (const json* v = find(key)) {
            const bool ok = v->is_number_unsigned() || (v->is_number_integer() && v->get<std::int64_t>() >= 0);
            if (!ok) fail(join(path_, key), "expected a non-negative integer");
            out = v->get<std::uint64_t>();
        }
    }

    void text(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string()) fail(join(path_, key), "expected a string");
            out = v->get<std::string>();
        }
    }

    void range(const std::string& key, AngleRange& out) {
        if (const json* v = find(key)) {
            BlockReader r(*v, join(path_, key));
            r.number("start", out.start);
            r.number("stop", out.stop);
            r.number("step", out.step);
            r.finish();
        }
    }

    [[nodiscard]] const std::string& path() const { return path_; }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) fail(join(path_, it.key()), "unknown key");
        }
    }

private:
    double as_number(const json& v, const std::string& key) const {
        if (!v.is_number()) fail(join(path_, key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(join(path_, key), "expected a finite number");
        return d;
    }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_dispersion(BlockReader& r, DispersionBlock& d) {
    r.number("length_mm", d.length_mm);
    r.number("v_te_m_per_s", d.v_te_m_per_s);
    r.number("v_tm_m_per_s", d.v_tm_m_per_s);
    // Shared D first, per-polarization values override it.
    if (const json* v = r.find("gvd_ps_per_nm_km"); v && !v->is_null()) {
        if (!v->is_number()) fail(join(r.path(), "gvd_ps_per_nm_km"), "expected a number");
        d.gvd_te_ps_per_nm_km = d.gvd_tm_ps_per_nm_km = v->get<double>();
    }
    r.number("gvd_te_ps_per_nm_km", d.gvd_te_ps_per_nm_km);
    r.number("gvd_tm_ps_per_nm_km", d.gvd_tm_ps_per_nm_km);
    r.number("lambda_deg_nm", d.lambda_deg_nm);
    r.number("delta0_per_m", d.delta0_per_m);
}

void read_grid(BlockReader& r, GridBlock& g) {
    r.optional_number("omega_max_rad_per_s", g.omega_max_rad_per_s);
    std::uint64_t n = g.n_points;
    r.count("n_points", n);
    g.n_points = static_cast<std::size_t>(n);
}

void read_state(BlockReader& r, StateBlock& s) {
    if (const json* v = r.find("tau_fs")) {
        if (v->is_string()) {
            if (v->get<std::string>() != "optimize") fail(join(r.path(), "tau_fs"), "expected a number or \"optimize\"");
            s.tau_fs.reset();
        } else if (v->is_number()) {
            s.tau_fs = v->get<double>();
        } else {
            fail(join(r.path(), "tau_fs"), "expected a number or \"optimize\"");
        }
    }
    r.number("phi_bs_deg", s.phi_bs_deg);
    r.optional_number("coherence", s.coherence);
    r.number("population_visibility", s.population_visibility);
}

void read_detector(BlockReader& r, DetectorBlock& d) {
    r.number("trigger_rate_hz", d.trigger_rate_hz);
    r.number("gate_width_ns", d.gate_width_ns);
    r.number("coincidence_window_ns", d.coincidence_window_ns);
    r.number("efficiency_1", d.efficiency_1);
    r.number("efficiency_2", d.efficiency_2);
    r.number("singles_rate_1_per_s", d.singles_rate_1_per_s);
    r.number("singles_rate_2_per_s", d.singles_rate_2_per_s);
    r.number("accidental_calibration", d.accidental_calibration);
}

void read_run(BlockReader& r, RunBlock& run) {
    r.number("pair_rate_per_s", run.pair_rate_per_s);
    r.number("integration_time_s", run.integration_time_s);
    r.count("seed", run.seed);
    r.count("runs", run.runs);
    if (const json* v = r.find("theta1_deg")) {
        if (!v->is_array()) fail(join(r.path(), "theta1_deg"), "expected an array of numbers");
        run.theta1_deg.clear();
        for (std::size_t i = 0; i < v->size(); ++i) {
            if (!(*v)[i].is_number()) fail(join(r.path(), "theta1_deg/" + std::to_string(i)), "expected a number");
            run.theta1_deg.push_back((*v)[i].get<double>());
        }
    }
    r.range("theta2_deg", run.theta2_deg);
    r.range("s_curve_theta_deg", run.s_curve_theta_deg);
    r.number("chsh_theta_deg", run.chsh_theta_deg);
    if (const json* v = r.find("chsh_settings_deg")) {
        if (v->is_null()) {
            run.chsh_settings_deg.reset();
        } else {
            BlockReader s(*v, join(r.path(), "chsh_settings_deg"));
            ChshAngles a = run.chsh_settings_deg.value_or(ChshAngles{});
            s.number("theta1", a.theta1);
            s.number("theta1p", a.theta1p);
            s.number("theta2", a.theta2);
            s.number("theta2p", a.theta2p);
            s.finish();
            run.chsh_settings_deg = a;
        }
    }
    r.range("tau_scan_fs", run.tau_scan_fs);
}

void read_budget(BlockReader& r, BudgetBlock& b) {
    r.number("pump_power_mw", b.pump_power_mw);
    r.number("objective_transmission", b.objective_transmission);
    r.number("facet_transmission", b.facet_transmission);
    r.number("modal_overlap", b.modal_overlap);
    r.number("collection_transmission_per_arm", b.collection_transmission_per_arm);
    r.number("measured_cc_rate_per_s", b.measured_cc_rate_per_s);
    r.number("pump_wavelength_nm", b.pump_wavelength_nm);
    r.optional_number("gate_width_ns", b.gate_width_ns);
}

template <class Block, class Fn>
void read_block(BlockReader& top, const char* key, Block& block, Fn fn) {
    if (const json* v = top.find(key)) {
        BlockReader r(*v, std::string("/") + key);
        fn(r, block);
        r.finish();
    }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json range_json(const AngleRange& r) { return {{"start", r.start}, {"stop", r.stop}, {"step", r.step}}; }

void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) fail(path, what);
}

// Re-raises a module validation failure with the config block it came from.
template <class Fn>
void validate_block(const std::string& path, Fn fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        fail(path, e.what());
    } catch (const DomainError& e) {
        fail(path, e.what());
    }
}

void check_range(const AngleRange& r, const std::string& path) {
    require(std::isfinite(r.start) && std::isfinite(r.stop), path, "range bounds must be finite");
    require(r.step > 0.0, path + "/step", "must be positive");
    require(r.stop >= r.start, path + "/stop", "must not be below start");
    require((r.stop - r.start) / r.step <= 1e6, path + "/step", "range has more than 1e6 points");
}

}  // namespace

WaveguideDispersion ScenarioConfig::waveguide() const {
    WaveguideDispersion d;
    d.length = units::mm(dispersion.length_mm);
    d.v_te = dispersion.v_te_m_per_s;
    d.v_tm = dispersion.v_tm_m_per_s;
    d.gvd_te = units::ps_per_nm_km(dispersion.gvd_te_ps_per_nm_km);
    d.gvd_tm = units::ps_per_nm_km(dispersion.gvd_tm_ps_per_nm_km);
    d.lambda_deg = units::nm(dispersion.lambda_deg_nm);
    d.delta0 = dispersion.delta0_per_m;
    return d;
}

SpectralFilter ScenarioConfig::spectral_filter() const {
    SpectralFilter f;
    if (filter.shape == "gaussian") f.shape = FilterShape::gaussian;
    else if (filter.shape == "top_hat") f.shape = FilterShape::top_hat;
    else fail("/filter/shape", "expected \"gaussian\" or \"top_hat\"");
    f.center_lambda = units::nm(filter.center_nm);
    f.fwhm_lambda = units::nm(filter.fwhm_nm);
    return f;
}

SpectralGrid ScenarioConfig::spectral_grid() const {
    if (grid.omega_max_rad_per_s) return SpectralGrid{*grid.omega_max_rad_per_s, grid.n_points};
    return SpectralGrid::covering(spectral_filter(), grid.n_points);
}

DetectorModel ScenarioConfig::detector_model() const {
    DetectorModel m;
    m.trigger_rate = detector.trigger_rate_hz;
    m.gate_width = units::ns(detector.gate_width_ns);
    m.coincidence_window = units::ns(detector.coincidence_window_ns);
    m.efficiency_1 = detector.efficiency_1;
    m.efficiency_2 = detector.efficiency_2;
    m.singles_rate_1 = detector.singles_rate_1_per_s;
    m.singles_rate_2 = detector.singles_rate_2_per_s;
    m.accidental_calibration = detector.accidental_calibration;
    return m;
}

BudgetInputs ScenarioConfig::budget_inputs() const {
    BudgetInputs b;
    b.pump_power_in = units::mW(budget.pump_power_mw);
    b.objective_transmission = budget.objective_transmission;
    b.facet_transmission = budget.facet_transmission;
    b.modal_overlap = budget.modal_overlap;
    b.collection_transmission_per_arm = budget.collection_transmission_per_arm;
    b.measured_cc_rate = budget.measured_cc_rate_per_s;
    b.pump_wavelength = units::nm(budget.pump_wavelength_nm);
    return b;
}

DetectorModel ScenarioConfig::budget_detector_model() const {
    DetectorModel m = detector_model();
    if (budget.gate_width_ns) m.gate_width = units::ns(*budget.gate_width_ns);
    return m;
}

ChshSettings ScenarioConfig::chsh_settings() const {
    if (!run.chsh_settings_deg) return ChshSettings::canonical(units::deg(run.chsh_theta_deg));
    const auto& a = *run.chsh_settings_deg;
    return {units::deg(a.theta1), units::deg(a.theta1p), units::deg(a.theta2), units::deg(a.theta2p)};
}

void ScenarioConfig::validate() const {
    validate_block("/dispersion", [&] { waveguide().validate(); });
    validate_block("/filter", [&] { spectral_filter().validate(); });
    validate_block("/grid", [&] {
        const auto g = spectral_grid();
        g.validate();
        const auto f = spectral_filter();
        if (g.omega_max < f.angular_half_width()) throw ConfigError("omega_max_rad_per_s narrower than the filter pass band");
        if (g.omega_max >= waveguide().omega0()) throw ConfigError("omega_max_rad_per_s reaches zero frequency");
    });
    validate_block("/detector", [&] { detector_model().validate(); });
    validate_block("/budget", [&] { budget_detector_model().validate(); });

    require(!state.tau_fs || std::isfinite(*state.tau_fs), "/state/tau_fs", "must be finite");
    require(std::isfinite(state.phi_bs_deg), "/state/phi_bs_deg", "must be finite");
    require(state.population_visibility >= 0.0 && state.population_visibility <= 1.0,
            "/state/population_visibility", "must lie in [0, 1]");
    if (state.coherence) {
        require(*state.coherence >= 0.0, "/state/coherence", "must be non-negative");
        require(*state.coherence <= (1.0 + state.population_visibility) / 2.0 + 1e-12, "/state/coherence",
                "exceeds (1 + population_visibility)/2, state would not be positive");
    }

    require(run.pair_rate_per_s >= 0.0, "/run/pair_rate_per_s", "must be non-negative");
    require(run.integration_time_s > 0.0, "/run/integration_time_s", "must be positive");
    require(run.runs >= 1, "/run/runs", "must be at least 1");
    require(!run.theta1_deg.empty(), "/run/theta1_deg", "must not be empty");
    check_range(run.theta2_deg, "/run/theta2_deg");
    require(run.theta2_deg.values().size() >= 4, "/run/theta2_deg", "needs at least 4 angles for the fringe fit");
    check_range(run.s_curve_theta_deg, "/run/s_curve_theta_deg");
    check_range(run.tau_scan_fs, "/run/tau_scan_fs");
    require(run.tau_scan_fs.stop > run.tau_scan_fs.start, "/run/tau_scan_fs", "empty delay range");

    require(budget.pump_power_mw >= 0.0, "/budget/pump_power_mw", "must be non-negative");
    require(budget.measured_cc_rate_per_s >= 0.0, "/budget/measured_cc_rate_per_s", "must be non-negative");
    require(budget.pump_wavelength_nm > 0.0, "/budget/pump_wavelength_nm", "must be positive");
    for (auto [v, key] : {std::pair{budget.objective_transmission, "objective_transmission"},
                          std::pair{budget.facet_transmission, "facet_transmission"},
                          std::pair{budget.modal_overlap, "modal_overlap"},
                          std::pair{budget.collection_transmission_per_arm, "collection_transmission_per_arm"}}) {
        require(v >= 0.0 && v <= 1.0, std::string("/budget/") + key, "must lie in [0, 1]");
    }
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"paper-ideal", "paper-calibrated", "gvd-off", "paper-raw-visibility"};
    return names;
}

void apply_preset(ScenarioConfig& config, const std::string& name) {
    if (name == "paper-ideal") {
        config.state.coherence = 1.0;
        config.state.population_visibility = 1.0;
        config.detector.accidental_calibration = 0.0;
    } else if (name == "paper-calibrated") {
        config.state.coherence = 0.91;
        config.state.population_visibility = 0.98;
        config.detector.accidental_calibration = kCalibratedAccidentalAlpha;
    } else if (name == "gvd-off") {
        config.dispersion.gvd_te_ps_per_nm_km = 0.0;
        config.dispersion.gvd_tm_ps_per_nm_km = 0.0;
        config.state.coherence.reset();
    } else if (name == "paper-raw-visibility") {
        // Raw (unsubtracted) basis visibilities folded into the state, with
        // the low-rate, short-gate counting conditions of the CHSH run.
        config.state.coherence = 0.77;
        config.state.population_visibility = 0.80;
        config.detector.accidental_calibration = 0.0;
        config.detector.gate_width_ns = 20.0;
        config.detector.singles_rate_1_per_s = 600.0;
        config.detector.singles_rate_2_per_s = 500.0;
        config.run.pair_rate_per_s = 0.6;
        config.run.integration_time_s = 120.0;
    } else {
        fail("/preset", "unknown preset \"" + name + "\"");
    }
    config.preset = name;
}

ScenarioConfig load_config(const json& doc, const std::optional<std::string>& preset_override) {
    ScenarioConfig config;
    BlockReader top(doc, "");

    std::optional<std::string> preset = preset_override;
    if (const json* v = top.find("preset"); v && !v->is_null()) {
        if (!v->is_string()) fail("/preset", "expected a string");
        if (!preset) preset = v->get<std::string>();
    }
    if (preset) apply_preset(config, *preset);

    read_block(top, "dispersion", config.dispersion, read_dispersion);
    if (const json* v = top.find("filter")) {
        BlockReader r(*v, "/filter");
        r.text("shape", config.filter.shape);
        r.number("center_nm", config.filter.center_nm);
        r.number("fwhm_nm", config.filter.fwhm_nm);
        r.finish();
    }
    read_block(top, "grid", config.grid, read_grid);
    read_block(top, "state", config.state, read_state);
    read_block(top, "detector", config.detector, read_detector);
    read_block(top, "run", config.run, read_run);
    read_block(top, "budget", config.budget, read_budget);
    top.finish();

    config.validate();
    return config;
}

json to_json(const ScenarioConfig& c) {
    json out;
    out["preset"] = c.preset ? json(*c.preset) : json(nullptr);
    out["dispersion"] = {
        {"length_mm", c.dispersion.length_mm},
        {"v_te_m_per_s", c.dispersion.v_te_m_per_s},
        {"v_tm_m_per_s", c.dispersion.v_tm_m_per_s},
        {"gvd_ps_per_nm_km", nullptr},
        {"gvd_te_ps_per_nm_km", c.dispersion.gvd_te_ps_per_nm_km},
        {"gvd_tm_ps_per_nm_km", c.dispersion.gvd_tm_ps_per_nm_km},
        {"lambda_deg_nm", c.dispersion.lambda_deg_nm},
        {"delta0_per_m", c.dispersion.delta0_per_m},
    };
    out["filter"] = {{"shape", c.filter.shape}, {"center_nm", c.filter.center_nm}, {"fwhm_nm", c.filter.fwhm_nm}};
    out["grid"] = {{"omega_max_rad_per_s", optional_json(c.grid.omega_max_rad_per_s)},
                   {"n_points", c.grid.n_points}};
    out["state"] = {
        {"tau_fs", c.state.tau_fs ? json(*c.state.tau_fs) : json("optimize")},
        {"phi_bs_deg", c.state.phi_bs_deg},
        {"coherence", optional_json(c.state.coherence)},
        {"population_visibility", c.state.population_visibility},
    };
    out["detector"] = {
        {"trigger_rate_hz", c.detector.trigger_rate_hz},
        {"gate_width_ns", c.detector.gate_width_ns},
        {"coincidence_window_ns", c.detector.coincidence_window_ns},
        {"efficiency_1", c.detector.efficiency_1},
        {"efficiency_2", c.detector.efficiency_2},
        {"singles_rate_1_per_s", c.detector.singles_rate_1_per_s},
        {"singles_rate_2_per_s", c.detector.singles_rate_2_per_s},
        {"accidental_calibration", c.detector.accidental_calibration},
    };
    json settings = nullptr;
    if (c.run.chsh_settings_deg) {
        const auto& a = *c.run.chsh_settings_deg;
        settings = {{"theta1", a.theta1}, {"theta1p", a.theta1p}, {"theta2", a.theta2}, {"theta2p", a.theta2p}};
    }
    out["run"] = {
        {"pair_rate_per_s", c.run.pair_rate_per_s},
        {"integration_time_s", c.run.integration_time_s},
        {"seed", c.run.seed},
        {"runs", c.run.runs},
        {"theta1_deg", c.run.theta1_deg},
        {"theta2_deg", range_json(c.run.theta2_deg)},
        {"s_curve_theta_deg", range_json(c.run.s_curve_theta_deg)},
        {"chsh_theta_deg", c.run.chsh_theta_deg},
        {"chsh_settings_deg", settings},
        {"tau_scan_fs", range_json(c.run.tau_scan_fs)},
    };
    out["budget"] = {
        {"pump_power_mw", c.budget.pump_power_mw},
        {"objective_transmission", c.budget.objective_transmission},
        {"facet_transmission", c.budget.facet_transmission},
        {"modal_overlap", c.budget.modal_overlap},
        {"collection_transmission_per_arm", c.budget.collection_transmission_per_arm},
        {"measured_cc_rate_per_s", c.budget.measured_cc_rate_per_s},
        {"pump_wavelength_nm", c.budget.pump_wavelength_nm},
        {"gate_width_ns", optional_json(c.budget.gate_width_ns)},
    };
    return out;
}

}  // namespace biphoton::scenario
