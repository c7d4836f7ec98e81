#pragma once

// Scenario configuration. Values are kept in the lab units used by the JSON
// file (nm, fs, ns, ps/(nm km), degrees) so that the resolved echo written
// next to every result reloads bit-for-bit; SI domain objects are built on
// demand.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "biphoton/counting.hpp"
#include "biphoton/polarimetry.hpp"
#include "biphoton/spectral_model.hpp"

namespace biphoton::scenario {

struct AngleRange {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    /// start, start + step, ... up to stop (inclusive within 1e-9 step).
    [[nodiscard]] std::vector<double> values() const;
};

struct DispersionBlock {
    double length_mm = 1.2;
    double v_te_m_per_s = 8.98e7;
    double v_tm_m_per_s = 9.01e7;
    double gvd_te_ps_per_nm_km = -7.9e2;
    double gvd_tm_ps_per_nm_km = -7.9e2;
    double lambda_deg_nm = 1555.9;
    double delta0_per_m = 0.0;
};

struct FilterBlock {
    std::string shape = "gaussian";
    double center_nm = 1550.0;
    double fwhm_nm = 45.0;
};

struct GridBlock {
    std::optional<double> omega_max_rad_per_s;  ///< nullopt: 3x filter half-width
    std::size_t n_points = 8193;
};

struct StateBlock {
    std::optional<double> tau_fs;  ///< nullopt: optimize
    double phi_bs_deg = 0.0;
    std::optional<double> coherence;  ///< replaces |V_int| when set
    double population_visibility = 1.0;
};

struct DetectorBlock {
    double trigger_rate_hz = 1e5;
    double gate_width_ns = 100.0;
    double coincidence_window_ns = 3.0;
    double efficiency_1 = 0.25;
    double efficiency_2 = 0.25;
    double singles_rate_1_per_s = 3550.0;
    double singles_rate_2_per_s = 6200.0;
    double accidental_calibration = 1.0;
};

struct ChshAngles {
    double theta1 = 0.0;
    double theta1p = -45.0;
    double theta2 = 22.5;
    double theta2p = 67.5;
};

struct RunBlock {
    double pair_rate_per_s = 6.0;
    double integration_time_s = 10.0;
    std::uint64_t seed = 1;
    std::uint64_t runs = 1;
    std::vector<double> theta1_deg{0.0, 45.0};
    AngleRange theta2_deg{0.0, 360.0, 5.0};
    AngleRange s_curve_theta_deg{0.0, 90.0, 2.5};
    double chsh_theta_deg = 22.5;
    std::optional<ChshAngles> chsh_settings_deg;  ///< overrides chsh_theta_deg
    AngleRange tau_scan_fs{-200.0, 200.0, 0.1};
};

struct BudgetBlock {
    double pump_power_mw = 13.0;
    double objective_transmission = 0.70;
    double facet_transmission = 0.73;
    double modal_overlap = 0.20;
    double collection_transmission_per_arm = 0.10;
    double measured_cc_rate_per_s = 0.3;
    double pump_wavelength_nm = 777.95;
    std::optional<double> gate_width_ns = 20.0;  ///< nullopt: detector gate
};

struct ScenarioConfig {
    std::optional<std::string> preset;
    DispersionBlock dispersion;
    FilterBlock filter;
    GridBlock grid;
    StateBlock state;
    DetectorBlock detector;
    RunBlock run;
    BudgetBlock budget;

    [[nodiscard]] WaveguideDispersion waveguide() const;
    [[nodiscard]] SpectralFilter spectral_filter() const;
    [[nodiscard]] SpectralGrid spectral_grid() const;
    [[nodiscard]] DetectorModel detector_model() const;
    [[nodiscard]] BudgetInputs budget_inputs() const;
    [[nodiscard]] DetectorModel budget_detector_model() const;
    [[nodiscard]] ChshSettings chsh_settings() const;

    /// Checks every module invariant; throws ConfigError naming the key.
    void validate() const;
};

/// Names accepted by `preset`.
[[nodiscard]] const std::vector<std::string>& preset_names();

/// Overwrites the fields a preset controls. Throws ConfigError for an
/// unknown name.
void apply_preset(ScenarioConfig& config, const std::string& name);

/// Defaults, then the file's preset (or `preset_override`), then the file's
/// explicit fields. Unknown keys are rejected with their JSON path.
[[nodiscard]] ScenarioConfig load_config(const nlohmann::json& doc,
                                         const std::optional<std::string>& preset_override = std::nullopt);

/// Fully resolved configuration in the file schema; load_config of this
/// reproduces the same ScenarioConfig.
[[nodiscard]] nlohmann::json to_json(const ScenarioConfig& config);

}  // namespace biphoton::scenario
