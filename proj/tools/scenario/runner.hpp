#pragma once

#include <complex>
#include <optional>
#include <string>

#include "biphoton/polarization_state.hpp"
#include "config.hpp"
#include "result.hpp"

namespace biphoton::scenario {

/// The two-qubit state a scenario measures. With state.coherence unset the
/// coherence comes from the spectral overlap at tau (given or optimized).
struct ResolvedState {
    TwoQubitState state;
    std::complex<double> coherence;
    std::optional<double> tau;  ///< s; set when the spectral model was used
};

[[nodiscard]] ResolvedState resolve_state(const ScenarioConfig& config);

[[nodiscard]] ResultRecord run_fringe(const ScenarioConfig& config);
[[nodiscard]] ResultRecord run_delay_scan(const ScenarioConfig& config);
[[nodiscard]] ResultRecord run_chsh(const ScenarioConfig& config);
[[nodiscard]] ResultRecord run_s_curve(const ScenarioConfig& config);
[[nodiscard]] ResultRecord run_budget(const ScenarioConfig& config);

/// Dispatch by subcommand name; throws ConfigError for an unknown command.
[[nodiscard]] ResultRecord run_command(const std::string& command, const ScenarioConfig& config);

/// Label used in scalar and table names for an angle, e.g. 45 or 22.5.
[[nodiscard]] std::string angle_label(double degrees);

}  // namespace biphoton::scenario
