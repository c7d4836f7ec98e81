#pragma once

// Linear-polarizer projections, fringes and CHSH correlations.
//
// Analyzer conventions (note the asymmetry between the arms):
//   arm 1:  |p1> = cos(t1) |H> - sin(t1) |V>
//   arm 2:  |p2> = sin(t2) |H> + cos(t2) |V>
// With these, (|HV> + |VH>)/sqrt(2) gives P(t1, t2) = cos^2(t1 + t2) / 2.
// Swapping either convention flips the fringes without any other symptom.

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/polarization_state.hpp"
#include "biphoton/units.hpp"

namespace biphoton {

inline constexpr double kRightAngle = units::kPi / 2.0;

struct PolarizerPair {
    double theta1 = 0.0;  ///< rad, arm 1
    double theta2 = 0.0;  ///< rad, arm 2

    [[nodiscard]] static double perp(double theta) { return theta + kRightAngle; }
};

/// Analyzer angles for the four CHSH correlations (radians).
struct ChshSettings {
    double theta1 = 0.0;
    double theta1p = 0.0;
    double theta2 = 0.0;
    double theta2p = 0.0;

    /// t1 = 0, t2 = theta, t1' = -2 theta, t2' = 3 theta, so that
    /// theta = t2 - t1 = t2' + t1' = -t2 - t1'.
    [[nodiscard]] static ChshSettings canonical(double theta);

    /// The four E arguments in the order they enter S:
    /// (t1, t2), (t1, t2'), (t1', t2), (t1', t2').
    [[nodiscard]] std::array<PolarizerPair, 4> pairs() const;
};

/// Signs with which the four correlations enter S: + - + +.
inline constexpr std::array<double, 4> kChshSigns{1.0, -1.0, 1.0, 1.0};

/// Product analyzer state |p1 p2> in the {HH, HV, VH, VV} basis.
[[nodiscard]] Eigen::Vector4cd analyzer_state(PolarizerPair pair);

/// <p1 p2| rho |p1 p2>.
[[nodiscard]] double coincidence_prob(const TwoQubitState& state, PolarizerPair pair);

/// Coincidence values (probabilities or counts) at the four analyzer
/// combinations that form one correlation E(a, b).
struct CorrelationBlock {
    double same = 0.0;         ///< C(a, b)
    double both_perp = 0.0;    ///< C(a_perp, b_perp)
    double first_perp = 0.0;   ///< C(a_perp, b)
    double second_perp = 0.0;  ///< C(a, b_perp)

    [[nodiscard]] double total() const { return same + both_perp + first_perp + second_perp; }
};

/// (C + C_perp,perp - C_perp,. - C_.,perp) / (sum). Throws DegenerateInputError
/// when the sum is zero.
[[nodiscard]] double correlation_fraction(const CorrelationBlock& block);

[[nodiscard]] CorrelationBlock probability_block(const TwoQubitState& state, PolarizerPair pair);

[[nodiscard]] double correlation_E(const TwoQubitState& state, PolarizerPair pair);

/// E(t1,t2) - E(t1,t2') + E(t1',t2) + E(t1',t2') without the absolute value.
[[nodiscard]] double chsh_signed(const TwoQubitState& state, const ChshSettings& settings);

/// |chsh_signed|.
[[nodiscard]] double chsh_S(const TwoQubitState& state, const ChshSettings& settings);

/// Signed S for the canonical settings at each theta. For the ideal state
/// this is 3 cos(2 theta) - cos(6 theta).
[[nodiscard]] std::vector<double> s_curve(const TwoQubitState& state, std::span<const double> theta_grid);

/// Least-squares fit of a + b cos(2 t) + d sin(2 t), reported as
/// a + B cos(2 t + phase) with B >= 0.
struct FringeFit {
    double offset = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;

    /// B / a; zero when a <= 0.
    [[nodiscard]] double visibility() const;
    [[nodiscard]] double evaluate(double theta) const;
};

/// Throws ConfigError for fewer than 4 points or mismatched lengths.
[[nodiscard]] FringeFit fit_fringe(std::span<const double> angles, std::span<const double> values);

/// (max - min) / (max + min) taken literally from the samples.
[[nodiscard]] double extremal_visibility(std::span<const double> values);

struct FringeResult {
    std::vector<double> angles;
    std::vector<double> probabilities;
    double visibility = 0.0;  ///< from the sinusoidal fit
    double fit_phase = 0.0;
};

/// Coincidence probability versus theta2 at fixed theta1. Throws ConfigError
/// for fewer than 4 grid points.
[[nodiscard]] FringeResult fringe_scan(const TwoQubitState& state, double theta1,
                                       std::span<const double> theta2_grid);

}  // namespace biphoton
