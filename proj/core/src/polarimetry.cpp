#include "biphoton/polarimetry.hpp"

#include <algorithm>
#include <cmath>

#include "biphoton/errors.hpp"

namespace biphoton {

ChshSettings ChshSettings::canonical(double theta) { return {0.0, -2.0 * theta, theta, 3.0 * theta}; }

std::array<PolarizerPair, 4> ChshSettings::pairs() const {
    return {{{theta1, theta2}, {theta1, theta2p}, {theta1p, theta2}, {theta1p, theta2p}}};
}

Eigen::Vector4cd analyzer_state(PolarizerPair pair) {
    const double c1 = std::cos(pair.theta1), s1 = std::sin(pair.theta1);
    const double c2 = std::cos(pair.theta2), s2 = std::sin(pair.theta2);
    // arm 1: (H, V) = (c1, -s1); arm 2: (H, V) = (s2, c2)
    Eigen::Vector4cd v;
    v(kHH) = c1 * s2;
    v(kHV) = c1 * c2;
    v(kVH) = -s1 * s2;
    v(kVV) = -s1 * c2;
    return v;
}

double coincidence_prob(const TwoQubitState& state, PolarizerPair pair) {
    const Eigen::Vector4cd p = analyzer_state(pair);
    return (p.adjoint() * state.rho * p)(0, 0).real();
}

double correlation_fraction(const CorrelationBlock& b) {
    const double denom = b.total();
    if (denom == 0.0) throw DegenerateInputError("correlation E: all four coincidence values are zero");
    return (b.same + b.both_perp - b.first_perp - b.second_perp) / denom;
}

CorrelationBlock probability_block(const TwoQubitState& state, PolarizerPair pair) {
    const double a = pair.theta1, b = pair.theta2;
    const double ap = PolarizerPair::perp(a), bp = PolarizerPair::perp(b);
    return {coincidence_prob(state, {a, b}), coincidence_prob(state, {ap, bp}),
            coincidence_prob(state, {ap, b}), coincidence_prob(state, {a, bp})};
}

double correlation_E(const TwoQubitState& state, PolarizerPair pair) {
    return correlation_fraction(probability_block(state, pair));
}

double chsh_signed(const TwoQubitState& state, const ChshSettings& settings) {
    const auto pairs = settings.pairs();
    double s = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) s += kChshSigns[i] * correlation_E(state, pairs[i]);
    return s;
}

double chsh_S(const TwoQubitState& state, const ChshSettings& settings) {
    return std::abs(chsh_signed(state, settings));
}

std::vector<double> s_curve(const TwoQubitState& state, std::span<const double> theta_grid) {
    std::vector<double> out;
    out.reserve(theta_grid.size());
    for (double theta : theta_grid) out.push_back(chsh_signed(state, ChshSettings::canonical(theta)));
    return out;
}

double FringeFit::visibility() const { return offset > 0.0 ? amplitude / offset : 0.0; }

double FringeFit::evaluate(double theta) const { return offset + amplitude * std::cos(2.0 * theta + phase); }

FringeFit fit_fringe(std::span<const double> angles, std::span<const double> values) {
    if (angles.size() != values.size()) throw ConfigError("fit_fringe: angle and value counts differ");
    if (angles.size() < 4) throw ConfigError("fit_fringe: need at least 4 points");

    const auto n = static_cast<Eigen::Index>(angles.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = angles[static_cast<std::size_t>(i)];
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(2.0 * t);
        design(i, 2) = std::sin(2.0 * t);
        rhs(i) = values[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);

    // b cos + d sin = B cos(2t + phase) with B cos(phase) = b, -B sin(phase) = d
    FringeFit fit;
    fit.offset = coef(0);
    fit.amplitude = std::hypot(coef(1), coef(2));
    fit.phase = std::atan2(-coef(2), coef(1));
    return fit;
}

double extremal_visibility(std::span<const double> values) {
    if (values.empty()) throw ConfigError("extremal_visibility: no samples");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double sum = *hi + *lo;
    return sum != 0.0 ? (*hi - *lo) / sum : 0.0;
}

FringeResult fringe_scan(const TwoQubitState& state, double theta1, std::span<const double> theta2_grid) {
    if (theta2_grid.size() < 4) throw ConfigError("fringe_scan: need at least 4 grid points");
    FringeResult out;
    out.angles.assign(theta2_grid.begin(), theta2_grid.end());
    out.probabilities.reserve(theta2_grid.size());
    for (double t2 : theta2_grid) out.probabilities.push_back(coincidence_prob(state, {theta1, t2}));
    const auto fit = fit_fringe(out.angles, out.probabilities);
    out.visibility = fit.visibility();
    out.fit_phase = fit.phase;
    return out;
}

}  // namespace biphoton
