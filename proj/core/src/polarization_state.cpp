#include "biphoton/polarization_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "biphoton/errors.hpp"

namespace biphoton {

DensityMatrixCheck check_density_matrix(const DensityMatrix& rho) {
    DensityMatrixCheck out;
    out.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    out.trace_error = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
    const DensityMatrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(herm, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    return out;
}

TwoQubitState make_state(const DensityMatrix& rho) {
    const auto check = check_density_matrix(rho);
    if (!check.hermitian()) {
        throw DomainError("density matrix is not Hermitian (error " + std::to_string(check.hermiticity_error) + ")");
    }
    if (!check.unit_trace()) {
        throw DomainError("density matrix trace differs from 1 by " + std::to_string(check.trace_error));
    }
    if (!check.positive()) {
        throw DomainError("density matrix has negative eigenvalue " + std::to_string(check.min_eigenvalue));
    }
    return TwoQubitState{rho};
}

DelayResponse::DelayResponse(const JointSpectralAmplitude& jsa) {
    const auto& grid = jsa.grid();
    const auto w = trapezoid_weights(grid);
    const std::size_t n = jsa.size();
    omega_.resize(n);
    weighted_product_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        omega_[k] = grid.omega(k);
        weighted_product_[k] = w[k] * jsa[k] * std::conj(jsa.mirrored(k));
    }
    norm_ = jsa.norm();
    if (!(norm_ > 0.0)) throw DegenerateInputError("overlap_integral: joint spectral amplitude has zero norm");
}

OverlapResult DelayResponse::at(double tau) const {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < omega_.size(); ++k) {
        const double arg = 2.0 * omega_[k] * tau;
        acc += weighted_product_[k] * std::complex<double>(std::cos(arg), std::sin(arg));
    }
    const std::complex<double> v = acc / norm_;
    return {v, std::abs(v)};
}

OverlapResult overlap_integral(const JointSpectralAmplitude& jsa, DelaySetting delay) {
    return DelayResponse(jsa).at(delay.tau);
}

DelaySetting optimal_delay(const JointSpectralAmplitude& jsa, DelayRange range, double step) {
    if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || !(range.hi > range.lo)) {
        throw ConfigError("optimal_delay: empty delay range");
    }
    if (!(step > 0.0)) throw ConfigError("optimal_delay: scan step must be > 0");

    const DelayResponse response(jsa);
    const auto n = static_cast<std::size_t>(std::floor((range.hi - range.lo) / step + 1e-9)) + 1;
    auto tau_at = [&](std::size_t i) { return range.lo + static_cast<double>(i) * step; };

    std::size_t best = 0;
    double best_mag = -1.0;
    std::vector<double> mags(n);
    for (std::size_t i = 0; i < n; ++i) {
        mags[i] = response.at(tau_at(i)).magnitude;
        if (mags[i] > best_mag) {
            best_mag = mags[i];
            best = i;
        }
    }

    double tau = tau_at(best);
    if (best > 0 && best + 1 < n) {
        const double ym = mags[best - 1], y0 = mags[best], yp = mags[best + 1];
        const double curvature = ym - 2.0 * y0 + yp;
        if (curvature < 0.0) tau += 0.5 * step * (ym - yp) / curvature;
    }
    tau = std::round(tau / kDelayResolution) * kDelayResolution;
    return {tau == 0.0 ? 0.0 : tau};
}

TwoQubitState post_selected_state(const OverlapResult& overlap, double phi_bs) {
    if (std::abs(overlap.v_int) > 1.0 + 1e-10) {
        throw DomainError("post_selected_state: |v_int| = " + std::to_string(std::abs(overlap.v_int)) + " > 1");
    }
    DensityMatrix rho = DensityMatrix::Zero();
    const std::complex<double> coherence = overlap.v_int * std::polar(1.0, phi_bs);
    rho(kHV, kHV) = 0.5;
    rho(kVH, kVH) = 0.5;
    rho(kHV, kVH) = 0.5 * coherence;
    rho(kVH, kHV) = 0.5 * std::conj(coherence);
    return TwoQubitState{rho};
}

TwoQubitState x_state(double population_visibility, std::complex<double> coherence) {
    const double vz = population_visibility;
    if (!(vz >= -1.0 && vz <= 1.0)) throw DomainError("x_state: population visibility outside [-1, 1]");
    const double inner = (1.0 + vz) / 4.0;
    if (std::abs(coherence) / 2.0 > inner + 1e-12) {
        throw DomainError("x_state: coherence " + std::to_string(std::abs(coherence)) +
                          " exceeds the positivity bound " + std::to_string(2.0 * inner));
    }
    DensityMatrix rho = DensityMatrix::Zero();
    rho(kHH, kHH) = (1.0 - vz) / 4.0;
    rho(kVV, kVV) = (1.0 - vz) / 4.0;
    rho(kHV, kHV) = inner;
    rho(kVH, kVH) = inner;
    rho(kHV, kVH) = 0.5 * coherence;
    rho(kVH, kHV) = 0.5 * std::conj(coherence);
    return TwoQubitState{rho};
}

double concurrence(const TwoQubitState& state) {
    const auto check = check_density_matrix(state.rho);
    if (!check.positive()) {
        throw DomainError("concurrence: state is not positive semidefinite (min eigenvalue " +
                          std::to_string(check.min_eigenvalue) + ")");
    }
    const DensityMatrix rho = 0.5 * (state.rho + state.rho.adjoint());

    // sigma_y (x) sigma_y is real: anti-diagonal (-1, 1, 1, -1).
    DensityMatrix flip = DensityMatrix::Zero();
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;

    // The Wootters lambdas are the singular values of sqrt(rho) F sqrt(rho)^*,
    // F = sigma_y (x) sigma_y. Eigenvalues of rho at rounding level are zeroed
    // first; their square roots would otherwise leak ~1e-8 into the result.
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho);
    Eigen::Vector4d ev = es.eigenvalues();
    for (int i = 0; i < 4; ++i) ev(i) = ev(i) < 1e-13 ? 0.0 : std::sqrt(ev(i));
    const DensityMatrix sqrt_rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    const DensityMatrix a = sqrt_rho * flip * sqrt_rho.conjugate();
    Eigen::JacobiSVD<DensityMatrix> svd(a);

    std::array<double, 4> lambdas{};
    for (int i = 0; i < 4; ++i) lambdas[i] = svd.singularValues()(i);
    std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
    return std::max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]);
}

}  // namespace biphoton
