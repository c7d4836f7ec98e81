#pragma once

// Post-selected two-photon polarization state after the 50/50 beam splitter.
//
// Basis order is {HH, HV, VH, VV}; the first letter is the photon in arm 1.
// Keeping only one-photon-per-arm events leaves two terms: H->1,V->2 and
// V->1,H->2. The H photon is always at w0 + W and the V photon at w0 - W, so a
// delay tau on the V photon multiplies the two terms by the same carrier phase
// but, once frequency is traced out (W pairs with -W), leaves a relative phase
// e^{2 i W tau} in the coherence. The global carrier phase e^{i w0 tau} is
// dropped. Positive tau means the V photon is delayed.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/spectral_model.hpp"

namespace biphoton {

enum BasisIndex : int { kHH = 0, kHV = 1, kVH = 2, kVV = 3 };

using DensityMatrix = Eigen::Matrix4cd;

struct DelaySetting {
    double tau = 0.0;  ///< s, positive = V delayed
};

struct TwoQubitState {
    DensityMatrix rho = DensityMatrix::Zero();
};

/// Invariant tolerances for a density matrix.
inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

struct DensityMatrixCheck {
    double hermiticity_error = 0.0;  ///< max |rho - rho^dagger| elementwise
    double trace_error = 0.0;        ///< |tr rho - 1|
    double min_eigenvalue = 0.0;     ///< of the Hermitian part

    [[nodiscard]] bool hermitian() const { return hermiticity_error <= kHermiticityTol; }
    [[nodiscard]] bool unit_trace() const { return trace_error <= kTraceTol; }
    [[nodiscard]] bool positive() const { return min_eigenvalue >= -kPsdTol; }
    [[nodiscard]] bool ok() const { return hermitian() && unit_trace() && positive(); }
};

[[nodiscard]] DensityMatrixCheck check_density_matrix(const DensityMatrix& rho);

/// Wraps rho after checking Hermiticity, trace and positivity; throws DomainError.
[[nodiscard]] TwoQubitState make_state(const DensityMatrix& rho);

struct OverlapResult {
    std::complex<double> v_int;
    double magnitude = 0.0;
};

/// Precomputed integrand of the normalized spectral overlap
///   V(tau) = sum_k w_k F(W_k) F*(-W_k) e^{2 i W_k tau} / sum_k w_k |F(W_k)|^2
/// so that delay scans only pay for the phase factor.
class DelayResponse {
public:
    explicit DelayResponse(const JointSpectralAmplitude& jsa);

    [[nodiscard]] OverlapResult at(double tau) const;

private:
    std::vector<double> omega_;
    std::vector<std::complex<double>> weighted_product_;
    double norm_ = 0.0;
};

/// Throws DegenerateInputError when the JSA has zero norm.
[[nodiscard]] OverlapResult overlap_integral(const JointSpectralAmplitude& jsa, DelaySetting delay);

struct DelayRange {
    double lo = -200e-15;
    double hi = 200e-15;
};

inline constexpr double kDelayScanStep = 0.1e-15;
inline constexpr double kDelayResolution = 0.01e-15;

/// argmax over tau of |V(tau)|: uniform scan then a parabola through the
/// best sample and its neighbours. Rounded to kDelayResolution.
[[nodiscard]] DelaySetting optimal_delay(const JointSpectralAmplitude& jsa, DelayRange range = {},
                                         double step = kDelayScanStep);

/// X-state with rho_{HV,HV} = rho_{VH,VH} = 1/2 and coherence v e^{i phi_bs}/2.
/// phi_bs = 0 and v = 1 is (|HV> + |VH>)/sqrt(2). Throws DomainError for |v| > 1.
[[nodiscard]] TwoQubitState post_selected_state(const OverlapResult& overlap, double phi_bs = 0.0);

/// X-state with population contrast V_z between the {HV, VH} and {HH, VV}
/// sectors and HV/VH coherence c:
///   rho_HV,HV = rho_VH,VH = (1 + V_z)/4, rho_HH,HH = rho_VV,VV = (1 - V_z)/4,
///   rho_HV,VH = c/2.
/// Throws DomainError when the result is not a density matrix.
[[nodiscard]] TwoQubitState x_state(double population_visibility, std::complex<double> coherence);

/// Wootters concurrence. Throws DomainError for a non-PSD input.
[[nodiscard]] double concurrence(const TwoQubitState& state);

}  // namespace biphoton
