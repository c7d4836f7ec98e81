#pragma once

// Test-only reference computations. Nothing here calls into the library's
// numerical paths: each oracle reaches the same quantity by a different route
// (direct projector traces, non-Hermitian eigenproblems, Simpson quadrature on
// an independent grid, closed forms).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline constexpr double kC = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

using cd = std::complex<double>;

// --- spectral ---------------------------------------------------------------

struct SourceParams {
    double length;
    double delta;      // s/m
    double beta_plus;  // s^2/m
    double lambda_deg;
    double filter_center;
    double filter_fwhm;
    bool gaussian;
};

inline double filter_g(double omega, const SourceParams& p) {
    const double lam = 2.0 * kPi * kC / omega;
    const double x = lam - p.filter_center;
    if (p.gaussian) return std::exp(-2.0 * std::log(2.0) * x * x / (p.filter_fwhm * p.filter_fwhm));
    return std::abs(x) <= p.filter_fwhm / 2.0 ? 1.0 : 0.0;
}

/// F(W) written out directly from the phase-matching integral
/// (1/L) int_0^L exp(i dk z) dz with dk = -delta W - beta_plus W^2.
inline cd jsa_value(double w, const SourceParams& p) {
    const double dk = -p.delta * w - p.beta_plus * w * w;
    const double w0 = 2.0 * kPi * kC / p.lambda_deg;
    const double g = filter_g(w0 + w, p) * filter_g(w0 - w, p);
    if (dk == 0.0) return {g, 0.0};
    // (exp(i dk L) - 1) / (i dk L)
    const cd num = std::exp(cd(0.0, dk * p.length)) - 1.0;
    return g * num / cd(0.0, dk * p.length);
}

/// |V(tau)| by composite Simpson on [-span, span] with n (even) intervals.
class SimpsonOverlap {
public:
    SimpsonOverlap(const SourceParams& p, double span, int intervals) {
        const double h = 2.0 * span / intervals;
        for (int i = 0; i <= intervals; ++i) {
            const double w = -span + i * h;
            const double coef = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            const cd f = jsa_value(w, p);
            const cd fm = jsa_value(-w, p);
            omega_.push_back(w);
            prod_.push_back(coef * h / 3.0 * f * std::conj(fm));
            norm_ += coef * h / 3.0 * std::norm(f);
        }
    }
    double magnitude(double tau) const {
        cd acc = 0.0;
        for (std::size_t k = 0; k < omega_.size(); ++k) acc += prod_[k] * std::exp(cd(0.0, 2.0 * omega_[k] * tau));
        return std::abs(acc) / norm_;
    }

private:
    std::vector<double> omega_;
    std::vector<cd> prod_;
    double norm_ = 0.0;
};

/// Dense two-stage scan: `coarse` step over [lo, hi], then `fine` step around
/// the best coarse point. Returns argmax tau.
inline double dense_scan_argmax(const std::function<double(double)>& f, double lo, double hi, double coarse,
                                double fine) {
    double best = lo, best_v = -1.0;
    for (double t = lo; t <= hi + 1e-30; t += coarse) {
        const double v = f(t);
        if (v > best_v) best_v = v, best = t;
    }
    const double c = best;
    for (double t = c - coarse; t <= c + coarse; t += fine) {
        const double v = f(t);
        if (v > best_v) best_v = v, best = t;
    }
    return best;
}

// --- two-qubit states ---------------------------------------------------------

/// Projector onto a single-qubit linear polarization state (a_H, a_V).
inline Eigen::Matrix2cd projector(double aH, double aV) {
    Eigen::Vector2cd v(aH, aV);
    return v * v.adjoint();
}

inline Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

/// tr(rho P1 (x) P2) with P1 = |cos t1, -sin t1><.| and P2 = |sin t2, cos t2><.|.
inline double projector_prob(const Eigen::Matrix4cd& rho, double t1, double t2) {
    const Eigen::Matrix4cd p = kron(projector(std::cos(t1), -std::sin(t1)), projector(std::sin(t2), std::cos(t2)));
    return (rho * p).trace().real();
}

inline double projector_E(const Eigen::Matrix4cd& rho, double a, double b) {
    const double r = kPi / 2.0;
    const double pp = projector_prob(rho, a, b), qq = projector_prob(rho, a + r, b + r);
    const double qp = projector_prob(rho, a + r, b), pq = projector_prob(rho, a, b + r);
    return (pp + qq - qp - pq) / (pp + qq + qp + pq);
}

/// Wootters via the non-Hermitian product rho (sy sy) rho^* (sy sy).
inline double wootters_concurrence(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix2cd sy;
    sy << 0.0, cd(0.0, -1.0), cd(0.0, 1.0), 0.0;
    const Eigen::Matrix4cd yy = kron(sy, sy);
    const Eigen::Matrix4cd r = rho * yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r);
    std::vector<double> l;
    for (int i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
    std::sort(l.rbegin(), l.rend());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

/// Ginibre-distributed random density matrix.
inline Eigen::Matrix4cd random_density_matrix(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Matrix4cd g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = cd(n(rng), n(rng));
    Eigen::Matrix4cd rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

/// Closed-form correlation for the X-state with population contrast vz and
/// real part of the coherence re_c.
inline double x_state_E(double vz, double re_c, double t1, double t2) {
    return vz * std::cos(2 * t1) * std::cos(2 * t2) - re_c * std::sin(2 * t1) * std::sin(2 * t2);
}

// --- frozen hand evaluations ----------------------------------------------------
// beta2 = -D lambda^2 / (2 pi c) at lambda = 1.55 um.
inline constexpr double kBeta2SourceD = 1.007604077601045e-24;   // D = -790 ps/(nm km)
inline constexpr double kBeta2PlusSeventeen = -2.1682619391414893e-26;  // D = +17 ps/(nm km)
// 1/8.98e7 - 1/9.01e7
inline constexpr double kSourceDelta = 3.7078326729271863e-11;
// delta * 1.2 mm / 2, in fs
inline constexpr double kSourceHalfWalkoffFs = 22.246996037563115;
// [0 - delta 1e13 - 1.00e-24 1e26] * 0.6e-3
inline constexpr double kPhiAt1e13 = -0.28246996037563116;
// 0.026-free naive accidentals: 3550 * 6200 / 1e5 * 2 * 3 / 100
inline constexpr double kNaiveAccidentals = 13.206;
// 13 mW * 0.70 * 0.73 * 0.20
inline constexpr double kPowerInGuide = 1.3286e-3;
// 0.3 / (0.25^2 0.1^2 2e-3 0.5) pairs/s over (1.3286 mW / (h c / 777.95 nm))
inline constexpr double kReferenceBudgetEfficiency = 9.225120262136757e-11;

}  // namespace oracle
