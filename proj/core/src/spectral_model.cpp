#include "biphoton/spectral_model.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "biphoton/errors.hpp"
#include "biphoton/units.hpp"

namespace biphoton {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

double WaveguideDispersion::omega0() const { return units::angular_frequency(lambda_deg); }

void WaveguideDispersion::validate() const {
    if (!positive_finite(length)) throw ConfigError("dispersion: length must be > 0");
    if (!positive_finite(v_te)) throw ConfigError("dispersion: v_te must be > 0");
    if (!positive_finite(v_tm)) throw ConfigError("dispersion: v_tm must be > 0");
    if (!positive_finite(lambda_deg)) throw ConfigError("dispersion: lambda_deg must be > 0");
    if (!std::isfinite(gvd_te) || !std::isfinite(gvd_tm)) throw ConfigError("dispersion: gvd must be finite");
    if (!std::isfinite(delta0)) throw ConfigError("dispersion: delta0 must be finite");
}

WaveguideDispersion WaveguideDispersion::bragg_waveguide() {
    WaveguideDispersion d;
    d.length = units::mm(1.2);
    d.v_te = 8.98e7;
    d.v_tm = 9.01e7;
    d.set_gvd(units::ps_per_nm_km(-7.9e2));
    d.lambda_deg = units::nm(1555.9);
    d.delta0 = 0.0;
    return d;
}

double beta2_from_D(double d, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("beta2_from_D: wavelength must be positive");
    return -d * lambda * lambda / (2.0 * units::kPi * units::kSpeedOfLight);
}

double gvm_delta(const WaveguideDispersion& disp) { return 1.0 / disp.v_te - 1.0 / disp.v_tm; }

PhaseCoefficients phase_coefficients(const WaveguideDispersion& disp) {
    const double b_te = beta2_from_D(disp.gvd_te, disp.lambda_deg);
    const double b_tm = beta2_from_D(disp.gvd_tm, disp.lambda_deg);
    return {gvm_delta(disp), 0.5 * (b_te + b_tm), disp.delta0, disp.length};
}

double phase_mismatch(double omega, const PhaseCoefficients& c) {
    return (c.delta0 - c.delta * omega - c.beta_plus * omega * omega) * c.length / 2.0;
}

double phase_mismatch(double omega, const WaveguideDispersion& disp) {
    return phase_mismatch(omega, phase_coefficients(disp));
}

double sinc(double x) {
    // Below this the series 1 - x^2/6 is exact to double precision.
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

void SpectralFilter::validate() const {
    if (!positive_finite(center_lambda)) throw ConfigError("filter: center must be > 0");
    if (!positive_finite(fwhm_lambda)) throw ConfigError("filter: fwhm must be > 0");
    if (fwhm_lambda >= 2.0 * center_lambda) throw ConfigError("filter: fwhm must be < 2x center");
}

double SpectralFilter::angular_half_width() const {
    const double hi = units::angular_frequency(center_lambda - fwhm_lambda / 2.0);
    const double lo = units::angular_frequency(center_lambda + fwhm_lambda / 2.0);
    return (hi - lo) / 2.0;
}

SpectralFilter SpectralFilter::telecom_bandpass(FilterShape shape) {
    return {shape, units::nm(1550.0), units::nm(45.0)};
}

double filter_amplitude(double omega_abs, const SpectralFilter& filter) {
    if (!(omega_abs > 0.0)) throw DomainError("filter_amplitude: frequency must be positive");
    const double offset = units::wavelength_of(omega_abs) - filter.center_lambda;
    switch (filter.shape) {
        case FilterShape::top_hat:
            return std::abs(offset) <= filter.fwhm_lambda / 2.0 ? 1.0 : 0.0;
        case FilterShape::gaussian: {
            // |g|^2 = exp(-4 ln2 x^2 / fwhm^2)
            const double x = offset / filter.fwhm_lambda;
            return std::exp(-2.0 * std::numbers::ln2 * x * x);
        }
    }
    return 0.0;
}

void SpectralGrid::validate() const {
    if (!positive_finite(omega_max)) throw ConfigError("grid: omega_max must be > 0");
    if (n_points < 3 || n_points % 2 == 0) throw ConfigError("grid: n_points must be odd and >= 3");
}

double SpectralGrid::step() const { return 2.0 * omega_max / static_cast<double>(n_points - 1); }

double SpectralGrid::omega(std::size_t k) const {
    const auto n1 = static_cast<double>(n_points - 1);
    return omega_max * (2.0 * static_cast<double>(k) - n1) / n1;
}

SpectralGrid SpectralGrid::covering(const SpectralFilter& filter, std::size_t n_points) {
    return {3.0 * filter.angular_half_width(), n_points};
}

std::vector<double> trapezoid_weights(const SpectralGrid& grid) {
    std::vector<double> w(grid.n_points, grid.step());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

JointSpectralAmplitude::JointSpectralAmplitude(SpectralGrid grid,
                                               std::vector<std::complex<double>> amplitude)
    : grid_(grid), amplitude_(std::move(amplitude)) {
    grid_.validate();
    if (amplitude_.size() != grid_.n_points) {
        throw ConfigError("JointSpectralAmplitude: " + std::to_string(amplitude_.size()) +
                          " samples for a " + std::to_string(grid_.n_points) + "-point grid");
    }
}

double JointSpectralAmplitude::norm() const {
    const auto w = trapezoid_weights(grid_);
    double acc = 0.0;
    for (std::size_t k = 0; k < amplitude_.size(); ++k) acc += w[k] * std::norm(amplitude_[k]);
    return acc;
}

JointSpectralAmplitude build_jsa(const WaveguideDispersion& disp, const SpectralFilter& filter,
                                 const SpectralGrid& grid) {
    disp.validate();
    filter.validate();
    grid.validate();
    if (grid.omega_max < filter.angular_half_width()) {
        throw ConfigError("build_jsa: grid half-span " + std::to_string(grid.omega_max) +
                          " rad/s is narrower than the filter half-width " +
                          std::to_string(filter.angular_half_width()) + " rad/s");
    }
    const double w0 = disp.omega0();
    if (grid.omega_max >= w0) throw ConfigError("build_jsa: grid reaches zero optical frequency");

    const auto coeffs = phase_coefficients(disp);
    std::vector<std::complex<double>> amp(grid.n_points);
    for (std::size_t k = 0; k < grid.n_points; ++k) {
        const double detuning = grid.omega(k);
        const double phi = phase_mismatch(detuning, coeffs);
        const double g = filter_amplitude(w0 + detuning, filter) * filter_amplitude(w0 - detuning, filter);
        // sinc can go negative, which std::polar does not accept as a modulus.
        amp[k] = sinc(phi) * g * std::complex<double>(std::cos(phi), std::sin(phi));
    }
    return {grid, std::move(amp)};
}

}  // namespace biphoton
