#pragma once

// Biphoton joint spectral amplitude for type-II SPDC with a monochromatic
// pump. The H (TE) photon carries w0 + W and the V (TM) photon w0 - W, where
// w0 is half the pump frequency and W the detuning sampled on a symmetric
// grid. Dispersion is expanded to second order around w0.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace biphoton {

/// Physical parameters of the waveguide source (SI units).
struct WaveguideDispersion {
    double length = 0.0;      ///< m
    double v_te = 0.0;        ///< group velocity of the TE / H photon, m/s
    double v_tm = 0.0;        ///< group velocity of the TM / V photon, m/s
    double gvd_te = 0.0;      ///< dispersion parameter D, TE, s/m^2
    double gvd_tm = 0.0;      ///< dispersion parameter D, TM, s/m^2
    double lambda_deg = 0.0;  ///< degenerate down-conversion wavelength, m
    double delta0 = 0.0;      ///< residual phase mismatch at degeneracy, 1/m

    /// Same D for both polarizations.
    void set_gvd(double d) { gvd_te = gvd_tm = d; }

    /// Degenerate angular frequency w0 (half the pump frequency).
    [[nodiscard]] double omega0() const;

    /// Throws ConfigError when a field breaks the record's invariants.
    void validate() const;

    /// 1.2 mm AlGaAs Bragg-reflection waveguide, type-II at 1555.9 nm.
    static WaveguideDispersion bragg_waveguide();
};

/// beta2 = -D lambda^2 / (2 pi c). Throws DomainError for lambda <= 0.
[[nodiscard]] double beta2_from_D(double d, double lambda);

/// Group-velocity mismatch delta = 1/v_te - 1/v_tm (s/m).
[[nodiscard]] double gvm_delta(const WaveguideDispersion& disp);

/// Expansion coefficients of the phase mismatch around degeneracy.
struct PhaseCoefficients {
    double delta = 0.0;      ///< s/m
    double beta_plus = 0.0;  ///< mean of the two beta2 values, s^2/m
    double delta0 = 0.0;     ///< 1/m
    double length = 0.0;     ///< m
};

[[nodiscard]] PhaseCoefficients phase_coefficients(const WaveguideDispersion& disp);

/// Half the accumulated mismatch phase, [delta0 - delta W - beta_plus W^2] L / 2.
[[nodiscard]] double phase_mismatch(double omega, const PhaseCoefficients& coeffs);
[[nodiscard]] double phase_mismatch(double omega, const WaveguideDispersion& disp);

/// sin(x)/x with sinc(0) = 1.
[[nodiscard]] double sinc(double x);

enum class FilterShape { top_hat, gaussian };

/// Band-pass filter specified in wavelength. fwhm_lambda is the FWHM of the
/// intensity transmission |g|^2.
struct SpectralFilter {
    FilterShape shape = FilterShape::gaussian;
    double center_lambda = 0.0;  ///< m
    double fwhm_lambda = 0.0;    ///< m

    void validate() const;

    /// Half the angular-frequency width of the pass band (between the
    /// wavelengths center -/+ fwhm/2).
    [[nodiscard]] double angular_half_width() const;

    /// 45 nm FWHM centered at 1550 nm.
    static SpectralFilter telecom_bandpass(FilterShape shape = FilterShape::gaussian);
};

/// Amplitude transmission g(w) in [0, 1]. Requires omega_abs > 0.
[[nodiscard]] double filter_amplitude(double omega_abs, const SpectralFilter& filter);

/// Symmetric detuning grid W_k = omega_max (2k - (N-1)) / (N-1), N odd.
struct SpectralGrid {
    double omega_max = 0.0;
    std::size_t n_points = 8193;

    void validate() const;
    [[nodiscard]] double step() const;
    [[nodiscard]] double omega(std::size_t k) const;

    /// omega_max = 3x the filter's angular half-width, 8193 points.
    static SpectralGrid covering(const SpectralFilter& filter, std::size_t n_points = 8193);
};

/// Trapezoid weights for the uniform grid.
[[nodiscard]] std::vector<double> trapezoid_weights(const SpectralGrid& grid);

/// Sampled complex amplitude F(W_k).
class JointSpectralAmplitude {
public:
    JointSpectralAmplitude(SpectralGrid grid, std::vector<std::complex<double>> amplitude);

    [[nodiscard]] const SpectralGrid& grid() const { return grid_; }
    [[nodiscard]] std::span<const std::complex<double>> amplitude() const { return amplitude_; }
    [[nodiscard]] std::size_t size() const { return amplitude_.size(); }
    [[nodiscard]] std::complex<double> operator[](std::size_t k) const { return amplitude_[k]; }

    /// Amplitude at -W_k, read by index reflection.
    [[nodiscard]] std::complex<double> mirrored(std::size_t k) const {
        return amplitude_[amplitude_.size() - 1 - k];
    }

    /// Trapezoid estimate of the integral of |F|^2 over W.
    [[nodiscard]] double norm() const;

private:
    SpectralGrid grid_;
    std::vector<std::complex<double>> amplitude_;
};

/// F(W) = sinc(phi(W)) e^{i phi(W)} g(w0 + W) g(w0 - W).
///
/// The e^{i phi} factor comes from integrating e^{i dk z} over the crystal
/// length and carries the walk-off; dropping it erases the delay dependence.
/// Throws ConfigError when the grid does not cover the filter pass band.
[[nodiscard]] JointSpectralAmplitude build_jsa(const WaveguideDispersion& disp,
                                               const SpectralFilter& filter,
                                               const SpectralGrid& grid);

}  // namespace biphoton
