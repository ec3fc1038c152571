#pragma once

#include <array>

#include "qlink/constants.hpp"

namespace qlink {

/// Single-mode Gaussian state of light: mean quadrature vector (q, p) and
/// the 2x2 quadrature covariance matrix [var_q, cov_qp; cov_qp, var_p].
/// Quadratures are dimensionless with vacuum variance 1/4.
///
/// Construction validates symmetry-positive-definiteness and the
/// uncertainty bound var_q*var_p - cov_qp^2 >= 1/16 (equality for pure
/// states). Violations throw; they are never silently clamped.
struct GaussianState {
    double mean_q = 0.0;
    double mean_p = 0.0;
    double var_q = kVacuumVariance;
    double var_p = kVacuumVariance;
    double cov_qp = 0.0;

    GaussianState() = default;  // vacuum
    GaussianState(double mq, double mp, double vq, double vp, double cqp);

    /// det of the covariance matrix; 1/16 for pure states.
    double covariance_det() const { return var_q * var_p - cov_qp * cov_qp; }
};

/// Photon-flux bookkeeping: hbar*omega/T converts photon number over a
/// measurement period T to optical power.
struct PhotonFluxContext {
    double angular_frequency;  // rad/s
    double integration_time;   // s

    PhotonFluxContext(double omega, double t);
    static PhotonFluxContext for_wavelength(double wavelength_m, double t);

    /// hbar*omega/T in watts per photon-per-period.
    double power_quantum() const { return kHbar * angular_frequency / integration_time; }
};

GaussianState vacuum();
GaussianState coherent(double q, double p);

/// Shift the means by (dq, dp); covariance unchanged.
GaussianState displace(const GaussianState& state, double dq, double dp);

/// Squeeze by r >= 0 along the quadrature at angle theta: variance along
/// theta is multiplied by exp(-2r), the conjugate by exp(+2r). Negative r
/// is rejected; rotate theta by pi/2 instead.
GaussianState squeeze(const GaussianState& state, double r, double theta);

/// Pure-loss channel of transmissivity eta in [0,1]: means scale by
/// sqrt(eta), covariance -> eta*C + (1-eta)*vacuum.
GaussianState apply_loss(const GaussianState& state, double eta);

/// Rotate the state in phase space by angle theta.
GaussianState rotate(const GaussianState& state, double theta);

/// Variance of the quadrature measured at angle theta.
double quadrature_variance(const GaussianState& state, double theta);

/// <N> = mq^2 + mp^2 + var_q + var_p - 1/2.
double mean_photon_number(const GaussianState& state);

/// Photon-number variance of a Gaussian state expressed as an optical
/// intensity-noise variance in W^2:
///   (hbar w/T)^2 [4 q^2 var_q + 2 var_q^2 + 2 var_p^2 - 1/4]
/// evaluated in the frame where the mean lies along q. The rotation is
/// performed internally; a state whose covariance is not diagonal in that
/// frame is rejected.
double intensity_noise_variance(const GaussianState& state, const PhotonFluxContext& ctx);

/// SNR_dd = s^2 / <ds^2> for direct (intensity) detection. Requires mean
/// power > 0 and nonzero intensity noise.
double direct_detection_snr(const GaussianState& state, const PhotonFluxContext& ctx);

/// Two optical modes with possible cross-correlations. cross_cov is the
/// 2x2 block <d(q_a,p_a) d(q_b,p_b)^T>, row-major.
struct TwoModeState {
    GaussianState mode_a;
    GaussianState mode_b;
    std::array<double, 4> cross_cov{0.0, 0.0, 0.0, 0.0};

    TwoModeState() = default;
    TwoModeState(const GaussianState& a, const GaussianState& b,
                 const std::array<double, 4>& cross);

    /// Uncorrelated product state a (x) b.
    static TwoModeState product(const GaussianState& a, const GaussianState& b);

    double total_mean_photon_number() const;
};

/// Apply a real 4x4 matrix M (row-major, acting on (q_a, p_a, q_b, p_b))
/// to means and covariance: m -> M m, C -> M C M^T.
TwoModeState apply_symplectic(const TwoModeState& state, const std::array<double, 16>& m);

} // namespace qlink
