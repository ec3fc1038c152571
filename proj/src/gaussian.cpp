#include "qlink/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace qlink {

namespace {

constexpr double kEigenTolerance = 1e-12;

void check_covariance(double vq, double vp, double cqp) {
    // Eigenvalues of the symmetric 2x2 covariance.
    const double tr = vq + vp;
    const double det = vq * vp - cqp * cqp;
    const double disc = tr * tr - 4.0 * det;
    const double root = std::sqrt(std::max(disc, 0.0));
    const double lambda_min = 0.5 * (tr - root);
    const double scale = std::max(1.0, std::abs(tr));
    if (!(lambda_min > kEigenTolerance * scale)) {
        throw std::invalid_argument("GaussianState: covariance is not positive definite");
    }
    const double bound_scale = std::max(1.0, vq * vp);
    if (det < 1.0 / 16.0 - 1e-9 * bound_scale) {
        throw std::invalid_argument("GaussianState: covariance violates the uncertainty bound");
    }
}

} // namespace

GaussianState::GaussianState(double mq, double mp, double vq, double vp, double cqp)
    : mean_q(mq), mean_p(mp), var_q(vq), var_p(vp), cov_qp(cqp) {
    if (!std::isfinite(mq) || !std::isfinite(mp) || !std::isfinite(vq) ||
        !std::isfinite(vp) || !std::isfinite(cqp)) {
        throw std::invalid_argument("GaussianState: non-finite parameter");
    }
    check_covariance(vq, vp, cqp);
}

PhotonFluxContext::PhotonFluxContext(double omega, double t)
    : angular_frequency(omega), integration_time(t) {
    if (!(omega > 0.0) || !(t > 0.0)) {
        throw std::invalid_argument("PhotonFluxContext: omega and T must be positive");
    }
}

PhotonFluxContext PhotonFluxContext::for_wavelength(double wavelength_m, double t) {
    return PhotonFluxContext(qlink::angular_frequency(wavelength_m), t);
}

GaussianState vacuum() { return GaussianState(); }

GaussianState coherent(double q, double p) {
    return GaussianState(q, p, kVacuumVariance, kVacuumVariance, 0.0);
}

GaussianState displace(const GaussianState& state, double dq, double dp) {
    GaussianState out = state;
    out.mean_q += dq;
    out.mean_p += dp;
    return out;
}

GaussianState squeeze(const GaussianState& state, double r, double theta) {
    if (r < 0.0) {
        throw std::invalid_argument("squeeze: r must be >= 0 (rotate theta instead)");
    }
    // M = R(theta) diag(e^-r, e^+r) R(-theta)
    const double c = std::cos(theta), s = std::sin(theta);
    const double em = std::exp(-r), ep = std::exp(r);
    const double m00 = c * c * em + s * s * ep;
    const double m01 = c * s * (em - ep);
    const double m11 = s * s * em + c * c * ep;
    GaussianState out = state;
    out.mean_q = m00 * state.mean_q + m01 * state.mean_p;
    out.mean_p = m01 * state.mean_q + m11 * state.mean_p;
    const double a = state.var_q, b = state.cov_qp, d = state.var_p;
    out.var_q = m00 * (m00 * a + m01 * b) + m01 * (m00 * b + m01 * d);
    out.cov_qp = m01 * (m00 * a + m01 * b) + m11 * (m00 * b + m01 * d);
    out.var_p = m01 * (m01 * a + m11 * b) + m11 * (m01 * b + m11 * d);
    return out;
}

GaussianState apply_loss(const GaussianState& state, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("apply_loss: eta must be in [0, 1]");
    }
    const double root = std::sqrt(eta);
    GaussianState out;
    out.mean_q = root * state.mean_q;
    out.mean_p = root * state.mean_p;
    out.var_q = eta * state.var_q + (1.0 - eta) * kVacuumVariance;
    out.var_p = eta * state.var_p + (1.0 - eta) * kVacuumVariance;
    out.cov_qp = eta * state.cov_qp;
    return out;
}

GaussianState rotate(const GaussianState& state, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    GaussianState out = state;
    out.mean_q = c * state.mean_q - s * state.mean_p;
    out.mean_p = s * state.mean_q + c * state.mean_p;
    const double a = state.var_q, b = state.cov_qp, d = state.var_p;
    out.var_q = c * c * a - 2.0 * c * s * b + s * s * d;
    out.var_p = s * s * a + 2.0 * c * s * b + c * c * d;
    out.cov_qp = c * s * (a - d) + (c * c - s * s) * b;
    return out;
}

double quadrature_variance(const GaussianState& state, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return c * c * state.var_q + s * s * state.var_p + 2.0 * s * c * state.cov_qp;
}

double mean_photon_number(const GaussianState& state) {
    return state.mean_q * state.mean_q + state.mean_p * state.mean_p +
           state.var_q + state.var_p - 0.5;
}

double intensity_noise_variance(const GaussianState& state, const PhotonFluxContext& ctx) {
    GaussianState s = state;
    const double amp = std::hypot(s.mean_q, s.mean_p);
    if (amp > 0.0) {
        s = rotate(s, -std::atan2(s.mean_p, s.mean_q));
    }
    const double scale = std::max(1.0, std::max(s.var_q, s.var_p));
    if (std::abs(s.cov_qp) > 1e-9 * scale) {
        throw std::invalid_argument(
            "intensity_noise_variance: covariance not diagonal in the mean-aligned frame");
    }
    const double q2 = s.mean_q * s.mean_q;
    const double bracket = 4.0 * q2 * s.var_q + 2.0 * s.var_q * s.var_q +
                           2.0 * s.var_p * s.var_p - 0.25;
    const double quantum = ctx.power_quantum();
    return quantum * quantum * bracket;
}

double direct_detection_snr(const GaussianState& state, const PhotonFluxContext& ctx) {
    const double n = mean_photon_number(state);
    if (!(n > 0.0)) {
        throw std::domain_error("direct_detection_snr: mean power must be positive");
    }
    const double s = ctx.power_quantum() * n;
    const double var = intensity_noise_variance(state, ctx);
    if (!(var > 0.0)) {
        throw std::domain_error("direct_detection_snr: zero intensity-noise variance");
    }
    return s * s / var;
}

TwoModeState::TwoModeState(const GaussianState& a, const GaussianState& b,
                           const std::array<double, 4>& cross)
    : mode_a(a), mode_b(b), cross_cov(cross) {
    // Validate the full 4x4 covariance by Sylvester's criterion.
    const double c[4][4] = {
        {a.var_q, a.cov_qp, cross[0], cross[1]},
        {a.cov_qp, a.var_p, cross[2], cross[3]},
        {cross[0], cross[2], b.var_q, b.cov_qp},
        {cross[1], cross[3], b.cov_qp, b.var_p}};
    double minor1 = c[0][0];
    double minor2 = c[0][0] * c[1][1] - c[0][1] * c[1][0];
    double minor3 = c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1]) -
                    c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0]) +
                    c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0]);
    double minor4 = 0.0;
    for (int j = 0; j < 4; ++j) {
        double sub[3][3];
        for (int r = 1; r < 4; ++r) {
            int cc = 0;
            for (int k = 0; k < 4; ++k) {
                if (k == j) continue;
                sub[r - 1][cc++] = c[r][k];
            }
        }
        const double det3 = sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1]) -
                            sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0]) +
                            sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
        minor4 += ((j % 2 == 0) ? 1.0 : -1.0) * c[0][j] * det3;
    }
    if (!(minor1 > 0.0 && minor2 > 0.0 && minor3 > 0.0 && minor4 > 0.0)) {
        throw std::invalid_argument("TwoModeState: 4x4 covariance is not positive definite");
    }
}

TwoModeState TwoModeState::product(const GaussianState& a, const GaussianState& b) {
    return TwoModeState(a, b, {0.0, 0.0, 0.0, 0.0});
}

double TwoModeState::total_mean_photon_number() const {
    return mean_photon_number(mode_a) + mean_photon_number(mode_b);
}

TwoModeState apply_symplectic(const TwoModeState& state, const std::array<double, 16>& m) {
    const double mean[4] = {state.mode_a.mean_q, state.mode_a.mean_p,
                            state.mode_b.mean_q, state.mode_b.mean_p};
    const double c[4][4] = {
        {state.mode_a.var_q, state.mode_a.cov_qp, state.cross_cov[0], state.cross_cov[1]},
        {state.mode_a.cov_qp, state.mode_a.var_p, state.cross_cov[2], state.cross_cov[3]},
        {state.cross_cov[0], state.cross_cov[2], state.mode_b.var_q, state.mode_b.cov_qp},
        {state.cross_cov[1], state.cross_cov[3], state.mode_b.cov_qp, state.mode_b.var_p}};

    double mean_out[4] = {};
    double mc[4][4] = {};
    double out[4][4] = {};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            mean_out[i] += m[4 * i + j] * mean[j];
            for (int k = 0; k < 4; ++k) mc[i][j] += m[4 * i + k] * c[k][j];
        }
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) out[i][j] += mc[i][k] * m[4 * j + k];
        }
    }

    GaussianState a(mean_out[0], mean_out[1], out[0][0], out[1][1], out[0][1]);
    GaussianState b(mean_out[2], mean_out[3], out[2][2], out[3][3], out[2][3]);
    return TwoModeState(a, b, {out[0][2], out[0][3], out[1][2], out[1][3]});
}

} // namespace qlink
