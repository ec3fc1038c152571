#include "qlink/capacity.hpp"

#include <cmath>
#include <stdexcept>

namespace qlink {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

void ChannelPoint::validate() const {
    if (!(mean_photons_n >= 0.0)) throw std::invalid_argument("ChannelPoint: N must be >= 0");
    if (!(squeezing_r >= 0.0)) throw std::invalid_argument("ChannelPoint: r must be >= 0");
    if (!(efficiency_eta >= 0.0 && efficiency_eta <= 1.0)) {
        throw std::invalid_argument("ChannelPoint: eta must be in [0, 1]");
    }
    if (!(bandwidth_b > 0.0)) throw std::invalid_argument("ChannelPoint: bandwidth must be positive");
    if (!(wavelength > 0.0)) throw std::invalid_argument("ChannelPoint: wavelength must be positive");
}

double mean_photons(double signal_power, double bandwidth, double wavelength) {
    if (!(signal_power >= 0.0) || !(bandwidth > 0.0)) {
        throw std::invalid_argument("mean_photons: invalid power or bandwidth");
    }
    return signal_power / (photon_energy(wavelength) * bandwidth);
}

double c_shannon_1q(double n) {
    if (!(n >= 0.0)) throw std::invalid_argument("c_shannon_1q: N must be >= 0");
    return 0.5 * std::log1p(4.0 * n) / kLn2;
}

double c_shannon_2q(double n) {
    if (!(n >= 0.0)) throw std::invalid_argument("c_shannon_2q: N must be >= 0");
    return std::log1p(n) / kLn2;
}

double c_holevo(double n) {
    if (!(n >= 0.0)) throw std::invalid_argument("c_holevo: N must be >= 0");
    if (n == 0.0) return 0.0;
    // g(N) = log2(N+1) + N log2(1 + 1/N); free of large-term cancellation.
    return (std::log1p(n) + n * std::log1p(1.0 / n)) / kLn2;
}

double c_squeezed(double n, double r, double eta) {
    if (!(n >= 0.0)) throw std::invalid_argument("c_squeezed: N must be >= 0");
    if (!(r >= 0.0)) throw std::invalid_argument("c_squeezed: r must be >= 0");
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("c_squeezed: eta must be in [0, 1]");
    const double denom = eta * std::exp(-2.0 * r) + 1.0 - eta;
    return 0.5 * std::log1p(4.0 * n / denom) / kLn2;
}

double energy_per_bit_coherent(double s_s, double s_lo, double bandwidth, double wavelength) {
    if (!(s_s > 0.0) || !(s_lo >= 0.0)) {
        throw std::invalid_argument("energy_per_bit_coherent: powers must be positive");
    }
    const double c = c_shannon_1q(mean_photons(s_s, bandwidth, wavelength));
    if (!(c > 0.0)) throw std::domain_error("energy_per_bit_coherent: zero capacity");
    return (s_s + s_lo) / (bandwidth * c);
}

double energy_per_bit_squeezed(double s_s, double s_lo, double r, double mu, double eta,
                               double bandwidth, double wavelength) {
    if (!(mu > 0.0)) throw std::invalid_argument("energy_per_bit_squeezed: mu must be positive");
    if (!(s_s > 0.0) || !(s_lo >= 0.0)) {
        throw std::invalid_argument("energy_per_bit_squeezed: powers must be positive");
    }
    const double c = c_squeezed(mean_photons(s_s, bandwidth, wavelength), r, eta);
    if (!(c > 0.0)) throw std::domain_error("energy_per_bit_squeezed: zero capacity");
    const double pump = (r / mu) * (r / mu);
    return (s_s + s_lo + pump) / (bandwidth * c);
}

double energy_per_bit_mode(double n, double capacity_bits, double wavelength) {
    if (!(capacity_bits > 0.0)) throw std::domain_error("energy_per_bit_mode: zero capacity");
    return photon_energy(wavelength) * n / capacity_bits;
}

double improvement_factor(double n) {
    if (!(n > 0.0)) throw std::invalid_argument("improvement_factor: N must be positive");
    return 1.0 - std::log(n);
}

} // namespace qlink
