#pragma once

#include "qvlasov/fields.hpp"
#include "qvlasov/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace qvlasov {

/// Uniform grid of canonical longitudinal momenta P3 (units of m); p_perp = 0.
struct MomentumGrid {
    double p_min = -2.0;
    double p_max = 2.0;
    std::size_t n_points = 401;

    static MomentumGrid symmetric(double p_abs, std::size_t n_points) {
        return MomentumGrid{-p_abs, p_abs, n_points};
    }
    /// Spectrum default: [-2m, 2m], 401 nodes.
    static MomentumGrid spectrum_default() { return symmetric(2.0, 401); }
    /// Density-scan default: [-1.5m, 1.5m], 301 nodes.
    static MomentumGrid density_default() { return symmetric(1.5, 301); }

    double spacing() const noexcept { return (p_max - p_min) / static_cast<double>(n_points - 1); }
    double node(std::size_t i) const noexcept {
        return i + 1 == n_points ? p_max : p_min + static_cast<double>(i) * spacing();
    }
};

void validate(const MomentumGrid& grid);
std::string describe(const MomentumGrid& grid);

/// Asymptotic occupations f(P3, t_end) on a momentum grid.
struct Spectrum {
    MomentumGrid grid;
    std::vector<double> values;
    /// Hash of the field and solver settings that produced the values.
    std::uint64_t fingerprint = 0;
};

/// Solves every node independently; values[i] is solve_mode at grid.node(i).
///
/// Nodes are distributed over `workers` threads (0 means hardware
/// concurrency). The result does not depend on the worker count. Integration
/// failures are rethrown as IntegrationError naming the node.
Spectrum momentum_spectrum(const Field& field, const MomentumGrid& grid,
                           const SolverSettings& settings = {}, unsigned workers = 1);

/// Reduced 1D density n = 2 int dp/(2 pi) f(p), trapezoid rule on the grid.
double number_density(const Spectrum& spectrum);

struct Peak {
    double momentum = 0.0;
    double value = 0.0;
};

/// Local maxima whose topographic prominence is at least
/// min_prominence * max(values), refined by three-point parabolic
/// interpolation and sorted by descending value.
std::vector<Peak> find_peaks(const Spectrum& spectrum, double min_prominence = 0.05);

/// Same, for samples on the uniform axis x0, x0 + dx, ...
std::vector<Peak> find_peaks(double x0, double dx, std::span<const double> values,
                             double min_prominence);

/// Photon counts drawn from the carrier and the two sidebands.
struct ResonanceCombo {
    unsigned k_c = 0;
    unsigned k_plus = 0;
    unsigned k_minus = 0;

    unsigned photons() const noexcept { return k_c + k_plus + k_minus; }
    /// k_c w_c + k_plus (w_c + w_m) + k_minus (w_c - w_m).
    double energy(double omega_c, double omega_m) const noexcept {
        return k_c * omega_c + k_plus * (omega_c + omega_m) + k_minus * (omega_c - omega_m);
    }
};

/// Momentum at which the combo's total energy creates a pair of effective
/// mass m_star, sqrt((Omega/2)^2 - m_star^2); empty below threshold.
std::optional<double> resonance_momentum(const ResonanceCombo& combo, double omega_c, double omega_m,
                                         double m_star);

/// Every combo with 1..max_photons photons, ordered by photon count and then
/// lexicographically by (k_c, k_plus, k_minus) descending.
std::vector<ResonanceCombo> enumerate_combos(unsigned max_photons);

struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    /// RMS of log(n) - log(a N^b) over the points.
    double rms_log_residual = 0.0;
};

/// Least-squares line through (log N, log n).
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

}  // namespace qvlasov
