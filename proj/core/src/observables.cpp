#include "qvlasov/observables.hpp"

#include "parallel.hpp"
#include "qvlasov/errors.hpp"
#include "qvlasov/fingerprint.hpp"
#include "qvlasov/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>

namespace qvlasov {

void validate(const MomentumGrid& grid) {
    if (!std::isfinite(grid.p_min) || !std::isfinite(grid.p_max) || !(grid.p_min < grid.p_max))
        throw ConfigError("p_min", "grid needs p_min < p_max");
    if (grid.n_points < 2) throw ConfigError("n_points", "grid needs at least two nodes");
}

std::string describe(const MomentumGrid& grid) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "grid{p_min=%.17g,p_max=%.17g,n_points=%zu}", grid.p_min,
                  grid.p_max, grid.n_points);
    return buf;
}

Spectrum momentum_spectrum(const Field& field, const MomentumGrid& grid,
                           const SolverSettings& settings, unsigned workers) {
    validate(grid);
    validate(settings);

    Spectrum out;
    out.grid = grid;
    out.values.assign(grid.n_points, 0.0);
    out.fingerprint = fnv1a64(describe(field.config()) + "|" + describe(settings));

    std::mutex error_mutex;
    std::size_t failed_node = grid.n_points;
    std::exception_ptr failure;

    detail::parallel_for(grid.n_points, workers, [&](std::size_t i) {
        try {
            out.values[i] = solve_mode(ModeKinematics{grid.node(i)}, field, settings);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (i < failed_node) {
                failed_node = i;
                failure = std::current_exception();
            }
        }
    });

    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const IntegrationError& e) {
            throw IntegrationError("node " + std::to_string(failed_node) + ": " + e.what(),
                                   e.momentum(), e.time(), e.state());
        }
    }
    return out;
}

double number_density(const Spectrum& spectrum) {
    if (spectrum.values.size() != spectrum.grid.n_points)
        throw DataError("spectrum has " + std::to_string(spectrum.values.size()) +
                        " values for a grid of " + std::to_string(spectrum.grid.n_points));
    for (std::size_t i = 0; i < spectrum.values.size(); ++i) {
        if (!std::isfinite(spectrum.values[i]))
            throw DataError("non-finite spectrum value at node " + std::to_string(i));
    }
    if (spectrum.values.size() < 2) return 0.0;
    return 2.0 / (2.0 * std::numbers::pi) *
           quadrature::trapezoid(spectrum.values, spectrum.grid.spacing());
}

std::vector<Peak> find_peaks(double x0, double dx, std::span<const double> v, double min_prominence) {
    std::vector<Peak> peaks;
    const std::size_t n = v.size();
    if (n < 3) return peaks;
    const double top = *std::max_element(v.begin(), v.end());
    if (!(top > 0.0)) return peaks;
    const double threshold = min_prominence * top;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(v[i] > v[i - 1])) continue;
        std::size_t j = i;  // end of a possible plateau
        while (j + 1 < n && v[j + 1] == v[i]) ++j;
        if (j + 1 >= n || !(v[j + 1] < v[i])) {
            i = j;
            continue;
        }

        // Topographic prominence: the higher of the two minima separating
        // this peak from the nearest higher sample on each side.
        const double height = v[i];
        double left_min = height;
        for (std::size_t k = i; k-- > 0;) {
            if (v[k] > height) break;
            left_min = std::min(left_min, v[k]);
        }
        double right_min = height;
        for (std::size_t k = j + 1; k < n; ++k) {
            if (v[k] > height) break;
            right_min = std::min(right_min, v[k]);
        }
        const double prominence = height - std::max(left_min, right_min);

        if (prominence >= threshold && prominence > 0.0) {
            Peak p;
            if (j == i) {
                const double ym = v[i - 1], y0 = v[i], yp = v[i + 1];
                const double curvature = ym - 2.0 * y0 + yp;
                const double delta = curvature < 0.0 ? 0.5 * (ym - yp) / curvature : 0.0;
                p.momentum = x0 + (static_cast<double>(i) + delta) * dx;
                p.value = y0 - 0.25 * (ym - yp) * delta;
            } else {
                p.momentum = x0 + 0.5 * static_cast<double>(i + j) * dx;
                p.value = height;
            }
            peaks.push_back(p);
        }
        i = j;
    }

    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const Peak& a, const Peak& b) { return a.value > b.value; });
    return peaks;
}

std::vector<Peak> find_peaks(const Spectrum& spectrum, double min_prominence) {
    return find_peaks(spectrum.grid.p_min, spectrum.grid.spacing(), spectrum.values, min_prominence);
}

std::optional<double> resonance_momentum(const ResonanceCombo& combo, double omega_c, double omega_m,
                                         double m_star) {
    const double half = 0.5 * combo.energy(omega_c, omega_m);
    if (half < m_star) return std::nullopt;
    return std::sqrt(half * half - m_star * m_star);
}

std::vector<ResonanceCombo> enumerate_combos(unsigned max_photons) {
    std::vector<ResonanceCombo> combos;
    for (unsigned n = 1; n <= max_photons; ++n) {
        for (unsigned kc = n + 1; kc-- > 0;) {
            for (unsigned kp = n - kc + 1; kp-- > 0;) combos.push_back({kc, kp, n - kc - kp});
        }
    }
    return combos;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw DataError("power-law fit needs at least three points");
    double sx = 0.0, sy = 0.0;
    for (const auto& [N, n] : points) {
        if (!(N > 0.0) || !(n > 0.0) || !std::isfinite(N) || !std::isfinite(n))
            throw DataError("power-law fit needs positive finite data");
        sx += std::log(N);
        sy += std::log(n);
    }
    const double m = static_cast<double>(points.size());
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [N, n] : points) {
        const double dx = std::log(N) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(n) - my);
    }
    if (!(sxx > 0.0)) throw DataError("power-law fit needs at least two distinct N");

    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    const double log_a = my - fit.exponent * mx;
    fit.prefactor = std::exp(log_a);
    double ss = 0.0;
    for (const auto& [N, n] : points) {
        const double r = std::log(n) - (log_a + fit.exponent * std::log(N));
        ss += r * r;
    }
    fit.rms_log_residual = std::sqrt(ss / m);
    return fit;
}

}  // namespace qvlasov
