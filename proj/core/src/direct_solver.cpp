#include "qvlasov/errors.hpp"
#include "qvlasov/quadrature.hpp"
#include "qvlasov/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace qvlasov {

namespace {

// Uniform pieces between breakpoints; node k of the whole grid is t[k].
struct PiecewiseGrid {
    std::vector<double> t;
    std::vector<std::size_t> piece_start;  // first node of each piece
    std::vector<double> piece_step;
    std::vector<std::size_t> piece_of;     // piece index of the interval ending at node k
};

PiecewiseGrid make_grid(const Field& field, double max_step) {
    std::vector<double> edges{0.0};
    for (double b : derivative_breakpoints(field.config())) edges.push_back(b);
    edges.push_back(field.span());

    PiecewiseGrid g;
    g.t.push_back(0.0);
    g.piece_of.push_back(0);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double len = edges[p + 1] - edges[p];
        const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / max_step)));
        const double h = len / static_cast<double>(m);
        g.piece_start.push_back(g.t.size() - 1);
        g.piece_step.push_back(h);
        for (std::size_t i = 1; i <= m; ++i) {
            g.t.push_back(i == m ? edges[p + 1] : edges[p] + static_cast<double>(i) * h);
            g.piece_of.push_back(p);
        }
    }
    return g;
}

// Weights of the (m+1)-node Gregory rule, without the step factor.
class GregoryRule {
public:
    explicit GregoryRule(int order)
        : order_(order), corr_(quadrature::gregory_end_corrections(order)),
          short_from_(2 * (static_cast<std::size_t>(order) + 1)) {}

    double weight(std::size_t i, std::size_t m) {
        if (m < short_from_) {
            if (cache_.size() <= m) cache_.resize(m + 1);
            if (cache_[m].empty()) cache_[m] = quadrature::gregory_weights(m + 1, order_);
            return cache_[m][i];
        }
        double w = (i == 0 || i == m) ? 0.5 : 1.0;
        if (i < corr_.size()) w += corr_[i];
        if (m - i < corr_.size()) w += corr_[m - i];
        return w;
    }

private:
    int order_;
    std::vector<double> corr_;
    std::size_t short_from_;
    std::vector<std::vector<double>> cache_;
};

}  // namespace

double max_direct_grid_step(const ModeKinematics& kin, const Field& field) {
    const double p_max = std::abs(kin.P3) + field.max_abs_potential();
    const double omega_max = std::sqrt(kin.eps_perp_squared() + p_max * p_max);
    return (2.0 * std::numbers::pi / (2.0 * omega_max)) / 20.0;
}

double solve_mode_direct(const ModeKinematics& kin, const Field& field, double grid_step,
                         const DirectSolverOptions& options) {
    const double bound = max_direct_grid_step(kin, field);
    if (!(grid_step > 0.0) || grid_step > bound)
        throw ConfigError("grid_step", "must lie in (0, " + std::to_string(bound) +
                                           "] to resolve the fastest phase oscillation");
    const double estimate = field.span() / grid_step;
    if (estimate + 1.0 > static_cast<double>(options.max_grid_points))
        throw ResourceError("direct quadrature would need about " +
                            std::to_string(static_cast<std::size_t>(estimate) + 1) +
                            " grid points (budget " + std::to_string(options.max_grid_points) +
                            "); use a shorter span or the ODE solver");
    const auto grid = make_grid(field, grid_step);
    const std::size_t n = grid.t.size();
    if (n > options.max_grid_points)
        throw ResourceError("direct quadrature would need " + std::to_string(n) +
                            " grid points (budget " + std::to_string(options.max_grid_points) + ")");
    const double eps = kin.eps_perp();

    // History of q(t_k) and of the accumulated phase Phi(t_k) = int_0^t_k omega,
    // so that Theta(t_k, t_j) = Phi_j - Phi_k.
    std::vector<double> q(n), phase(n);
    quadrature::CompensatedSum phase_sum;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = grid.t[k];
        const double omega = kin.energy(field.potential(t));
        q[k] = field.value(t) * eps / (omega * omega);
        if (k > 0) {
            phase_sum.add(quadrature::gauss_legendre_3.integrate(
                [&](double s) { return kin.energy(field.potential(s)); }, grid.t[k - 1], t));
        }
        phase[k] = phase_sum.value();
    }

    GregoryRule rule(options.gregory_order);
    const std::size_t short_from = 2 * (static_cast<std::size_t>(options.gregory_order) + 1);
    auto omega_at = [&](double s) { return kin.energy(field.potential(s)); };

    std::vector<double> source(n);  // q_k (1 - 2 f_k)
    std::vector<double> rate(n);    // f'(t_k)
    std::vector<double> f(n);

    source[0] = q[0];
    for (std::size_t j = 1; j < n; ++j) {
        const std::size_t current = grid.piece_of[j];

        // The memory integral is affine in the unknown f_j:
        //   int_0^{t_j} q (1 - 2f) cos(2 Theta) = m0 + m1 f_j.
        quadrature::CompensatedSum m0;
        double m1 = 0.0;
        for (std::size_t p = 0; p < current; ++p) {
            const std::size_t first = grid.piece_start[p];
            const std::size_t m = grid.piece_start[p + 1] - first;
            const double h = grid.piece_step[p];
            for (std::size_t k = first; k <= first + m; ++k)
                m0.add(h * rule.weight(k - first, m) * source[k] * std::cos(2.0 * (phase[j] - phase[k])));
        }
        const std::size_t first = grid.piece_start[current];
        const std::size_t m = j - first;
        const double h = grid.piece_step[current];
        if (m >= short_from) {
            for (std::size_t k = first; k < j; ++k)
                m0.add(h * rule.weight(k - first, m) * source[k] * std::cos(2.0 * (phase[j] - phase[k])));
            const double w = h * rule.weight(m, m);
            m0.add(w * q[j]);
            m1 = -2.0 * w * q[j];
        } else {
            // Too few nodes past the breakpoint for a high-order rule: use
            // Gauss-Legendre per interval with f interpolated linearly.
            for (std::size_t k = first; k < j; ++k) {
                const double a = grid.t[k];
                const double b = grid.t[k + 1];
                const double phase_j = phase[j];
                const double phase_a = phase[k];
                auto integrand = [&](double s, double weight_of_end) {
                    const double theta = phase_a + quadrature::gauss_legendre_3.integrate(omega_at, a, s);
                    const double E = field.value(s);
                    const double omega = kin.energy(field.potential(s));
                    return E * eps / (omega * omega) * std::cos(2.0 * (phase_j - theta)) * weight_of_end;
                };
                const double lhs = quadrature::gauss_legendre_6.integrate(
                    [&](double s) { return integrand(s, (b - s) / (b - a)); }, a, b);
                const double rhs = quadrature::gauss_legendre_6.integrate(
                    [&](double s) { return integrand(s, (s - a) / (b - a)); }, a, b);
                // f(s) = f_k (b - s)/(b - a) + f_{k+1} (s - a)/(b - a).
                m0.add(lhs + rhs - 2.0 * f[k] * lhs);
                if (k + 1 == j) {
                    m1 = -2.0 * rhs;
                } else {
                    m0.add(-2.0 * f[k + 1] * rhs);
                }
            }
        }

        // rate_j = q_j/2 (m0 + m1 f_j) and the trapezoid update
        // f_j = f_{j-1} + dt/2 (rate_{j-1} + rate_j) are solved together.
        const double dt = grid.t[j] - grid.t[j - 1];
        const double carried = f[j - 1] + 0.5 * dt * rate[j - 1];
        f[j] = (carried + 0.25 * dt * q[j] * m0.value()) / (1.0 - 0.25 * dt * q[j] * m1);
        rate[j] = 0.5 * q[j] * (m0.value() + m1 * f[j]);
        source[j] = q[j] * (1.0 - 2.0 * f[j]);
    }

    // Final occupation from the high-order rule over the whole rate history.
    quadrature::CompensatedSum total;
    for (std::size_t p = 0; p < grid.piece_start.size(); ++p) {
        const std::size_t first = grid.piece_start[p];
        const std::size_t last = p + 1 < grid.piece_start.size() ? grid.piece_start[p + 1] : n - 1;
        const std::size_t m = last - first;
        for (std::size_t k = first; k <= last; ++k)
            total.add(grid.piece_step[p] * rule.weight(k - first, m) * rate[k]);
    }
    return total.value();
}

}  // namespace qvlasov
