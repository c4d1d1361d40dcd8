#pragma once

#include "qvlasov/fields.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace qvlasov {

/// (f, g, w) for one momentum mode at time t. f is the occupation, g the
/// source accumulator and w the counter-term of the local ODE form of the
/// quantum Vlasov equation.
struct ModeState {
    double f = 0.0;
    double g = 0.0;
    double w = 0.0;
    double t = 0.0;
};

struct StateDerivative {
    double df = 0.0;
    double dg = 0.0;
    double dw = 0.0;
};

/// Canonical longitudinal momentum P3 and transverse momentum of a mode.
/// Spectra in this library always use p_perp = 0.
struct ModeKinematics {
    double P3 = 0.0;
    double p_perp = 0.0;

    double eps_perp_squared() const noexcept {
        return units::electron_mass * units::electron_mass + p_perp * p_perp;
    }
    double eps_perp() const noexcept { return std::sqrt(eps_perp_squared()); }
    /// p_par(t) = P3 - eA(t).
    double kinetic_momentum(double A) const noexcept { return P3 - A; }
    /// omega(p, t) = sqrt(eps_perp^2 + p_par^2).
    double energy(double A) const noexcept {
        const double p = kinetic_momentum(A);
        return std::sqrt(eps_perp_squared() + p * p);
    }
};

enum class StepperMethod {
    dormand_prince_54,  ///< 5(4) embedded pair, FSAL, PI step control
};

struct SolverSettings {
    double rel_tol = 1e-8;
    double abs_tol = 1e-13;
    /// Upper bound on the step, tau0. Zero selects (2 pi / w_fast) / 10.
    double max_step = 0.0;
    std::size_t max_steps = 20'000'000;
    StepperMethod method = StepperMethod::dormand_prince_54;
};

void validate(const SolverSettings& settings);
std::string describe(const SolverSettings& settings);

/// Right-hand side of the (f, g, w) system for given E(t) and A(t):
///   f' = q g / 2,  g' = q (1 - 2f) - 2 omega w,  w' = 2 omega g,
/// with q = eE eps_perp / omega^2.
inline StateDerivative vlasov_rhs(const ModeState& s, const ModeKinematics& kin, double E,
                                  double A) noexcept {
    const double p = kin.kinetic_momentum(A);
    const double eps2 = kin.eps_perp_squared();
    const double omega2 = eps2 + p * p;
    const double omega = std::sqrt(omega2);
    const double q = E * std::sqrt(eps2) / omega2;
    return {0.5 * q * s.g, q * (1.0 - 2.0 * s.f) - 2.0 * omega * s.w, 2.0 * omega * s.g};
}

StateDerivative vlasov_rhs(const ModeState& state, const ModeKinematics& kin, const Field& field,
                           double t);

struct ModeSolution {
    ModeState final_state;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    std::size_t rhs_evaluations = 0;
    /// Extremes of f over all accepted steps.
    double min_f = 0.0;
    double max_f = 0.0;
};

/// Integrates (0, 0, 0) across the field span with the adaptive embedded
/// Runge-Kutta pair. Throws IntegrationError on step-size underflow, on an
/// exhausted step budget, or when f leaves [-1e-12, 1 + 1e-12].
ModeSolution integrate_mode(const ModeKinematics& kin, const Field& field,
                            const SolverSettings& settings = {});

/// f at the end of the span (the asymptotic occupation).
double solve_mode(const ModeKinematics& kin, const Field& field, const SolverSettings& settings = {});

struct DirectSolverOptions {
    int gregory_order = 6;
    /// Hard cap on grid points; the method is quadratic in this number.
    std::size_t max_grid_points = 60'000;
};

/// Largest admissible grid step for the direct solver: a twentieth of the
/// period of the fastest phase oscillation 2 omega_max.
double max_direct_grid_step(const ModeKinematics& kin, const Field& field);

/// Integrates the non-Markovian integro-differential form directly:
///   f'(t) = q(t)/2 int_0^t q(t') [1 - 2f(t')] cos(2 Theta(t', t)) dt',
/// keeping the full history of q and of the accumulated phase Theta. The grid
/// is uniform between the field's derivative breakpoints, with steps no
/// larger than grid_step, and every integral uses Gregory end corrections
/// on each piece. Quadratic in the number of grid points; intended as an
/// independent cross-check of solve_mode on small instances.
///
/// Throws ConfigError if grid_step exceeds max_direct_grid_step and
/// ResourceError if the grid would exceed the point budget.
double solve_mode_direct(const ModeKinematics& kin, const Field& field, double grid_step,
                         const DirectSolverOptions& options = {});

}  // namespace qvlasov
