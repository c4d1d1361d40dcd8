#include "qvlasov/solver.hpp"

#include "qvlasov/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace qvlasov {

namespace {

using Vec3 = std::array<double, 3>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// PI controller constants (Hairer & Wanner, DOPRI5).
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kSafety = 0.9;
constexpr double kMinShrink = 0.2;  // h_new >= 0.2 h
constexpr double kMaxGrow = 10.0;   // h_new <= 10 h

constexpr double kPauliSlack = 1e-12;

struct ModeSystem {
    const ModeKinematics& kin;
    const Field& field;
    std::size_t evaluations = 0;

    Vec3 operator()(double t, const Vec3& y) {
        ++evaluations;
        const auto d = vlasov_rhs(ModeState{y[0], y[1], y[2], t}, kin, field.value(t), field.potential(t));
        return {d.df, d.dg, d.dw};
    }
};

}  // namespace

void validate(const SolverSettings& s) {
    if (!(s.rel_tol > 0.0 && s.rel_tol < 1.0))
        throw ConfigError("rel_tol", "must lie in (0, 1)");
    if (!(s.abs_tol > 0.0)) throw ConfigError("abs_tol", "must be positive");
    if (!(s.max_step >= 0.0) || !std::isfinite(s.max_step))
        throw ConfigError("max_step", "must be non-negative (0 selects the default)");
    if (s.max_steps == 0) throw ConfigError("max_steps", "must be positive");
}

std::string describe(const SolverSettings& s) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "dopri54{rel_tol=%.17g,abs_tol=%.17g,max_step=%.17g,max_steps=%zu}",
                  s.rel_tol, s.abs_tol, s.max_step, s.max_steps);
    return buf;
}

StateDerivative vlasov_rhs(const ModeState& state, const ModeKinematics& kin, const Field& field,
                           double t) {
    return vlasov_rhs(state, kin, field.value(t), field.potential(t));
}

ModeSolution integrate_mode(const ModeKinematics& kin, const Field& field,
                            const SolverSettings& settings) {
    validate(settings);
    const double t_end = field.span();
    const double h_max = settings.max_step > 0.0
                             ? settings.max_step
                             : 2.0 * std::numbers::pi / fastest_frequency(field.config()) / 10.0;
    const double rtol = settings.rel_tol;
    const double atol = settings.abs_tol;

    ModeSystem rhs{kin, field};
    ModeSolution out;
    double t = 0.0;
    Vec3 y{0.0, 0.0, 0.0};
    Vec3 k1 = rhs(t, y);
    double h = std::min(0.1 * h_max, t_end);
    double err_old = 1e-4;
    bool rejected_last = false;

    auto fail = [&](const char* why) { throw IntegrationError(why, kin.P3, t, y); };

    while (t < t_end) {
        if (out.accepted_steps + out.rejected_steps >= settings.max_steps) fail("step budget exceeded");
        if (t + h > t_end) h = t_end - t;
        if (h <= 1e-14 * std::max(1.0, std::abs(t))) fail("step size underflow");

        Vec3 tmp;
        for (int i = 0; i < 3; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        const Vec3 k2 = rhs(t + c2 * h, tmp);
        for (int i = 0; i < 3; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const Vec3 k3 = rhs(t + c3 * h, tmp);
        for (int i = 0; i < 3; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const Vec3 k4 = rhs(t + c4 * h, tmp);
        for (int i = 0; i < 3; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const Vec3 k5 = rhs(t + c5 * h, tmp);
        for (int i = 0; i < 3; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const double t_new = (t + h >= t_end) ? t_end : t + h;
        const Vec3 k6 = rhs(t_new, tmp);
        Vec3 y_new;
        for (int i = 0; i < 3; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        const Vec3 k7 = rhs(t_new, y_new);

        double err = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err += (e / scale) * (e / scale);
        }
        err = std::sqrt(err / 3.0);
        if (!std::isfinite(err)) fail("non-finite error estimate");

        double fac = std::pow(err, kExpo);
        if (err <= 1.0) {
            fac /= std::pow(err_old, kBeta);
            double factor = std::clamp(kSafety / fac, kMinShrink, kMaxGrow);
            if (rejected_last) factor = std::min(factor, 1.0);
            err_old = std::max(err, 1e-4);
            t = t_new;
            y = y_new;
            k1 = k7;
            ++out.accepted_steps;
            rejected_last = false;
            out.min_f = std::min(out.min_f, y[0]);
            out.max_f = std::max(out.max_f, y[0]);
            if (y[0] < -kPauliSlack || y[0] > 1.0 + kPauliSlack) fail("occupation left [0, 1]");
            h = std::min(h * factor, h_max);
        } else {
            ++out.rejected_steps;
            rejected_last = true;
            h *= std::max(kMinShrink, kSafety / fac);
        }
    }

    out.final_state = ModeState{y[0], y[1], y[2], t};
    out.rhs_evaluations = rhs.evaluations;
    return out;
}

double solve_mode(const ModeKinematics& kin, const Field& field, const SolverSettings& settings) {
    return integrate_mode(kin, field, settings).final_state.f;
}

}  // namespace qvlasov
