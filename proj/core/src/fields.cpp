#include "qvlasov/fields.hpp"

#include "qvlasov/errors.hpp"
#include "qvlasov/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qvlasov {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Table density for the vector potential. The cubic Hermite remainder is
// h^4 |A''''| / 384, i.e. about (h w)^4 / 384 relative to max|A|; 800 samples
// per fastest period puts that near 1e-12.
constexpr double kSamplesPerPeriod = 800.0;
constexpr std::size_t kMaxTableSize = std::size_t{1} << 26;

// Gaussian tails beyond exp(-60) are dropped from the pulse sum.
constexpr double kGaussianCutoff = 60.0;

double evaluate(const FieldConfig& config, double t);

double evaluate_modulated(const ModulatedFieldConfig& c, double t) {
    const double modulation = 1.0 - c.M * 0.5 * (1.0 + std::cos(c.omega_m * t));
    return c.envelope()(t) * modulation * c.E0 * std::sin(c.omega_c * t);
}

double evaluate_pulse_train(const PulseTrainConfig& c, double t) {
    double weight = 0.0;
    for (int n = 1; n <= c.N; ++n) {
        const double x = (t - c.pulse_center(n)) / c.tau;
        const double x2 = x * x;
        if (x2 < kGaussianCutoff) weight += std::exp(-x2);
    }
    if (weight == 0.0) return 0.0;
    return c.E0 * weight * std::sin(c.omega_c * t);
}

double evaluate(const FieldConfig& config, double t) {
    return std::visit(overloaded{
                          [t](const ModulatedFieldConfig& c) { return evaluate_modulated(c, t); },
                          [t](const PulseTrainConfig& c) { return evaluate_pulse_train(c, t); },
                          [t](const Superposition& s) {
                              double sum = 0.0;
                              for (const auto& m : s.members) sum += evaluate(m, t);
                              return sum;
                          },
                      },
                      config.shape);
}

// Times where E(t) has a derivative kink (envelope joints).
void collect_breakpoints(const FieldConfig& config, std::vector<double>& out) {
    std::visit(overloaded{
                   [&out](const ModulatedFieldConfig& c) {
                       if (c.t_switch > 0.0) {
                           out.push_back(c.t_switch);
                           out.push_back(c.t_switch + c.t_d);
                       }
                   },
                   [](const PulseTrainConfig&) {},
                   [&out](const Superposition& s) {
                       for (const auto& m : s.members) collect_breakpoints(m, out);
                   },
               },
               config.shape);
}

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void require(bool ok, const char* key, const std::string& message) {
    if (!ok) throw ConfigError(key, message);
}

}  // namespace

double Envelope::operator()(double t) const noexcept {
    if (t >= t_on && t <= t_off) return 1.0;
    if (tau_s <= 0.0) return 0.0;
    if (t < t_on) return std::exp((t - t_on) / tau_s);
    return std::exp(-(t - t_off) / tau_s);
}

Envelope ModulatedFieldConfig::envelope() const noexcept {
    return Envelope{t_switch, t_switch + t_d, ramp_fraction * t_switch};
}

PulseTrainConfig PulseTrainConfig::from_modulation_frequency(double E0, double omega_c, double tau,
                                                             double omega_m, int N) {
    if (!(omega_m > 0.0)) throw ConfigError("omega_m", "pulse-train frequency must be positive");
    return PulseTrainConfig{E0, omega_c, tau, kTwoPi / omega_m, N};
}

double PulseTrainConfig::modulation_frequency() const noexcept { return kTwoPi / T_m; }

FieldConfig FieldConfig::zero(double span) { return FieldConfig{Superposition{{}, span}}; }

void validate(const ModulatedFieldConfig& c) {
    require(std::isfinite(c.E0) && c.E0 > 0.0, "E0", "must be positive, got " + fmt17(c.E0));
    require(std::isfinite(c.omega_c) && c.omega_c > 0.0, "omega_c",
            "must be positive, got " + fmt17(c.omega_c));
    require(std::isfinite(c.omega_m) && c.omega_m >= 0.0 && c.omega_m < c.omega_c, "omega_m",
            "must lie in [0, omega_c), got " + fmt17(c.omega_m));
    require(std::isfinite(c.M) && c.M >= 0.0 && c.M <= 1.0, "M",
            "modulation degree must lie in [0, 1], got " + fmt17(c.M));
    require(std::isfinite(c.t_switch) && c.t_switch >= 0.0, "t_switch",
            "must be non-negative, got " + fmt17(c.t_switch));
    require(std::isfinite(c.t_d) && c.t_d > 0.0, "t_d", "must be positive, got " + fmt17(c.t_d));
    require(std::isfinite(c.ramp_fraction) && c.ramp_fraction > 0.0, "ramp_fraction",
            "must be positive, got " + fmt17(c.ramp_fraction));
}

void validate(const PulseTrainConfig& c) {
    require(std::isfinite(c.E0) && c.E0 > 0.0, "E0", "must be positive, got " + fmt17(c.E0));
    require(std::isfinite(c.omega_c) && c.omega_c > 0.0, "omega_c",
            "must be positive, got " + fmt17(c.omega_c));
    require(std::isfinite(c.tau) && c.tau > 0.0, "tau", "must be positive, got " + fmt17(c.tau));
    require(std::isfinite(c.T_m) && c.T_m > 0.0, "T_m", "must be positive, got " + fmt17(c.T_m));
    require(c.N >= 1, "N", "pulse count must be at least 1, got " + std::to_string(c.N));
}

void validate(const FieldConfig& config) {
    std::visit(overloaded{
                   [](const ModulatedFieldConfig& c) { validate(c); },
                   [](const PulseTrainConfig& c) { validate(c); },
                   [](const Superposition& s) {
                       require(std::isfinite(s.span) && s.span >= 0.0, "span",
                               "must be non-negative, got " + fmt17(s.span));
                       require(!s.members.empty() || s.span > 0.0, "span",
                               "an empty superposition needs a positive span");
                       for (const auto& m : s.members) validate(m);
                   },
               },
               config.shape);
}

double total_span(const FieldConfig& config) {
    return std::visit(overloaded{
                          [](const ModulatedFieldConfig& c) { return c.span(); },
                          [](const PulseTrainConfig& c) { return c.span(); },
                          [](const Superposition& s) {
                              if (s.span > 0.0) return s.span;
                              double span = 0.0;
                              for (const auto& m : s.members) span = std::max(span, total_span(m));
                              return span;
                          },
                      },
                      config.shape);
}

double field_value(const FieldConfig& config, double t) {
    validate(config);
    const double span = total_span(config);
    if (!(t >= 0.0 && t <= span))
        throw DataError("time " + fmt17(t) + " outside the field span [0, " + fmt17(span) + "]");
    return evaluate(config, t);
}

double fastest_frequency(const FieldConfig& config) {
    return std::visit(overloaded{
                          [](const ModulatedFieldConfig& c) {
                              return c.M > 0.0 ? c.omega_c + c.omega_m : c.omega_c;
                          },
                          [](const PulseTrainConfig& c) { return c.omega_c + 4.0 / c.tau; },
                          [](const Superposition& s) {
                              double w = 0.0;
                              for (const auto& m : s.members) w = std::max(w, fastest_frequency(m));
                              return w > 0.0 ? w : 1.0;
                          },
                      },
                      config.shape);
}

TimeWindow averaging_window(const FieldConfig& config) {
    return std::visit(
        overloaded{
            [](const ModulatedFieldConfig& c) { return TimeWindow{c.t_switch, c.t_switch + c.t_d}; },
            [](const PulseTrainConfig& c) {
                const double centre = c.pulse_center((c.N + 1) / 2);
                const double half_width = c.tau * std::sqrt(std::log(2.0));
                return TimeWindow{centre - half_width, centre + half_width};
            },
            [&config](const Superposition& s) {
                TimeWindow w{0.0, total_span(config)};
                for (const auto& m : s.members) {
                    const auto mw = averaging_window(m);
                    w.begin = std::max(w.begin, mw.begin);
                    w.end = std::min(w.end, mw.end);
                }
                return w;
            },
        },
        config.shape);
}

std::array<FourierComponent, 3> fourier_components(const ModulatedFieldConfig& c) {
    validate(c);
    const double side = -0.25 * c.M * c.E0;
    return {FourierComponent{c.omega_c, (1.0 - 0.5 * c.M) * c.E0},
            FourierComponent{c.omega_c + c.omega_m, side},
            FourierComponent{c.omega_c - c.omega_m, side}};
}

double power_suppression_factor(double M) {
    if (!(M >= 0.0 && M <= 1.0))
        throw ConfigError("M", "modulation degree must lie in [0, 1], got " + fmt17(M));
    const double d = 4.0 / 3.0 - M;
    return 0.375 * d * d + 1.0 / 3.0;
}

std::string describe(const FieldConfig& config) {
    return std::visit(overloaded{
                          [](const ModulatedFieldConfig& c) {
                              return "modulated{E0=" + fmt17(c.E0) + ",omega_c=" + fmt17(c.omega_c) +
                                     ",omega_m=" + fmt17(c.omega_m) + ",M=" + fmt17(c.M) +
                                     ",t_switch=" + fmt17(c.t_switch) + ",t_d=" + fmt17(c.t_d) +
                                     ",ramp_fraction=" + fmt17(c.ramp_fraction) + "}";
                          },
                          [](const PulseTrainConfig& c) {
                              return "pulse_train{E0=" + fmt17(c.E0) + ",omega_c=" + fmt17(c.omega_c) +
                                     ",tau=" + fmt17(c.tau) + ",T_m=" + fmt17(c.T_m) +
                                     ",N=" + std::to_string(c.N) + "}";
                          },
                          [](const Superposition& s) {
                              std::string out = "superposition{span=" + fmt17(s.span);
                              for (const auto& m : s.members) out += ";" + describe(m);
                              return out + "}";
                          },
                      },
                      config.shape);
}

FieldConfig scale_durations(FieldConfig config, double s) {
    std::visit(overloaded{
                   [s](ModulatedFieldConfig& c) { c.t_d *= s; },
                   [](PulseTrainConfig&) {},
                   [s](Superposition& sum) {
                       for (auto& m : sum.members) m = scale_durations(std::move(m), s);
                   },
               },
               config.shape);
    return config;
}

std::vector<double> derivative_breakpoints(const FieldConfig& config) {
    std::vector<double> all;
    collect_breakpoints(config, all);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    const double span = total_span(config);
    std::vector<double> out;
    for (double t : all)
        if (t > 0.0 && t < span) out.push_back(t);
    return out;
}

Field::Field(FieldConfig config) : config_(std::move(config)) {
    validate(config_);
    span_ = total_span(config_);
    const double omega = fastest_frequency(config_);
    const double target = kTwoPi / (omega * kSamplesPerPeriod);
    const auto intervals = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(span_ / target)));
    if (intervals >= kMaxTableSize)
        throw NumericalError("vector-potential table would need " + std::to_string(intervals) +
                             " intervals; span too long for the carrier frequency");
    step_ = span_ / static_cast<double>(intervals);
    inv_step_ = 1.0 / step_;

    E_.resize(intervals + 1);
    double max_abs_E = 0.0;
    for (std::size_t k = 0; k <= intervals; ++k) {
        E_[k] = evaluate(config_, static_cast<double>(k) * step_);
        max_abs_E = std::max(max_abs_E, std::abs(E_[k]));
    }

    // Each increment is a 6-point Gauss-Legendre integral, cross-checked
    // against the 4-point rule.
    const double tol = 1e-12 * step_ * max_abs_E + std::numeric_limits<double>::min();
    auto E = [this](double t) { return evaluate(config_, t); };
    const auto kinks = derivative_breakpoints(config_);
    auto next_kink = kinks.begin();
    A_.resize(intervals + 1);
    A_[0] = 0.0;
    quadrature::CompensatedSum cumulative;
    for (std::size_t k = 0; k < intervals; ++k) {
        const double a = static_cast<double>(k) * step_;
        const double b = (k + 1 == intervals) ? span_ : a + step_;
        double fine = 0.0;
        double coarse = 0.0;
        double lo = a;
        while (next_kink != kinks.end() && *next_kink <= a) ++next_kink;
        for (auto kink = next_kink; kink != kinks.end() && *kink < b; ++kink) {
            fine += quadrature::gauss_legendre_6.integrate(E, lo, *kink);
            coarse += quadrature::gauss_legendre_4.integrate(E, lo, *kink);
            lo = *kink;
        }
        fine += quadrature::gauss_legendre_6.integrate(E, lo, b);
        coarse += quadrature::gauss_legendre_4.integrate(E, lo, b);
        if (std::abs(fine - coarse) > tol) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "vector-potential quadrature did not converge on [%.9g, %.9g]: "
                          "|I6 - I4| = %.3e > %.3e",
                          a, b, std::abs(fine - coarse), tol);
            throw NumericalError(buf);
        }
        cumulative.add(-fine);
        A_[k + 1] = cumulative.value();
        max_abs_A_ = std::max(max_abs_A_, std::abs(A_[k + 1]));
    }
}

double Field::value(double t) const { return evaluate(config_, t); }

double Field::potential(double t) const {
    const std::size_t last = A_.size() - 2;
    double x = t * inv_step_;
    if (!(x > 0.0)) x = 0.0;
    auto k = static_cast<std::size_t>(x);
    if (k > last) k = last;
    double u = x - static_cast<double>(k);
    if (u > 1.0) u = 1.0;
    const double um = 1.0 - u;
    // Cubic Hermite with the exact slopes dA/dt = -E.
    const double h00 = (1.0 + 2.0 * u) * um * um;
    const double h10 = u * um * um;
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = -u * u * um;
    return h00 * A_[k] + h01 * A_[k + 1] - step_ * (h10 * E_[k] + h11 * E_[k + 1]);
}

double vector_potential(const FieldConfig& config, double t) {
    Field field(config);
    if (!(t >= 0.0 && t <= field.span()))
        throw DataError("time " + fmt17(t) + " outside the field span [0, " + fmt17(field.span()) + "]");
    return field.potential(t);
}

double mean_square_potential(const Field& field) {
    const TimeWindow window = averaging_window(field.config());
    if (!(window.length() > 0.0))
        throw ConfigError("window", "averaging window is empty; no flat-top region to average over");

    const double h = field.table_step();
    auto integrate = [&](auto&& fn) {
        quadrature::CompensatedSum sum;
        const auto first = static_cast<std::size_t>(std::floor(window.begin / h));
        const auto last = static_cast<std::size_t>(std::ceil(window.end / h));
        for (std::size_t k = first; k < last; ++k) {
            const double a = std::max(window.begin, static_cast<double>(k) * h);
            const double b = std::min(window.end, static_cast<double>(k + 1) * h);
            if (b > a) sum.add(quadrature::gauss_legendre_4.integrate(fn, a, b));
        }
        return sum.value();
    };

    const double L = window.length();
    const double mean = integrate([&](double t) { return field.potential(t); }) / L;
    return integrate([&](double t) {
               const double d = field.potential(t) - mean;
               return d * d;
           }) /
           L;
}

double effective_mass(const Field& field) {
    return units::electron_mass *
           std::sqrt(1.0 + mean_square_potential(field) / (units::electron_mass * units::electron_mass));
}

double effective_mass(const FieldConfig& config) { return effective_mass(Field(config)); }

}  // namespace qvlasov
