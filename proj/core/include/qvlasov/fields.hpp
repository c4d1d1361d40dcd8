#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace qvlasov {

// Natural units: m = 1 is the energy unit, times are measured in the Compton
// time 1/m, and field strengths in units of the critical field, with the
// charge absorbed so that a field of strength 0.1 means eE = 0.1 m^2.
namespace units {
inline constexpr double electron_mass = 1.0;
inline constexpr double critical_field = 1.0;
inline constexpr double compton_time = 1.0;
}  // namespace units

/// Exponential switch-on/switch-off profile around a flat top [t_on, t_off].
///
/// exp((t - t_on)/tau_s) before the flat top, 1 on it, exp(-(t - t_off)/tau_s)
/// after it. A zero time constant gives a hard box.
struct Envelope {
    double t_on = 0.0;
    double t_off = 0.0;
    double tau_s = 0.0;

    double operator()(double t) const noexcept;
};

/// Sinusoidally amplitude-modulated carrier under a switching envelope:
///   E(t) = env(t) (1 - M (1 + cos w_m t) / 2) E0 sin(w_c t).
struct ModulatedFieldConfig {
    double E0 = 0.1;       ///< E_cr
    double omega_c = 0.65; ///< m
    double omega_m = 0.056;///< m
    double M = 0.0;        ///< modulation degree in [0, 1]
    double t_switch = 100.0 * std::numbers::pi; ///< tau0
    double t_d = 1000.0 * std::numbers::pi;     ///< tau0, flat-top length
    /// Ramp time constant as a fraction of t_switch.
    double ramp_fraction = 0.1;

    double span() const noexcept { return 2.0 * t_switch + t_d; }
    Envelope envelope() const noexcept;
};

/// N Gaussian sub-cycle pulses centred at n T_m, n = 1..N:
///   E(t) = sum_n E0 exp(-(t - n T_m)^2 / tau^2) sin(w_c t).
struct PulseTrainConfig {
    double E0 = 0.1;
    double omega_c = 0.65;
    double tau = 16.0;
    double T_m = 2.0 * std::numbers::pi / 0.056;
    int N = 1;

    static PulseTrainConfig from_modulation_frequency(double E0, double omega_c, double tau,
                                                      double omega_m, int N);

    /// 2 pi / T_m.
    double modulation_frequency() const noexcept;
    double pulse_center(int n) const noexcept { return n * T_m; }
    double span() const noexcept { return (N + 1) * T_m + 5.0 * tau; }
};

struct FieldConfig;

/// Pointwise sum of member fields sharing one absolute time axis.
///
/// An explicit span overrides the members' spans; an empty superposition with
/// a span is the zero field.
struct Superposition {
    std::vector<FieldConfig> members;
    double span = 0.0;
};

struct FieldConfig {
    std::variant<ModulatedFieldConfig, PulseTrainConfig, Superposition> shape;

    static FieldConfig zero(double span);
};

struct TimeWindow {
    double begin = 0.0;
    double end = 0.0;

    double length() const noexcept { return end - begin; }
};

struct FourierComponent {
    double frequency = 0.0;
    double amplitude = 0.0;
};

/// Throws ConfigError naming the first offending key.
void validate(const FieldConfig& config);
void validate(const ModulatedFieldConfig& config);
void validate(const PulseTrainConfig& config);

double total_span(const FieldConfig& config);

/// E(t) in units of E_cr. Validates the config on every call; hot loops should
/// go through Field::value instead.
double field_value(const FieldConfig& config, double t);

/// Highest frequency with appreciable weight in the field (carrier plus
/// sidebands or pulse bandwidth), in units of m.
double fastest_frequency(const FieldConfig& config);

/// Window over which the effective mass is averaged: the flat top of a
/// modulated field, the FWHM of the central pulse of a train, the
/// intersection of member windows for a superposition.
TimeWindow averaging_window(const FieldConfig& config);

/// The same field with t_d of every modulated member multiplied by s. An
/// explicit superposition span is left alone.
FieldConfig scale_durations(FieldConfig config, double s);

/// Sorted times in (0, span) where dE/dt jumps (the envelope joints).
std::vector<double> derivative_breakpoints(const FieldConfig& config);

/// Carrier and the two sidebands w_c +- w_m of the unenveloped modulated field.
std::array<FourierComponent, 3> fourier_components(const ModulatedFieldConfig& config);

/// Period-averaged squared modulation envelope, (3/8)(4/3 - M)^2 + 1/3.
double power_suppression_factor(double M);

/// Canonical one-line description; identical configs give identical text.
std::string describe(const FieldConfig& config);

/// A validated field with a precomputed vector potential.
///
/// A(t) = -int_0^t E is tabulated on a uniform grid fine enough that cubic
/// Hermite interpolation with the exact slope -E reproduces the integral to
/// better than 1e-10 of max|A|. Construction is eager and single-threaded; a
/// built Field is immutable and safe to share between threads.
class Field {
public:
    explicit Field(FieldConfig config);

    double value(double t) const;
    double potential(double t) const;

    double span() const noexcept { return span_; }
    const FieldConfig& config() const noexcept { return config_; }

    double table_step() const noexcept { return step_; }
    std::size_t table_size() const noexcept { return A_.size(); }
    double max_abs_potential() const noexcept { return max_abs_A_; }

private:
    FieldConfig config_;
    double span_ = 0.0;
    double step_ = 0.0;
    double inv_step_ = 0.0;
    double max_abs_A_ = 0.0;
    std::vector<double> A_;
    std::vector<double> E_;
};

/// A(t) for a one-off query. Builds the full table; reuse a Field instead.
double vector_potential(const FieldConfig& config, double t);

/// Time variance of A over the averaging window, <A^2> - <A>^2.
///
/// The mean is removed because a constant offset in A only relabels the
/// canonical momentum.
double mean_square_potential(const Field& field);

/// m* = m sqrt(1 + e^2 <A^2> / m^2), in units of m.
double effective_mass(const Field& field);
double effective_mass(const FieldConfig& config);

}  // namespace qvlasov
