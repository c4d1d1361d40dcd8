#include "qvlasov/oracle.hpp"

#include <cmath>

namespace qvlasov {

std::vector<OracleCase> oracle_cases() {
    std::vector<OracleCase> cases;

    ModulatedFieldConfig carrier{0.01, 0.65, 0.056, 0.0, 20.0, 150.0, 0.1};
    cases.push_back({"carrier", FieldConfig{carrier}, {-0.3, 0.0, 0.45}});

    ModulatedFieldConfig modulated{0.01, 0.9, 0.1, 1.0, 15.0, 120.0, 0.1};
    cases.push_back({"full_modulation", FieldConfig{modulated}, {-0.5, 0.1, 0.8}});

    PulseTrainConfig train{0.01, 1.1, 16.0, 40.0, 2};
    cases.push_back({"pulse_train", FieldConfig{train}, {-0.3, 0.2, 0.4}});

    PulseTrainConfig single{0.008, 1.2, 10.0, 60.0, 1};
    cases.push_back({"single_pulse", FieldConfig{single}, {-0.7, 0.5, 0.7}});

    Superposition sum;
    sum.members.push_back(FieldConfig{ModulatedFieldConfig{0.005, 0.7, 0.07, 0.5, 20.0, 130.0, 0.1}});
    sum.members.push_back(FieldConfig{PulseTrainConfig{0.005, 0.9, 12.0, 80.0, 1}});
    sum.span = 180.0;
    cases.push_back({"superposition", FieldConfig{std::move(sum)}, {-0.25, 0.15, 0.6}});

    return cases;
}

std::vector<OracleComparison> run_oracle_check(const OracleSettings& settings) {
    std::vector<OracleComparison> out;
    for (const auto& c : oracle_cases()) {
        const Field field(c.field);
        for (double P3 : c.momenta) {
            const ModeKinematics kin{P3};
            OracleComparison r;
            r.name = c.name;
            r.P3 = P3;
            r.ode = solve_mode(kin, field, settings.ode);
            r.direct = solve_mode_direct(kin, field, settings.step_fraction * max_direct_grid_step(kin, field));
            r.relative_difference = std::abs(r.ode - r.direct) / std::abs(r.direct);
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace qvlasov
