#pragma once

#include "qvlasov/fields.hpp"
#include "qvlasov/solver.hpp"

#include <array>
#include <string>
#include <vector>

namespace qvlasov {

/// Largest accepted relative difference between the two solvers.
inline constexpr double oracle_tolerance = 1e-5;

/// A weak, short field on which the quadratic-cost direct solver is cheap.
struct OracleCase {
    std::string name;
    FieldConfig field;
    std::array<double, 3> momenta{};
};

/// Five fields with E0 <= 0.01 and span <= 200: carrier, full modulation,
/// two pulse trains and a superposition.
std::vector<OracleCase> oracle_cases();

struct OracleComparison {
    std::string name;
    double P3 = 0.0;
    double ode = 0.0;
    double direct = 0.0;
    /// |ode - direct| / |direct|.
    double relative_difference = 0.0;
};

struct OracleSettings {
    SolverSettings ode{1e-11, 1e-18};
    /// Direct grid step as a fraction of max_direct_grid_step.
    double step_fraction = 0.25;
};

/// solve_mode against solve_mode_direct on every case and momentum.
std::vector<OracleComparison> run_oracle_check(const OracleSettings& settings = {});

}  // namespace qvlasov
