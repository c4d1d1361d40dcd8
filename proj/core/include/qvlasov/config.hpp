#pragma once

#include "qvlasov/fields.hpp"
#include "qvlasov/observables.hpp"
#include "qvlasov/scans.hpp"
#include "qvlasov/solver.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace qvlasov {

struct ResonanceSettings {
    unsigned max_photons = 4;
    /// Overrides the computed effective mass when set.
    std::optional<double> m_star;
};

/// Everything an experiment file can describe.
///
/// Quantities are in natural units: fields in E_cr, frequencies and momenta
/// in m, times in tau0. Any number may carry a `pi` suffix (`100pi`,
/// `1000 * pi`).
///
///     [field]
///     type = modulated        # modulated | pulse_train | superposition | zero
///     E0 = 0.1
///     omega_c = 0.65
///     omega_m = 0.056
///     M = 1
///     t_switch = 100pi
///     t_d = 1000pi
///
///     [scan]
///     kind = modulation_frequency
///     start = 0.02
///     stop = 0.1
///     step = 0.002
///
/// Superposition members live in [field.1], [field.2], ... Unknown sections
/// and keys, duplicates, missing keys and invalid values raise ConfigError
/// with the key, the file and the line.
struct ConfigFile {
    std::string source;
    FieldConfig field;
    std::optional<MomentumGrid> grid;
    SolverSettings settings;
    /// Present when the file has a [scan] section. Its base, grid and settings
    /// are the file's; the grid defaults to the density grid.
    std::optional<ScanSpec> scan;
    ResonanceSettings resonances;
};

ConfigFile parse_config(const std::filesystem::path& path);
ConfigFile parse_config_text(std::string_view text, std::string source = "<config>");

/// Parses `1.5`, `100pi`, `1000 pi`, `2*pi`, `pi`. Returns nullopt otherwise.
std::optional<double> parse_quantity(std::string_view text);

}  // namespace qvlasov
