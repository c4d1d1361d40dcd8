#pragma once

#include "qvlasov/csv.hpp"
#include "qvlasov/fields.hpp"
#include "qvlasov/observables.hpp"
#include "qvlasov/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qvlasov {

/// Library version, also written into every output file.
std::string_view version() noexcept;

enum class ScanKind { modulation_frequency, modulation_degree, carrier_frequency, pulse_count };

std::string_view to_string(ScanKind kind) noexcept;
/// Accepts the names produced by to_string; throws ConfigError("kind").
ScanKind parse_scan_kind(std::string_view name);
/// Column name of the scanned parameter: omega_m, M, omega_c or N.
std::string_view parameter_name(ScanKind kind) noexcept;
/// "m" for frequencies, empty for the dimensionless M and N.
std::string_view parameter_unit(ScanKind kind) noexcept;

/// Inclusive arithmetic range; values are start + i step, never accumulated.
struct ScanRange {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
};

struct ScanSpec {
    ScanKind kind = ScanKind::modulation_frequency;
    FieldConfig base;
    /// Explicit parameter list; takes precedence over `range` when non-empty.
    std::vector<double> values;
    std::optional<ScanRange> range;
    MomentumGrid grid = MomentumGrid::density_default();
    SolverSettings settings;
    /// Multiplies t_d of every modulated field; 1 is the full duration.
    double duration_scale = 1.0;

    /// Resolved, strictly increasing parameter axis.
    std::vector<double> parameters() const;
};

void validate(const ScanSpec& spec);
std::string describe(const ScanSpec& spec);
std::uint64_t fingerprint(const ScanSpec& spec);

/// The field at one point of the scan: the base config with the scanned
/// parameter replaced in every member that carries it, and t_d scaled.
FieldConfig derive_config(const ScanSpec& spec, double parameter);

enum class PointStatus { ok, failed, undefined, pending };

std::string_view to_string(PointStatus status) noexcept;
PointStatus parse_point_status(std::string_view name);

struct ScanPoint {
    double parameter = 0.0;
    /// NaN unless status is ok.
    double density = 0.0;
    double wall_time_s = 0.0;
    PointStatus status = PointStatus::pending;
    /// Failure reason; not serialized.
    std::string message;
};

struct ScanResult {
    ScanKind kind = ScanKind::modulation_frequency;
    std::vector<ScanPoint> points;
    std::uint64_t fingerprint = 0;
    std::string version;

    std::size_t count(PointStatus status) const noexcept;
    bool complete() const noexcept { return count(PointStatus::ok) == points.size(); }
};

struct ScanOptions {
    /// Worker threads shared by points and momentum nodes; 0 means all cores.
    unsigned workers = 1;
    /// Appended to after every finished point; resumed from if it exists.
    std::optional<std::filesystem::path> checkpoint;
    /// Compute at most this many outstanding points, leaving the rest pending.
    std::optional<std::size_t> stop_after;
};

/// Computes number_density(momentum_spectrum(derive_config(spec, x))) for
/// every parameter x.
///
/// Momentum nodes of all outstanding points form one task list handed to the
/// worker pool in point-major order, so results do not depend on the worker
/// count. Failed points are recorded with status failed and the scan goes on.
/// A checkpoint whose fingerprint differs from the scan's raises
/// CheckpointMismatch; ok rows of a matching checkpoint are reused as is.
ScanResult run_scan(const ScanSpec& spec, const ScanOptions& options = {});

/// Pointwise modulated / baseline. A zero baseline gives an undefined point;
/// a failed or pending input gives a failed point. Throws DataError unless
/// the two axes are identical.
ScanResult enhancement_curve(const ScanResult& modulated, const ScanResult& baseline);

/// Columns: parameter, density, wall_time_s, status.
csv::Table to_table(const ScanResult& result);
ScanResult scan_result_from_table(const csv::Table& table);

}  // namespace qvlasov
