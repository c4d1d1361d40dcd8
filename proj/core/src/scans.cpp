#include "qvlasov/scans.hpp"

#include "parallel.hpp"
#include "qvlasov/errors.hpp"
#include "qvlasov/fingerprint.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace qvlasov {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Returns true if the scanned parameter was set somewhere in `config`.
bool apply(FieldConfig& config, ScanKind kind, double x) {
    return std::visit(
        overloaded{
            [&](ModulatedFieldConfig& c) {
                switch (kind) {
                    case ScanKind::modulation_frequency: c.omega_m = x; return true;
                    case ScanKind::modulation_degree: c.M = x; return true;
                    case ScanKind::carrier_frequency: c.omega_c = x; return true;
                    case ScanKind::pulse_count: return false;
                }
                return false;
            },
            [&](PulseTrainConfig& c) {
                switch (kind) {
                    case ScanKind::modulation_frequency: c.T_m = 2.0 * std::numbers::pi / x; return true;
                    case ScanKind::carrier_frequency: c.omega_c = x; return true;
                    case ScanKind::pulse_count: c.N = static_cast<int>(x); return true;
                    case ScanKind::modulation_degree: return false;
                }
                return false;
            },
            [&](Superposition& s) {
                bool touched = false;
                for (auto& m : s.members) touched = apply(m, kind, x) || touched;
                return touched;
            },
        },
        config.shape);
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

csv::Table checkpoint_header(const ScanSpec& spec, std::uint64_t fp) {
    csv::Table t;
    t.metadata = {{"fingerprint", to_hex(fp)},
                  {"kind", std::string(to_string(spec.kind))},
                  {"version", std::string(version())}};
    t.columns = {{"index", ""},
                 {std::string(parameter_name(spec.kind)), std::string(parameter_unit(spec.kind))},
                 {"density", "m"},
                 {"wall_time_s", "s"},
                 {"status", ""}};
    return t;
}

std::vector<csv::Cell> checkpoint_row(std::size_t index, const ScanPoint& p) {
    return {static_cast<double>(index), p.parameter, p.density, p.wall_time_s,
            std::string(to_string(p.status))};
}

// Fills ok points from an existing checkpoint and rewrites the file with
// only those rows, dropping failed rows and any torn final line.
void resume_from(const std::filesystem::path& path, const ScanSpec& spec, std::uint64_t fp,
                 ScanResult& result) {
    auto fresh = checkpoint_header(spec, fp);
    std::error_code ec;
    if (std::filesystem::exists(path, ec) && std::filesystem::file_size(path, ec) > 0) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError(path, "cannot open checkpoint for reading");
        std::stringstream buffer;
        buffer << in.rdbuf();
        std::string text = buffer.str();
        text.erase(text.find_last_of('\n') == std::string::npos ? 0 : text.find_last_of('\n') + 1);

        const auto old = csv::parse(text);
        const auto* stored = old.meta("fingerprint");
        if (!stored)
            throw CheckpointMismatch(path.string() + " has no fingerprint line; refusing to resume");
        if (*stored != to_hex(fp))
            throw CheckpointMismatch(path.string() + " was written for scan " + *stored +
                                     ", not " + to_hex(fp) + "; refusing to resume");
        old.column("index");
        const auto i_param = old.column(parameter_name(spec.kind));
        const auto i_density = old.column("density");
        const auto i_time = old.column("wall_time_s");
        const auto i_status = old.column("status");
        for (std::size_t r = 0; r < old.rows.size(); ++r) {
            const auto& row = old.rows[r];
            const auto* status = std::get_if<std::string>(&row[i_status]);
            if (!status || parse_point_status(*status) != PointStatus::ok) continue;
            const double index = old.number(r, "index");
            if (!(index >= 0.0) || index != std::floor(index) ||
                index >= static_cast<double>(result.points.size()))
                throw CheckpointMismatch(path.string() + ": row index out of range");
            auto& p = result.points[static_cast<std::size_t>(index)];
            if (std::get<double>(row[i_param]) != p.parameter)
                throw CheckpointMismatch(path.string() + ": parameter of row " +
                                         std::to_string(static_cast<std::size_t>(index)) +
                                         " does not match the scan axis");
            p.density = std::get<double>(row[i_density]);
            p.wall_time_s = std::get<double>(row[i_time]);
            p.status = PointStatus::ok;
        }
    }
    for (std::size_t i = 0; i < result.points.size(); ++i)
        if (result.points[i].status == PointStatus::ok) fresh.rows.push_back(checkpoint_row(i, result.points[i]));
    csv::write_csv(fresh, path);
}

struct PointJob {
    std::size_t index = 0;
    std::once_flag built;
    std::unique_ptr<Field> field;
    std::vector<double> values;
    std::atomic<std::size_t> remaining{0};
    std::atomic<bool> failed{false};
    std::chrono::steady_clock::time_point start;
    std::mutex error_mutex;
    std::size_t failed_node = std::numeric_limits<std::size_t>::max();
    std::string message;

    void fail(std::size_t node, std::string why) {
        std::lock_guard lock(error_mutex);
        failed.store(true);
        if (node < failed_node) {
            failed_node = node;
            message = std::move(why);
        }
    }
};

}  // namespace

std::string_view version() noexcept { return QVLASOV_VERSION; }

std::string_view to_string(ScanKind kind) noexcept {
    switch (kind) {
        case ScanKind::modulation_frequency: return "modulation_frequency";
        case ScanKind::modulation_degree: return "modulation_degree";
        case ScanKind::carrier_frequency: return "carrier_frequency";
        case ScanKind::pulse_count: return "pulse_count";
    }
    return "unknown";
}

ScanKind parse_scan_kind(std::string_view name) {
    for (auto k : {ScanKind::modulation_frequency, ScanKind::modulation_degree,
                   ScanKind::carrier_frequency, ScanKind::pulse_count})
        if (to_string(k) == name) return k;
    throw ConfigError("kind", "unknown scan kind '" + std::string(name) +
                                  "' (modulation_frequency, modulation_degree, "
                                  "carrier_frequency, pulse_count)");
}

std::string_view parameter_name(ScanKind kind) noexcept {
    switch (kind) {
        case ScanKind::modulation_frequency: return "omega_m";
        case ScanKind::modulation_degree: return "M";
        case ScanKind::carrier_frequency: return "omega_c";
        case ScanKind::pulse_count: return "N";
    }
    return "x";
}

std::string_view parameter_unit(ScanKind kind) noexcept {
    return kind == ScanKind::modulation_frequency || kind == ScanKind::carrier_frequency ? "m" : "";
}

std::vector<double> ScanSpec::parameters() const {
    std::vector<double> out;
    if (!values.empty()) {
        out = values;
    } else if (range) {
        const auto& r = *range;
        if (!std::isfinite(r.start) || !std::isfinite(r.stop))
            throw ConfigError("start", "range bounds must be finite");
        if (!(r.step > 0.0) || !std::isfinite(r.step)) throw ConfigError("step", "must be positive");
        if (r.stop < r.start) throw ConfigError("stop", "must not be below start");
        const auto n = static_cast<std::size_t>(std::floor((r.stop - r.start) / r.step + 1e-9)) + 1;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(r.start + static_cast<double>(i) * r.step);
    }
    if (out.empty()) throw ConfigError("values", "scan has no parameter values");
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!std::isfinite(out[i])) throw ConfigError("values", "parameter values must be finite");
        if (i > 0 && !(out[i] > out[i - 1]))
            throw ConfigError("values", "parameter values must be strictly increasing");
        if (kind == ScanKind::pulse_count && (out[i] < 1.0 || out[i] != std::floor(out[i]) ||
                                              out[i] > std::numeric_limits<int>::max()))
            throw ConfigError("values", "pulse counts must be integers >= 1");
    }
    return out;
}

void validate(const ScanSpec& spec) {
    if (!(spec.duration_scale > 0.0 && spec.duration_scale <= 1.0))
        throw ConfigError("duration_scale", "must lie in (0, 1]");
    validate(spec.grid);
    validate(spec.settings);
    for (double x : spec.parameters()) derive_config(spec, x);
}

std::string describe(const ScanSpec& spec) {
    std::string out = "scan{kind=" + std::string(to_string(spec.kind));
    out += ",base=" + describe(spec.base);
    out += ",values=[";
    const auto params = spec.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) out += (i ? "," : "") + format_double(params[i]);
    out += "]," + describe(spec.grid) + "," + describe(spec.settings);
    out += ",duration_scale=" + format_double(spec.duration_scale) + "}";
    return out;
}

std::uint64_t fingerprint(const ScanSpec& spec) { return fnv1a64(describe(spec)); }

FieldConfig derive_config(const ScanSpec& spec, double parameter) {
    FieldConfig config = scale_durations(spec.base, spec.duration_scale);
    if (!apply(config, spec.kind, parameter))
        throw ConfigError("kind", "the base field has no " + std::string(parameter_name(spec.kind)) +
                                      " to scan");
    validate(config);
    return config;
}

std::string_view to_string(PointStatus status) noexcept {
    switch (status) {
        case PointStatus::ok: return "ok";
        case PointStatus::failed: return "failed";
        case PointStatus::undefined: return "undefined";
        case PointStatus::pending: return "pending";
    }
    return "unknown";
}

PointStatus parse_point_status(std::string_view name) {
    for (auto s : {PointStatus::ok, PointStatus::failed, PointStatus::undefined, PointStatus::pending})
        if (to_string(s) == name) return s;
    throw DataError("unknown point status '" + std::string(name) + "'");
}

std::size_t ScanResult::count(PointStatus status) const noexcept {
    std::size_t n = 0;
    for (const auto& p : points) n += p.status == status;
    return n;
}

ScanResult run_scan(const ScanSpec& spec, const ScanOptions& options) {
    validate(spec);
    const auto params = spec.parameters();
    const std::uint64_t fp = fingerprint(spec);

    ScanResult result;
    result.kind = spec.kind;
    result.fingerprint = fp;
    result.version = std::string(version());
    for (double x : params) result.points.push_back({x, kNaN, 0.0, PointStatus::pending, {}});

    std::ofstream checkpoint;
    if (options.checkpoint) {
        resume_from(*options.checkpoint, spec, fp, result);
        checkpoint.open(*options.checkpoint, std::ios::binary | std::ios::app);
        if (!checkpoint) throw IoError(*options.checkpoint, "cannot open checkpoint for appending");
    }

    std::vector<std::unique_ptr<PointJob>> jobs;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (result.points[i].status == PointStatus::ok) continue;
        if (options.stop_after && jobs.size() >= *options.stop_after) break;
        auto job = std::make_unique<PointJob>();
        job->index = i;
        job->values.assign(spec.grid.n_points, 0.0);
        job->remaining = spec.grid.n_points;
        jobs.push_back(std::move(job));
    }

    const std::size_t nodes = spec.grid.n_points;
    std::mutex writer;

    auto finish = [&](PointJob& job) {
        job.field.reset();
        ScanPoint point{params[job.index], kNaN, 0.0, PointStatus::failed, {}};
        if (job.failed) {
            point.message = job.message;
        } else {
            try {
                point.density = number_density(Spectrum{spec.grid, std::move(job.values), 0});
                point.status = PointStatus::ok;
            } catch (const Error& e) {
                point.message = e.what();
            }
        }
        point.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - job.start).count();

        std::lock_guard lock(writer);
        if (checkpoint.is_open()) {
            const std::string line = csv::format_row(checkpoint_row(job.index, point));
            checkpoint.write(line.data(), static_cast<std::streamsize>(line.size()));
            checkpoint.flush();
        }
        result.points[job.index] = std::move(point);
    };

    detail::parallel_for(jobs.size() * nodes, options.workers, [&](std::size_t task) {
        auto& job = *jobs[task / nodes];
        const std::size_t node = task % nodes;
        std::call_once(job.built, [&] {
            job.start = std::chrono::steady_clock::now();
            try {
                job.field = std::make_unique<Field>(derive_config(spec, params[job.index]));
            } catch (const Error& e) {
                job.fail(0, e.what());
            }
        });
        if (!job.failed) {
            try {
                job.values[node] = solve_mode(ModeKinematics{spec.grid.node(node)}, *job.field, spec.settings);
            } catch (const Error& e) {
                job.fail(node, "node " + std::to_string(node) + ": " + e.what());
            }
        }
        if (job.remaining.fetch_sub(1) == 1) finish(job);
    });

    if (checkpoint.is_open() && !checkpoint)
        throw IoError(*options.checkpoint, "checkpoint write failed");
    return result;
}

ScanResult enhancement_curve(const ScanResult& modulated, const ScanResult& baseline) {
    if (modulated.kind != baseline.kind)
        throw DataError("enhancement curve needs two scans of the same kind");
    if (modulated.points.size() != baseline.points.size())
        throw DataError("enhancement curve axes differ in length (" +
                        std::to_string(modulated.points.size()) + " vs " +
                        std::to_string(baseline.points.size()) + ")");
    ScanResult out;
    out.kind = modulated.kind;
    out.version = std::string(version());
    out.fingerprint = fnv1a64(to_hex(modulated.fingerprint) + "/" + to_hex(baseline.fingerprint));
    for (std::size_t i = 0; i < modulated.points.size(); ++i) {
        const auto& a = modulated.points[i];
        const auto& b = baseline.points[i];
        if (a.parameter != b.parameter)
            throw DataError("enhancement curve axes differ at point " + std::to_string(i));
        ScanPoint p{a.parameter, kNaN, a.wall_time_s + b.wall_time_s, PointStatus::failed, {}};
        if (a.status != PointStatus::ok || b.status != PointStatus::ok) {
            p.message = "input point not ok";
        } else if (b.density == 0.0) {
            p.status = PointStatus::undefined;
            p.message = "zero baseline";
        } else {
            p.density = a.density / b.density;
            p.status = PointStatus::ok;
        }
        out.points.push_back(std::move(p));
    }
    return out;
}

csv::Table to_table(const ScanResult& result) {
    csv::Table t;
    t.metadata = {{"fingerprint", to_hex(result.fingerprint)},
                  {"kind", std::string(to_string(result.kind))},
                  {"version", result.version}};
    t.columns = {{std::string(parameter_name(result.kind)), std::string(parameter_unit(result.kind))},
                 {"density", "m"},
                 {"wall_time_s", "s"},
                 {"status", ""}};
    for (const auto& p : result.points)
        t.rows.push_back({p.parameter, p.density, p.wall_time_s, std::string(to_string(p.status))});
    return t;
}

ScanResult scan_result_from_table(const csv::Table& table) {
    ScanResult r;
    const auto* kind = table.meta("kind");
    if (!kind) throw DataError("scan table has no kind line");
    r.kind = parse_scan_kind(*kind);
    if (const auto* fp = table.meta("fingerprint"); !fp || !from_hex(*fp, r.fingerprint))
        throw DataError("scan table has no valid fingerprint line");
    if (const auto* v = table.meta("version")) r.version = *v;
    const auto name = parameter_name(r.kind);
    const auto i_status = table.column("status");
    for (std::size_t row = 0; row < table.rows.size(); ++row) {
        const auto* status = std::get_if<std::string>(&table.rows[row][i_status]);
        if (!status) throw DataError("status cell of row " + std::to_string(row) + " is not text");
        r.points.push_back({table.number(row, name), table.number(row, "density"),
                            table.number(row, "wall_time_s"), parse_point_status(*status), {}});
    }
    return r;
}

}  // namespace qvlasov
