#include "qvlasov/config.hpp"

#include "qvlasov/errors.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

namespace qvlasov {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

struct Entry {
    std::string value;
    int line = 0;
};

struct Section {
    std::string name;
    int line = 0;
    std::map<std::string, Entry, std::less<>> entries;
};

class Reader {
public:
    Reader(std::string source, std::string_view text) : source_(std::move(source)) { parse(text); }

    [[noreturn]] void fail(const std::string& key, int line, const std::string& what) const {
        throw ConfigError(key, what + " (" + source_ + ":" + std::to_string(line) + ")");
    }

    const Section* section(std::string_view name) const {
        for (const auto& s : sections_)
            if (s.name == name) return &s;
        return nullptr;
    }

    const std::deque<Section>& sections() const { return sections_; }

    void allow_only(const Section& s, std::initializer_list<std::string_view> keys) const {
        for (const auto& [key, entry] : s.entries)
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                fail(key, entry.line, "unknown key in [" + s.name + "]");
    }

    const Entry* find(const Section& s, std::string_view key) const {
        const auto it = s.entries.find(key);
        return it == s.entries.end() ? nullptr : &it->second;
    }

    const Entry& require(const Section& s, const std::string& key) const {
        if (const auto* e = find(s, key)) return *e;
        fail(key, s.line, "missing key in [" + s.name + "]");
    }

    double number(const Section&, const std::string& key, const Entry& e) const {
        const auto x = parse_quantity(e.value);
        if (!x) fail(key, e.line, "'" + e.value + "' is not a number");
        return *x;
    }

    double number(const Section& s, const std::string& key) const {
        return number(s, key, require(s, key));
    }

    std::optional<double> optional_number(const Section& s, const std::string& key) const {
        if (const auto* e = find(s, key)) return number(s, key, *e);
        return std::nullopt;
    }

    long long integer(const Section& s, const std::string& key, const Entry& e, long long min) const {
        const double x = number(s, key, e);
        if (x != std::floor(x) || x < static_cast<double>(min) || x > 9.0e15)
            fail(key, e.line, "must be an integer >= " + std::to_string(min) + ", got '" + e.value + "'");
        return static_cast<long long>(x);
    }

    long long integer(const Section& s, const std::string& key, long long min) const {
        return integer(s, key, require(s, key), min);
    }

    std::vector<double> list(const std::string& key, const Entry& e) const {
        std::vector<double> out;
        std::string_view rest = e.value;
        while (true) {
            const auto comma = rest.find(',');
            const auto item = trim(rest.substr(0, comma));
            const auto x = parse_quantity(item);
            if (!x) fail(key, e.line, "'" + std::string(item) + "' is not a number");
            out.push_back(*x);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return out;
    }

    // Re-raises a validation error with the line that set the offending key,
    // looked up in `sections` in order, else at the first section header.
    [[noreturn]] void relocate(const ConfigError& e, std::initializer_list<const Section*> where) const {
        std::string detail = e.what();
        const std::string prefix = e.key() + ": ";
        if (detail.rfind(prefix, 0) == 0) detail.erase(0, prefix.size());
        for (const auto* s : where) {
            if (!s) continue;
            if (const auto* entry = find(*s, e.key())) fail(e.key(), entry->line, detail);
        }
        for (const auto* s : where)
            if (s) fail(e.key(), s->line, detail);
        fail(e.key(), 0, detail);
    }

private:
    void parse(std::string_view text) {
        std::istringstream in{std::string(text)};
        std::string raw;
        int line_no = 0;
        Section* current = nullptr;
        while (std::getline(in, raw)) {
            ++line_no;
            std::string_view line = raw;
            if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail("", line_no, "malformed section header");
                const std::string name(trim(line.substr(1, line.size() - 2)));
                if (section(name)) fail(name, line_no, "duplicate section [" + name + "]");
                sections_.push_back({name, line_no, {}});
                current = &sections_.back();
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) fail("", line_no, "expected 'key = value'");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty()) fail("", line_no, "empty key");
            if (!current) fail(key, line_no, "key outside of any section");
            if (value.empty()) fail(key, line_no, "empty value");
            if (current->entries.count(key))
                fail(key, line_no, "duplicate key in [" + current->name + "]");
            current->entries.emplace(key, Entry{value, line_no});
        }
    }

    std::string source_;
    std::deque<Section> sections_;  // stable addresses for `current`
};

bool is_member_section(std::string_view name) {
    if (name.rfind("field.", 0) != 0 || name.size() == 6) return false;
    return std::all_of(name.begin() + 6, name.end(), [](char c) { return c >= '0' && c <= '9'; });
}

FieldConfig read_field(const Reader& r, const Section& s, bool member) {
    const auto& type = r.require(s, "type").value;
    FieldConfig config;
    if (type == "modulated") {
        r.allow_only(s, {"type", "E0", "omega_c", "omega_m", "M", "t_switch", "t_d", "ramp_fraction"});
        ModulatedFieldConfig c;
        c.E0 = r.number(s, "E0");
        c.omega_c = r.number(s, "omega_c");
        c.omega_m = r.number(s, "omega_m");
        c.M = r.number(s, "M");
        c.t_switch = r.number(s, "t_switch");
        c.t_d = r.number(s, "t_d");
        if (auto x = r.optional_number(s, "ramp_fraction")) c.ramp_fraction = *x;
        config.shape = c;
    } else if (type == "pulse_train") {
        r.allow_only(s, {"type", "E0", "omega_c", "tau", "N", "T_m", "omega_m"});
        PulseTrainConfig c;
        c.E0 = r.number(s, "E0");
        c.omega_c = r.number(s, "omega_c");
        c.tau = r.number(s, "tau");
        c.N = static_cast<int>(r.integer(s, "N", 1));
        const auto* T_m = r.find(s, "T_m");
        const auto* omega_m = r.find(s, "omega_m");
        if (T_m && omega_m) r.fail("T_m", T_m->line, "give exactly one of T_m and omega_m, not both");
        if (!T_m && !omega_m) r.fail("T_m", s.line, "missing key in [" + s.name + "] (or omega_m)");
        if (T_m) {
            c.T_m = r.number(s, "T_m", *T_m);
        } else {
            const double w = r.number(s, "omega_m", *omega_m);
            if (!(w > 0.0)) r.fail("omega_m", omega_m->line, "must be positive");
            c.T_m = 2.0 * std::numbers::pi / w;
        }
        config.shape = c;
    } else if (type == "superposition" && !member) {
        r.allow_only(s, {"type", "span"});
        Superposition sum;
        if (auto x = r.optional_number(s, "span")) sum.span = *x;
        std::vector<std::pair<long, const Section*>> members;
        for (const auto& m : r.sections())
            if (is_member_section(m.name)) members.emplace_back(std::stol(m.name.substr(6)), &m);
        std::sort(members.begin(), members.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (members.empty()) r.fail("type", s.line, "a superposition needs [field.1], [field.2], ...");
        for (const auto& [index, m] : members) {
            sum.members.push_back(read_field(r, *m, true));
        }
        config.shape = std::move(sum);
    } else if (type == "zero" && !member) {
        r.allow_only(s, {"type", "span"});
        const double span = r.number(s, "span");
        if (!(span > 0.0)) r.fail("span", r.require(s, "span").line, "must be positive");
        config = FieldConfig::zero(span);
    } else {
        r.fail("type", r.require(s, "type").line,
               "unknown field type '" + type + "'" +
                   (member ? " (modulated, pulse_train)" : " (modulated, pulse_train, superposition, zero)"));
    }

    if (!std::holds_alternative<Superposition>(config.shape)) {
        try {
            validate(config);
        } catch (const ConfigError& e) {
            r.relocate(e, {&s});
        }
    }
    return config;
}

}  // namespace

std::optional<double> parse_quantity(std::string_view text) {
    text = trim(text);
    double factor = 1.0;
    for (std::string_view suffix : {std::string_view("pi"), std::string_view("\xCF\x80")}) {
        if (text.size() >= suffix.size() && text.substr(text.size() - suffix.size()) == suffix) {
            text.remove_suffix(suffix.size());
            text = trim(text);
            if (!text.empty() && text.back() == '*') {
                text.remove_suffix(1);
                text = trim(text);
                if (text.empty()) return std::nullopt;
            }
            factor = std::numbers::pi;
            if (text.empty()) return factor;
            break;
        }
    }
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(x)) return std::nullopt;
    return x * factor;
}

ConfigFile parse_config_text(std::string_view text, std::string source) {
    const Reader r(source, text);
    ConfigFile out;
    out.source = source;

    for (const auto& s : r.sections()) {
        if (s.name == "field" || s.name == "grid" || s.name == "solver" || s.name == "scan" ||
            s.name == "resonances" || is_member_section(s.name))
            continue;
        r.fail(s.name, s.line, "unknown section [" + s.name + "]");
    }

    const auto* field = r.section("field");
    if (!field) r.fail("field", 1, "missing section [field]");
    out.field = read_field(r, *field, false);
    const auto* field_type = r.find(*field, "type");
    if (field_type->value != "superposition") {
        for (const auto& s : r.sections())
            if (is_member_section(s.name))
                r.fail(s.name, s.line, "member sections need type = superposition in [field]");
    }
    try {
        validate(out.field);
    } catch (const ConfigError& e) {
        r.relocate(e, {field});
    }

    if (const auto* s = r.section("grid")) {
        r.allow_only(*s, {"p_min", "p_max", "n_points"});
        MomentumGrid g;
        g.p_min = r.number(*s, "p_min");
        g.p_max = r.number(*s, "p_max");
        g.n_points = static_cast<std::size_t>(r.integer(*s, "n_points", 2));
        try {
            validate(g);
        } catch (const ConfigError& e) {
            r.relocate(e, {s});
        }
        out.grid = g;
    }

    if (const auto* s = r.section("solver")) {
        r.allow_only(*s, {"rel_tol", "abs_tol", "max_step", "max_steps"});
        if (auto x = r.optional_number(*s, "rel_tol")) out.settings.rel_tol = *x;
        if (auto x = r.optional_number(*s, "abs_tol")) out.settings.abs_tol = *x;
        if (auto x = r.optional_number(*s, "max_step")) out.settings.max_step = *x;
        if (const auto* e = r.find(*s, "max_steps"))
            out.settings.max_steps = static_cast<std::size_t>(r.integer(*s, "max_steps", *e, 1));
        try {
            validate(out.settings);
        } catch (const ConfigError& e) {
            r.relocate(e, {s});
        }
    }

    if (const auto* s = r.section("scan")) {
        r.allow_only(*s, {"kind", "values", "start", "stop", "step"});
        ScanSpec spec;
        const auto& kind = r.require(*s, "kind");
        try {
            spec.kind = parse_scan_kind(kind.value);
        } catch (const ConfigError& e) {
            r.relocate(e, {s});
        }
        const auto* values = r.find(*s, "values");
        const bool has_range = r.find(*s, "start") || r.find(*s, "stop") || r.find(*s, "step");
        if (values && has_range)
            r.fail("values", values->line, "give either values or start/stop/step, not both");
        if (values) {
            spec.values = r.list("values", *values);
        } else {
            spec.range = ScanRange{r.number(*s, "start"), r.number(*s, "stop"), r.number(*s, "step")};
        }
        spec.base = out.field;
        spec.grid = out.grid.value_or(MomentumGrid::density_default());
        spec.settings = out.settings;
        try {
            validate(spec);
        } catch (const ConfigError& e) {
            // Errors from derived fields name a field key but are caused by
            // the scanned values.
            const Entry* axis = values ? values : r.find(*s, "start");
            if (r.find(*s, e.key())) r.relocate(e, {s});
            r.fail(e.key(), axis ? axis->line : s->line,
                   std::string("scanned value gives an invalid field: ") + e.what());
        }
        out.scan = std::move(spec);
    }

    if (const auto* s = r.section("resonances")) {
        r.allow_only(*s, {"max_photons", "m_star"});
        if (const auto* e = r.find(*s, "max_photons"))
            out.resonances.max_photons = static_cast<unsigned>(r.integer(*s, "max_photons", *e, 1));
        if (const auto* e = r.find(*s, "m_star")) {
            const double m = r.number(*s, "m_star", *e);
            if (!(m >= 1.0)) r.fail("m_star", e->line, "must be at least the bare mass 1");
            out.resonances.m_star = m;
        }
    }
    return out;
}

ConfigFile parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open config file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path.string());
}

}  // namespace qvlasov
