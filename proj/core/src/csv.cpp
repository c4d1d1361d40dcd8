#include "qvlasov/csv.hpp"

#include "qvlasov/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qvlasov::csv {

namespace {

void check_text(std::string_view s, const char* what) {
    if (s.find_first_of(",\r\n") != std::string_view::npos)
        throw DataError(std::string(what) + " '" + std::string(s) + "' contains a comma or newline");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

Cell parse_cell(std::string_view s) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (!s.empty() && ec == std::errc{} && ptr == s.data() + s.size()) return x;
    return std::string(s);
}

Column parse_column(std::string_view s) {
    s = trim(s);
    const auto open = s.rfind(" [");
    if (open != std::string_view::npos && s.back() == ']')
        return {std::string(s.substr(0, open)), std::string(s.substr(open + 2, s.size() - open - 3))};
    return {std::string(s), {}};
}

}  // namespace

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name) return i;
    throw DataError("no column named '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::string_view column_name) const {
    const auto& cell = rows.at(row).at(column(column_name));
    if (const auto* x = std::get_if<double>(&cell)) return *x;
    throw DataError("cell in column '" + std::string(column_name) + "' is not numeric");
}

const std::string* Table::meta(std::string_view key) const {
    for (const auto& [k, v] : metadata)
        if (k == key) return &v;
    return nullptr;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_row(const std::vector<Cell>& row) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) line += ',';
        if (const auto* x = std::get_if<double>(&row[i])) {
            line += format_number(*x);
        } else {
            const auto& s = std::get<std::string>(row[i]);
            check_text(s, "cell");
            line += s;
        }
    }
    return line + '\n';
}

std::string format_header(const std::vector<Column>& columns) {
    std::string line;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        check_text(columns[i].name, "column name");
        check_text(columns[i].unit, "column unit");
        if (i) line += ',';
        line += columns[i].name;
        if (!columns[i].unit.empty()) line += " [" + columns[i].unit + "]";
    }
    return line + '\n';
}

std::string format(const Table& table) {
    std::string out;
    for (const auto& [key, value] : table.metadata) {
        if (key.find(':') != std::string::npos || value.find('\n') != std::string::npos)
            throw DataError("metadata entry '" + key + "' cannot be serialized");
        out += "# " + key + ": " + value + '\n';
    }
    out += format_header(table.columns);
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw DataError("row has " + std::to_string(row.size()) + " cells for " +
                            std::to_string(table.columns.size()) + " columns");
        out += format_row(row);
    }
    return out;
}

Table parse(std::string_view text) {
    Table table;
    bool have_header = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line.front() == '#') {
            line.remove_prefix(1);
            const auto colon = line.find(':');
            if (colon == std::string_view::npos) continue;
            table.metadata.emplace_back(std::string(trim(line.substr(0, colon))),
                                        std::string(trim(line.substr(colon + 1))));
            continue;
        }
        const auto fields = split(line);
        if (!have_header) {
            for (auto f : fields) table.columns.push_back(parse_column(f));
            have_header = true;
            continue;
        }
        if (fields.size() != table.columns.size())
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(table.columns.size()) + " cells, found " +
                            std::to_string(fields.size()));
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (auto f : fields) row.push_back(parse_cell(f));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_csv(const Table& table, const std::filesystem::path& path) {
    const std::string text = format(table);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(tmp, "cannot open for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.flush();
        if (!out) throw IoError(tmp, "write failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError(path, "cannot move temporary file into place: " + ec.message());
}

Table read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse(buffer.str());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace qvlasov::csv
