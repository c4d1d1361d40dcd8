#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qvlasov::csv {

using Cell = std::variant<double, std::string>;

struct Column {
    std::string name;
    std::string unit;  ///< empty for dimensionless labels
};

/// A CSV table with `# key: value` metadata lines above the header row.
struct Table {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;

    /// Index of the column with this name, or throws DataError.
    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::string_view column_name) const;
    const std::string* meta(std::string_view key) const;
};

/// 17 significant digits, so that parsing restores the exact double.
std::string format_number(double x);
std::string format_row(const std::vector<Cell>& row);
std::string format_header(const std::vector<Column>& columns);
std::string format(const Table& table);

Table parse(std::string_view text);

/// Writes through a temporary file and renames it into place.
void write_csv(const Table& table, const std::filesystem::path& path);
Table read_csv(const std::filesystem::path& path);

}  // namespace qvlasov::csv
