#pragma once

#include <string>
#include <variant>
#include <vector>

namespace cfsim {

// CSV cells: numbers are printed with 6 significant digits, which fixes the
// output bytes for a given input; strings pass through unquoted (no commas).
using CsvCell = std::variant<double, long, std::string>;

std::string format_g6(double v);
std::string csv_line(const std::vector<CsvCell>& cells);

// Writes "# schema: <schema>", the header row, then the data rows. The
// schema tag is versioned; any column change bumps it.
void write_csv(const std::string& path, const std::string& schema,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<CsvCell>>& rows);

}  // namespace cfsim
