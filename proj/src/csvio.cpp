#include "cfsim/csvio.hpp"

#include <cstdio>
#include <fstream>

#include "cfsim/errors.hpp"

namespace cfsim {

std::string format_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string csv_line(const std::vector<CsvCell>& cells) {
    std::string line;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        if (const double* d = std::get_if<double>(&cells[i])) line += format_g6(*d);
        else if (const long* l = std::get_if<long>(&cells[i])) line += std::to_string(*l);
        else line += std::get<std::string>(cells[i]);
    }
    return line;
}

void write_csv(const std::string& path, const std::string& schema,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<CsvCell>>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write output file '" + path + "'");
    out << "# schema: " << schema << "\n";
    for (size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& r : rows) out << csv_line(r) << "\n";
    if (!out) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace cfsim
