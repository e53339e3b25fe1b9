#pragma once

#include <string>
#include <vector>

// Minimal CSV handling for the persisted result files. Files carry a schema
// comment line ("# scs-csv-v1"), then a header row, then data rows.
namespace scs::io {

inline constexpr const char* kCsvSchema = "# scs-csv-v1";

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_double(double v);  // fixed "%.10g", deterministic

void write_csv(const std::string& path, const Csv& csv);

// Throws std::runtime_error on IO failure or on rows whose width does not
// match the header.
Csv read_csv(const std::string& path);

double parse_double(const std::string& field);  // throws on garbage
int column_index(const Csv& csv, const std::string& name);  // -1 when absent

}  // namespace scs::io
