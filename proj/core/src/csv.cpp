#include "scs/csv.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace scs::io {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {
std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}
}  // namespace

void write_csv(const std::string& path, const Csv& csv) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kCsvSchema << "\n";
  for (size_t i = 0; i < csv.header.size(); ++i) {
    out << (i ? "," : "") << csv.header[i];
  }
  out << "\n";
  for (const auto& row : csv.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failure on " + path);
}

Csv read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  Csv csv;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_line(line);
    if (!have_header) {
      csv.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != csv.header.size()) {
      throw std::runtime_error(path + ": malformed row width");
    }
    csv.rows.push_back(std::move(fields));
  }
  if (!have_header) throw std::runtime_error(path + ": missing header");
  return csv;
}

double parse_double(const std::string& field) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("not a number: '" + field + "'");
  }
  if (used != field.size()) throw std::runtime_error("not a number: '" + field + "'");
  return v;
}

int column_index(const Csv& csv, const std::string& name) {
  for (size_t i = 0; i < csv.header.size(); ++i) {
    if (csv.header[i] == name) return int(i);
  }
  return -1;
}

}  // namespace scs::io
