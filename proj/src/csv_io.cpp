#include "dualtree/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dualtree {
namespace {

double parse_field(const std::string& field, int row) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r'))
    --end;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw std::runtime_error("csv: non-numeric field '" + field + "' in row " +
                             std::to_string(row));
  return value;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in, CsvOptions options) {
  std::vector<double> coords;
  int dim = 0;
  int row = 0;
  std::string line;
  bool skipped_header = false;
  while (std::getline(in, line)) {
    ++row;
    if (options.header && !skipped_header) {
      skipped_header = true;
      continue;
    }
    if (line.empty() || line == "\r") continue;
    int fields = 0;
    size_t pos = 0;
    while (pos <= line.size()) {
      size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      coords.push_back(parse_field(line.substr(pos, comma - pos), row));
      ++fields;
      pos = comma + 1;
    }
    if (dim == 0) {
      dim = fields;
    } else if (fields != dim) {
      throw std::runtime_error("csv: ragged row " + std::to_string(row) +
                               " has " + std::to_string(fields) +
                               " fields, expected " + std::to_string(dim));
    }
  }
  if (coords.empty()) throw std::runtime_error("csv: empty file");
  return Dataset(std::move(coords), dim, options.policy);
}

void write_dataset_csv(const Dataset& s, std::ostream& out,
                       CsvOptions options) {
  if (options.header) {
    for (int j = 0; j < s.dim(); ++j) {
      if (j) out << ',';
      out << 'x' << j;
    }
    out << '\n';
  }
  char buf[64];
  for (int i = 0; i < s.size(); ++i) {
    const auto p = s.point(i);
    for (int j = 0; j < s.dim(); ++j) {
      if (j) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", p[j]);
      out << buf;
    }
    out << '\n';
  }
}

Dataset load_dataset_csv(const std::string& path, CsvOptions options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
  return read_dataset_csv(in, options);
}

void save_dataset_csv(const Dataset& s, const std::string& path,
                      CsvOptions options) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot write '" + path + "'");
  write_dataset_csv(s, out, options);
}

}  // namespace dualtree
