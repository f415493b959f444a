#pragma once

#include <iosfwd>
#include <string>

#include "dualtree/dataset.hpp"

namespace dualtree {

struct CsvOptions {
  bool header = false;  // skip (load) / emit (save) a single header row
  DuplicatePolicy policy = DuplicatePolicy::reject;
};

/// Loads a dataset from a CSV file, one point per row. Row order defines
/// point ids. Ragged rows, non-numeric fields, and empty files are errors
/// that name the offending row.
Dataset load_dataset_csv(const std::string& path, CsvOptions options = {});

/// Writes a dataset with full round-trip precision.
void save_dataset_csv(const Dataset& s, const std::string& path,
                      CsvOptions options = {});

Dataset read_dataset_csv(std::istream& in, CsvOptions options = {});
void write_dataset_csv(const Dataset& s, std::ostream& out,
                       CsvOptions options = {});

}  // namespace dualtree
