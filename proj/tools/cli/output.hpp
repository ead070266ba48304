#pragma once

// Table serialisation (CSV with 17 significant digits, JSON) and file output.

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace scaledyn::cli {

/// Output could not be written; maps to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const Table& table);

/// Writes text to `path`, or to `fallback` when the path is empty or "-".
void write_text(const std::string& path, const std::string& text, std::ostream& fallback);

}  // namespace scaledyn::cli
