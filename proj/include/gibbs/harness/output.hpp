#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "gibbs/harness/config.hpp"

namespace gibbs::harness {

/// Shortest decimal text that round-trips to the same double ('.' separator,
/// independent of the global locale). NaN is written as "nan".
std::string format_number(double value);
std::string format_number(std::int64_t value);

/// Comma-separated file with a fixed header. Rows must match the header width.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::size_t width_;
  std::ofstream out_;
};

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const Json& value);

}  // namespace gibbs::harness
