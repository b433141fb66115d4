#pragma once

#include "gfs/numerics.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gfs::cli {

/// Ordered `# key=value` metadata lines.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
/// Strict parse of a whole field; throws DomainError on junk or non-finite.
double parse_double(std::string_view s);
long long parse_integer(std::string_view s);

/// Comma-separated list ("0.1,0.2") or inclusive range "start:step:stop".
std::vector<double> parse_grid(std::string_view s);
std::string join_grid(const std::vector<double>& values);

/// MatrixFile: rows are coordinates, columns are points. Writes the
/// `# n=<rows> d=<cols>` header, then `meta` as further comment lines.
void write_matrix(const std::string& path, const Mat& m, const Metadata& meta = {});
Mat read_matrix(const std::string& path);

void write_labels(const std::string& path, const std::vector<int>& labels);
std::vector<int> read_labels(const std::string& path);

/// CSV with metadata comments, one header row and string cells.
struct ResultFile {
  Metadata meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Value of a metadata key, or empty.
  std::string get(std::string_view key) const;
  /// Column index by name; throws DomainError if absent.
  std::size_t column(std::string_view name) const;
};

void write_result(const std::string& path, const ResultFile& r);
ResultFile read_result(const std::string& path);

}  // namespace gfs::cli
