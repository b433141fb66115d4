#include "gfs/cli/io.hpp"

#include "gfs/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gfs::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open '" + path + "' for writing");
  return out;
}

void write_meta(std::ostream& out, const Metadata& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
}

// Parses "# key=value"; lines without '=' are kept under an empty key.
void read_meta_line(std::string_view line, Metadata& meta) {
  line = trim(line.substr(1));
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    meta.emplace_back("", std::string(line));
  } else {
    meta.emplace_back(std::string(trim(line.substr(0, eq))), std::string(line.substr(eq + 1)));
  }
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw DomainError("not a finite number: '" + std::string(s) + "'");
  }
  return v;
}

long long parse_integer(std::string_view s) {
  s = trim(s);
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DomainError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_grid(std::string_view s) {
  std::vector<double> out;
  if (s.find(':') != std::string_view::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw DomainError("range grid must be start:step:stop");
    const double start = parse_double(parts[0]), step = parse_double(parts[1]),
                 stop = parse_double(parts[2]);
    if (!(step > 0.0) || stop < start) throw DomainError("range grid needs step > 0 and stop >= start");
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
    for (long long i = 0; i <= count; ++i) {
      // Snap to 12 decimals so 0:0.05:1 yields 0.15, not 0.15000000000000002.
      out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return out;
  }
  for (auto part : split(s, ',')) out.push_back(parse_double(part));
  if (out.empty()) throw DomainError("empty grid");
  return out;
}

std::string join_grid(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

void write_matrix(const std::string& path, const Mat& m, const Metadata& meta) {
  auto out = open_out(path);
  out << "# n=" << m.rows() << " d=" << m.cols() << '\n';
  write_meta(out, meta);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
  if (!out) throw DomainError("write failed for '" + path + "'");
}

Mat read_matrix(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<double> row;
    try {
      for (auto f : split(t, ',')) row.push_back(parse_double(f));
    } catch (const DomainError& e) {
      throw DomainError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DomainError(path + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(rows.front().size()) + " columns, found " +
                        std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DomainError(path + ": no matrix rows");
  Mat m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
  auto out = open_out(path);
  for (int l : labels) out << l << '\n';
}

std::vector<int> read_labels(const std::string& path) {
  auto in = open_in(path);
  std::vector<int> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    long long v = 0;
    try {
      v = parse_integer(t);
    } catch (const DomainError& e) {
      throw DomainError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (v < 0 || v > 1'000'000) {
      throw DomainError(path + ":" + std::to_string(lineno) + ": label must be a nonnegative integer");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string ResultFile::get(std::string_view key) const {
  for (const auto& [k, v] : meta) {
    if (k == key) return v;
  }
  return {};
}

std::size_t ResultFile::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw DomainError("result file has no column '" + std::string(name) + "'");
}

void write_result(const std::string& path, const ResultFile& r) {
  auto out = open_out(path);
  write_meta(out, r.meta);
  for (std::size_t i = 0; i < r.header.size(); ++i) out << (i ? "," : "") << r.header[i];
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  if (!out) throw DomainError("write failed for '" + path + "'");
}

ResultFile read_result(const std::string& path) {
  auto in = open_in(path);
  ResultFile r;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      read_meta_line(t, r.meta);
      continue;
    }
    std::vector<std::string> cells;
    for (auto f : split(t, ',')) cells.emplace_back(f);
    if (r.header.empty()) {
      r.header = std::move(cells);
    } else {
      if (cells.size() != r.header.size()) {
        throw DomainError(path + ": row width does not match header");
      }
      r.rows.push_back(std::move(cells));
    }
  }
  if (r.header.empty()) throw DomainError(path + ": missing header row");
  return r;
}

}  // namespace gfs::cli
