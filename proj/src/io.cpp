#include "lwhac/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "lwhac/errors.hpp"

namespace lwhac {

namespace {

struct Row {
  std::size_t line = 0;
  std::vector<std::string_view> fields;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<Row> split_rows(std::string_view text) {
  std::vector<Row> rows;
  std::size_t line = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line;
    if (raw.empty()) continue;
    Row row{line, {}};
    std::size_t start = 0;
    while (true) {
      const auto comma = raw.find(',', start);
      row.fields.push_back(trim(raw.substr(start, comma == raw.npos ? raw.npos : comma - start)));
      if (comma == raw.npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool numeric_row(const Row& row) {
  double ignored;
  for (auto f : row.fields) {
    if (!parse_double(f, ignored)) return false;
  }
  return true;
}

// Parses every field, dropping a leading non-numeric header row.
std::vector<std::vector<double>> numeric_rows(std::string_view text, const char* format) {
  auto rows = split_rows(text);
  if (!rows.empty() && !numeric_row(rows.front())) rows.erase(rows.begin());
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const Row& row : rows) {
    std::vector<double> values(row.fields.size());
    for (std::size_t f = 0; f < row.fields.size(); ++f) {
      if (!parse_double(row.fields[f], values[f])) {
        throw InputError(std::string(format) + ": line " + std::to_string(row.line) + ", field " +
                         std::to_string(f + 1) + ": '" + std::string(row.fields[f]) +
                         "' is not a number");
      }
      if (std::isnan(values[f])) {
        throw InputError(std::string(format) + ": line " + std::to_string(row.line) + ", field " +
                         std::to_string(f + 1) + ": NaN distance");
      }
    }
    out.push_back(std::move(values));
  }
  return out;
}

}  // namespace

std::optional<InputFormat> parse_input_format(std::string_view name) noexcept {
  if (name == "square" || name == "square-csv") return InputFormat::SquareCsv;
  if (name == "condensed" || name == "condensed-csv") return InputFormat::CondensedCsv;
  if (name == "points" || name == "points-csv") return InputFormat::PointsCsv;
  return std::nullopt;
}

CondensedMatrix parse_square_csv(std::string_view text) {
  const auto rows = numeric_rows(text, "square-csv");
  const std::size_t n = rows.size();
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) {
      throw InputError("square-csv: row " + std::to_string(r) + " has " +
                       std::to_string(rows[r].size()) + " values, expected " + std::to_string(n));
    }
  }
  std::vector<double> cells;
  cells.reserve(triangle_size(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(rows[i][i]) > kSymmetryTolerance) {
      throw InputError("square-csv: diagonal cell (" + std::to_string(i) + ", " +
                       std::to_string(i) + ") = " + format_double(rows[i][i]) + " is not zero");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = rows[i][j];
      const double b = rows[j][i];
      const double scale = std::max({1.0, std::abs(a), std::abs(b)});
      if (!(std::abs(a - b) <= kSymmetryTolerance * scale)) {
        throw InputError("square-csv: cell (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") = " + format_double(a) + " but (" + std::to_string(j) + ", " +
                         std::to_string(i) + ") = " + format_double(b) + "; matrix not symmetric");
      }
      cells.push_back((a + b) / 2);
    }
  }
  return CondensedMatrix(n, std::move(cells));
}

CondensedMatrix parse_condensed_csv(std::string_view text) {
  std::vector<double> cells;
  for (auto& row : numeric_rows(text, "condensed-csv")) {
    cells.insert(cells.end(), row.begin(), row.end());
  }
  // An empty list is read as n = 0.
  const double root = (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(cells.size()))) / 2.0;
  auto n = static_cast<std::size_t>(std::llround(root));
  if (cells.empty()) n = 0;
  if (triangle_size(n) != cells.size()) {
    throw InputError("condensed-csv: " + std::to_string(cells.size()) +
                     " values is not (n^2-n)/2 for any integer n");
  }
  return CondensedMatrix(n, std::move(cells));
}

CondensedMatrix parse_points_csv(std::string_view text) {
  const auto points = numeric_rows(text, "points-csv");
  const std::size_t n = points.size();
  for (std::size_t r = 0; r < n; ++r) {
    if (points[r].size() != points.front().size()) {
      throw InputError("points-csv: point " + std::to_string(r) + " has " +
                       std::to_string(points[r].size()) + " coordinates, expected " +
                       std::to_string(points.front().size()));
    }
    for (double x : points[r]) {
      if (!std::isfinite(x)) {
        throw InputError("points-csv: point " + std::to_string(r) + " has a non-finite coordinate");
      }
    }
  }
  std::vector<double> cells;
  cells.reserve(triangle_size(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sum = 0;
      for (std::size_t c = 0; c < points[i].size(); ++c) {
        const double diff = points[i][c] - points[j][c];
        sum += diff * diff;
      }
      cells.push_back(std::sqrt(sum));
    }
  }
  return CondensedMatrix(n, std::move(cells));
}

CondensedMatrix parse_matrix(std::string_view text, InputFormat format) {
  switch (format) {
    case InputFormat::SquareCsv: return parse_square_csv(text);
    case InputFormat::CondensedCsv: return parse_condensed_csv(text);
    case InputFormat::PointsCsv: return parse_points_csv(text);
  }
  throw InputError("unknown input format");
}

CondensedMatrix load_matrix(const InputSpec& spec) {
  return parse_matrix(read_file(spec.source), spec.format);
}

std::string write_square_csv(const CondensedMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.n(); ++i) {
    for (std::size_t j = 0; j < m.n(); ++j) {
      if (j > 0) out += ',';
      out += i == j ? "0" : format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string write_condensed_csv(const CondensedMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i + 1 < m.n(); ++i) {
    for (std::size_t j = i + 1; j < m.n(); ++j) {
      if (j > i + 1) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << contents;
  if (!out) throw InputError("failed writing " + path.string());
}

}  // namespace lwhac
