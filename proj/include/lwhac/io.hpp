#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lwhac/condensed_matrix.hpp"

namespace lwhac {

enum class InputFormat { SquareCsv, CondensedCsv, PointsCsv };

std::optional<InputFormat> parse_input_format(std::string_view name) noexcept;

/// Points are always compared with the Euclidean metric.
struct InputSpec {
  std::filesystem::path source;
  InputFormat format = InputFormat::SquareCsv;
};

/// Symmetry tolerance for square matrices, scaled by max(1, |a|, |b|).
inline constexpr double kSymmetryTolerance = 1e-12;

/// Full n x n matrix; must be symmetric within tolerance with a zero
/// diagonal. The two triangles are averaged.
CondensedMatrix parse_square_csv(std::string_view text);
/// Upper-triangle values in row-major order, any mix of commas and newlines.
CondensedMatrix parse_condensed_csv(std::string_view text);
/// One point per row; all-pairs Euclidean distances.
CondensedMatrix parse_points_csv(std::string_view text);

CondensedMatrix parse_matrix(std::string_view text, InputFormat format);
/// Reads the file and parses it. Throws InputError (also for unreadable files).
CondensedMatrix load_matrix(const InputSpec& spec);

std::string write_square_csv(const CondensedMatrix& m);
std::string write_condensed_csv(const CondensedMatrix& m);

/// Shortest decimal that round-trips the double.
std::string format_double(double value);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace lwhac
