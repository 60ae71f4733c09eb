#pragma once

// Matrix file formats: Matrix Market dense arrays (canonical) and CSV with
// complex literals `a`, `bi`, `a+bi`, `a-bi`. Both write 17 significant digits
// so a write/read cycle reproduces every double exactly.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opquot/numkernel.hpp"

namespace opquot::io {

enum class Format { MatrixMarket, Csv };

std::optional<Format> parse_format(std::string_view name) noexcept;

/// Parses text whose format is detected from the content: a leading
/// `%%MatrixMarket` banner selects Matrix Market, anything else is CSV.
/// `source` names the input in ParseError messages.
Matrix parse_matrix(std::string_view text, const std::string& source = "<input>");
Matrix parse_matrix_market(std::string_view text, const std::string& source = "<input>");
Matrix parse_csv(std::string_view text, const std::string& source = "<input>");

/// Complex literal grammar shared by the CSV reader; nullopt on malformed input.
std::optional<Scalar> parse_complex(std::string_view literal);

/// Comment lines are emitted as `% ...` (Matrix Market) or `# ...` (CSV).
std::string format_matrix(const Matrix& m, Format format, const std::vector<std::string>& comments = {});

Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const Matrix& m, const std::filesystem::path& path, Format format,
                  const std::vector<std::string>& comments = {});

/// Format implied by a file extension (`.csv` -> Csv, otherwise Matrix Market).
Format format_for_path(const std::filesystem::path& path);

std::string format_double(double value);

} // namespace opquot::io
