#include "opquot/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace opquot::io {

namespace {

struct Line {
    std::size_t number = 0;
    std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back({number++, line});
        if (end == text.size()) {
            break;
        }
        start = end + 1;
    }
    return lines;
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

struct Token {
    std::string_view text;
    std::size_t column = 0; // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i > start) {
            tokens.push_back({line.substr(start, i - start), start + 1});
        }
    }
    return tokens;
}

std::optional<double> parse_real(std::string_view s) {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
        if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
            return std::nullopt;
        }
    }
    if (s.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<long long> parse_positive_int(std::string_view s) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || value <= 0) {
        return std::nullopt;
    }
    return value;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool has_sign_bit_imag(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const double im = m(i, j).imag();
            if (im != 0.0 || std::signbit(im)) {
                return true;
            }
        }
    }
    return false;
}

} // namespace

std::optional<Format> parse_format(std::string_view name) noexcept {
    if (name == "mm" || name == "matrix-market" || name == "matrix-market-array") {
        return Format::MatrixMarket;
    }
    if (name == "csv") {
        return Format::Csv;
    }
    return std::nullopt;
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::optional<Scalar> parse_complex(std::string_view literal) {
    std::string compact;
    for (char c : literal) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            compact.push_back(c);
        }
    }
    if (compact.empty()) {
        return std::nullopt;
    }
    if (compact.back() != 'i') {
        const auto re = parse_real(compact);
        if (!re) {
            return std::nullopt;
        }
        return Scalar(*re, 0.0);
    }

    const std::string_view body(compact.data(), compact.size() - 1);
    // The split is the last sign that is neither leading nor part of an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const std::string_view real_text = split == std::string_view::npos ? std::string_view{} : body.substr(0, split);
    const std::string_view imag_text = split == std::string_view::npos ? body : body.substr(split);

    double re = 0.0;
    if (!real_text.empty()) {
        const auto parsed = parse_real(real_text);
        if (!parsed) {
            return std::nullopt;
        }
        re = *parsed;
    }

    double im = 0.0;
    if (imag_text.empty() || imag_text == "+") {
        im = 1.0;
    } else if (imag_text == "-") {
        im = -1.0;
    } else {
        const bool negative = imag_text.front() == '-';
        std::string_view magnitude = imag_text;
        if (magnitude.front() == '-' || magnitude.front() == '+') {
            magnitude.remove_prefix(1);
        }
        if (magnitude.empty() || magnitude.front() == '-' || magnitude.front() == '+') {
            return std::nullopt;
        }
        const auto parsed = parse_real(magnitude);
        if (!parsed) {
            return std::nullopt;
        }
        im = negative ? -*parsed : *parsed;
    }
    return Scalar(re, im);
}

Matrix parse_matrix_market(std::string_view text, const std::string& source) {
    const std::vector<Line> lines = split_lines(text);
    auto it = lines.begin();
    while (it != lines.end() && is_blank(it->text)) {
        ++it;
    }
    if (it == lines.end()) {
        throw ParseError(source, 1, 1, "empty input");
    }

    const std::vector<Token> banner = tokenize(it->text);
    if (banner.size() != 5 || banner[0].text != "%%MatrixMarket" || lower(banner[1].text) != "matrix" ||
        lower(banner[2].text) != "array" || lower(banner[4].text) != "general") {
        throw ParseError(source, it->number, 1,
                         "expected '%%MatrixMarket matrix array {real|complex} general'");
    }
    const std::string field = lower(banner[3].text);
    if (field != "real" && field != "complex") {
        throw ParseError(source, it->number, banner[3].column, "unsupported field '" + std::string(banner[3].text) + "'");
    }
    const bool complex_field = field == "complex";
    ++it;

    auto next_data_line = [&]() {
        while (it != lines.end() && (is_blank(it->text) || trim(it->text).front() == '%')) {
            ++it;
        }
        return it != lines.end();
    };

    if (!next_data_line()) {
        throw ParseError(source, lines.back().number, 1, "missing dimension line");
    }
    const std::vector<Token> dims = tokenize(it->text);
    if (dims.size() != 2) {
        throw ParseError(source, it->number, 1, "dimension line must hold exactly 'rows cols'");
    }
    const auto rows = parse_positive_int(dims[0].text);
    const auto cols = parse_positive_int(dims[1].text);
    if (!rows || !cols) {
        throw ParseError(source, it->number, rows ? dims[1].column : dims[0].column,
                         "dimensions must be positive integers");
    }
    ++it;

    Matrix m(*rows, *cols);
    const long long count = *rows * *cols;
    const std::size_t per_entry = complex_field ? 2 : 1;
    for (long long k = 0; k < count; ++k) {
        if (!next_data_line()) {
            throw ParseError(source, lines.back().number, 1,
                             "expected " + std::to_string(count) + " entries, found " + std::to_string(k));
        }
        const std::vector<Token> tokens = tokenize(it->text);
        if (tokens.size() != per_entry) {
            throw ParseError(source, it->number, 1,
                             complex_field ? "complex entry needs two reals" : "real entry needs one value");
        }
        double parts[2] = {0.0, 0.0};
        for (std::size_t t = 0; t < per_entry; ++t) {
            const auto v = parse_real(tokens[t].text);
            if (!v) {
                throw ParseError(source, it->number, tokens[t].column,
                                 "invalid number '" + std::string(tokens[t].text) + "'");
            }
            parts[t] = *v;
        }
        // Column-major entry order.
        m(static_cast<Eigen::Index>(k % *rows), static_cast<Eigen::Index>(k / *rows)) = Scalar(parts[0], parts[1]);
        ++it;
    }
    if (next_data_line()) {
        throw ParseError(source, it->number, 1, "unexpected data after the last entry");
    }
    return m;
}

Matrix parse_csv(std::string_view text, const std::string& source) {
    std::vector<std::vector<Scalar>> rows;
    for (const Line& line : split_lines(text)) {
        const std::string_view content = trim(line.text);
        if (content.empty() || content.front() == '#') {
            continue;
        }
        std::vector<Scalar> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.text.find(',', start);
            const std::size_t end = comma == std::string_view::npos ? line.text.size() : comma;
            const std::string_view cell = line.text.substr(start, end - start);
            const auto value = parse_complex(cell);
            if (!value) {
                throw ParseError(source, line.number, start + 1, "invalid entry '" + std::string(trim(cell)) + "'");
            }
            row.push_back(*value);
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(source, line.number, 1,
                             "row has " + std::to_string(row.size()) + " entries, expected " +
                                 std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError(source, 1, 1, "no matrix rows");
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

Matrix parse_matrix(std::string_view text, const std::string& source) {
    const std::string_view head = trim(text);
    if (head.substr(0, 14) == "%%MatrixMarket") {
        return parse_matrix_market(text, source);
    }
    return parse_csv(text, source);
}

std::string format_matrix(const Matrix& m, Format format, const std::vector<std::string>& comments) {
    std::ostringstream out;
    if (format == Format::MatrixMarket) {
        const bool complex_field = has_sign_bit_imag(m);
        out << "%%MatrixMarket matrix array " << (complex_field ? "complex" : "real") << " general\n";
        for (const auto& c : comments) {
            out << "% " << c << '\n';
        }
        out << m.rows() << ' ' << m.cols() << '\n';
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                out << format_double(m(i, j).real());
                if (complex_field) {
                    out << ' ' << format_double(m(i, j).imag());
                }
                out << '\n';
            }
        }
        return out.str();
    }

    for (const auto& c : comments) {
        out << "# " << c << '\n';
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            const double re = m(i, j).real();
            const double im = m(i, j).imag();
            out << format_double(re);
            if (im != 0.0 || std::signbit(im)) {
                out << (std::signbit(im) ? '-' : '+') << format_double(std::abs(im)) << 'i';
            }
        }
        out << '\n';
    }
    return out.str();
}

Matrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_matrix(buffer.str(), path.string());
}

void write_matrix(const Matrix& m, const std::filesystem::path& path, Format format,
                  const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
    }
    out << format_matrix(m, format, comments);
    if (!out) {
        throw Error(ErrorKind::IoError, "failed writing '" + path.string() + "'");
    }
}

Format format_for_path(const std::filesystem::path& path) {
    return lower(path.extension().string()) == ".csv" ? Format::Csv : Format::MatrixMarket;
}

} // namespace opquot::io
