#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "opquot/io.hpp"
#include "opquot/oracle.hpp"
#include "support.hpp"

using namespace opquot;
using namespace opquot::testing;

namespace {

bool bitwise_equal(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        return false;
    }
    return x.size() == 0 || std::memcmp(x.data(), y.data(), sizeof(Scalar) * static_cast<std::size_t>(x.size())) == 0;
}

std::size_t parse_error_line(const std::string& text) {
    try {
        io::parse_matrix(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST_CASE("complex literal grammar") {
    CHECK(io::parse_complex("1-2i") == Scalar(1, -2));
    CHECK(io::parse_complex("1 - 2i") == Scalar(1, -2));
    CHECK(io::parse_complex("3") == Scalar(3, 0));
    CHECK(io::parse_complex("-2.5i") == Scalar(0, -2.5));
    CHECK(io::parse_complex("i") == Scalar(0, 1));
    CHECK(io::parse_complex("-i") == Scalar(0, -1));
    CHECK(io::parse_complex("1e-3+4E+2i") == Scalar(1e-3, 4e2));
    CHECK(io::parse_complex(" 0.5 + 0.25i ") == Scalar(0.5, 0.25));
    CHECK_FALSE(io::parse_complex("").has_value());
    CHECK_FALSE(io::parse_complex("1+2").has_value());
    CHECK_FALSE(io::parse_complex("abc").has_value());
    CHECK_FALSE(io::parse_complex("1+2j").has_value());
    CHECK_FALSE(io::parse_complex("nan").has_value());
    CHECK_FALSE(io::parse_complex("inf").has_value());
}

TEST_CASE("Matrix Market reading") {
    const Matrix m = io::parse_matrix("%%MatrixMarket matrix array real general\n"
                                      "% a comment\n"
                                      "2 2\n0\n0\n1\n0\n");
    CHECK(max_abs_diff(m, example1_a()) == 0.0);

    const Matrix c = io::parse_matrix("%%MatrixMarket matrix array complex general\n1 2\n1 -2\n0.5 0\n");
    CHECK(c(0, 0) == Scalar(1, -2));
    CHECK(c(0, 1) == Scalar(0.5, 0));
}

TEST_CASE("CSV reading") {
    const Matrix m = io::parse_matrix("# comment\n1, 1-2i\n0, i\n");
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 2);
    CHECK(m(0, 1) == Scalar(1, -2));
    CHECK(m(1, 1) == Scalar(0, 1));
}

TEST_CASE("parse errors name the line") {
    CHECK(parse_error_line("%%MatrixMarket matrix array real general\n2 x\n1\n2\n3\n4\n") == 2);
    CHECK(parse_error_line("%%MatrixMarket matrix array real general\n2\n") == 2);
    CHECK(parse_error_line("%%MatrixMarket matrix array real general\n1 2\n1\n") > 0);
    CHECK(parse_error_line("%%MatrixMarket matrix array real general\n1 1\n1\n2\n") == 4);
    CHECK(parse_error_line("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n") == 1);
    CHECK(parse_error_line("1,2\n3\n") == 2);
    CHECK(parse_error_line("1,2\n3,4x\n") == 2);

    try {
        io::parse_matrix("%%MatrixMarket matrix array real general\n2 x\n", "A.mm");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("A.mm:2") != std::string::npos);
        CHECK(e.kind() == ErrorKind::ParseError);
    }
}

TEST_CASE("round trips are bitwise exact") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        Matrix m = oracle::random_gaussian(5, 3, rng);
        m(0, 0) = Scalar(1e-300, -1e300);
        m(1, 0) = Scalar(-0.0, 0.1);
        m(2, 0) = Scalar(1.0 / 3.0, -0.0);
        for (io::Format f : {io::Format::MatrixMarket, io::Format::Csv}) {
            const Matrix back = io::parse_matrix(io::format_matrix(m, f));
            CHECK(bitwise_equal(back, m));
        }
    }
    const Matrix real = real_matrix({{0.1, 0.2}, {0.3, 1e-17}});
    const std::string text = io::format_matrix(real, io::Format::MatrixMarket);
    CHECK(text.rfind("%%MatrixMarket matrix array real general\n", 0) == 0);
    CHECK(bitwise_equal(io::parse_matrix(text), real));
}

TEST_CASE("comments are written in the format's style") {
    const std::string mm = io::format_matrix(identity(1), io::Format::MatrixMarket, {"defect 0"});
    CHECK(mm.find("% defect 0\n") != std::string::npos);
    const std::string csv = io::format_matrix(identity(1), io::Format::Csv, {"defect 0"});
    CHECK(csv.rfind("# defect 0\n", 0) == 0);
    CHECK(bitwise_equal(io::parse_matrix(csv), identity(1)));
}

TEST_CASE("files") {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "opquot_test_io";
    std::filesystem::create_directories(dir);
    std::mt19937_64 rng(6);
    const Matrix m = oracle::random_gaussian(4, 2, rng);
    for (const char* name : {"m.mm", "m.csv"}) {
        const std::filesystem::path path = dir / name;
        io::write_matrix(m, path, io::format_for_path(path));
        CHECK(bitwise_equal(io::read_matrix(path), m));
    }
    CHECK(io::format_for_path("x.csv") == io::Format::Csv);
    CHECK(io::format_for_path("x.mtx") == io::Format::MatrixMarket);
    CHECK(io::parse_format("mm") == io::Format::MatrixMarket);
    CHECK(io::parse_format("csv") == io::Format::Csv);
    CHECK_FALSE(io::parse_format("xlsx").has_value());

    try {
        io::read_matrix(dir / "missing.mm");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IoError);
    }
    CHECK_THROWS_AS(io::write_matrix(m, dir / "no" / "such" / "dir.mm", io::Format::MatrixMarket), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("format_double keeps 17 significant digits") {
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
