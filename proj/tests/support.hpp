#pragma once

// Shared fixtures for the unit and acceptance suites: literal matrices, the
// worked examples, and a max-entry distance.

#include <initializer_list>
#include <limits>
#include <random>

#include "opquot/numkernel.hpp"

namespace opquot::testing {

inline Matrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows.begin()->size());
    Matrix m(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double v : row) {
            m(i, j++) = Scalar(v, 0.0);
        }
        ++i;
    }
    return m;
}

inline Matrix diag(std::initializer_list<double> values) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

inline double max_abs_diff(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return x.size() == 0 ? 0.0 : (x - y).cwiseAbs().maxCoeff();
}

// Worked example 1: R(A) = R(B) = span{e1}, AA^* = BB^*/2.
inline Matrix example1_a() { return real_matrix({{0, 1}, {0, 0}}); }
inline Matrix example1_b() { return real_matrix({{1, 1}, {0, 0}}); }
inline Matrix example1_q() { return real_matrix({{0, 0.5}, {0, 0.5}}); }

// Worked example 2: R(A) = span{e1} strictly inside R(B) = span{e1, e2}.
inline Matrix example2_a() { return real_matrix({{0, 0, 1}, {0, 0, 0}, {0, 0, 0}}); }
inline Matrix example2_b() { return real_matrix({{0, 0, 1}, {0, 1, 0}, {0, 0, 0}}); }
inline Matrix example2_q() { return real_matrix({{0, 0, 0}, {0, 0, 0}, {0, 0, 1}}); }

inline Matrix unit_column(Eigen::Index n, Eigen::Index k) {
    Matrix e = Matrix::Zero(n, 1);
    e(k, 0) = 1.0;
    return e;
}

} // namespace opquot::testing
