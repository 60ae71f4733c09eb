#include "opquot/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace opquot {

namespace {

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Eigen's divide-and-conquer SVD can return NaN singular values (while
// reporting success) on inputs with clustered singular values, e.g.
// projectors. One-sided Jacobi is used up to this size; above it the
// divide-and-conquer result is accepted only after validation.
constexpr Eigen::Index kJacobiLimit = 128;

struct RawSvd {
    Matrix u;
    RealVector sigma;
    Matrix v;
};

bool plausible(const RealVector& sigma) {
    if (!sigma.allFinite()) {
        return false;
    }
    for (Eigen::Index i = 1; i < sigma.size(); ++i) {
        if (sigma(i) > sigma(i - 1) || sigma(i) < 0.0) {
            return false;
        }
    }
    return true;
}

RawSvd jacobi(const Matrix& m, int options) {
    Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> solver(m, options);
    if (solver.info() != Eigen::Success || !plausible(solver.singularValues())) {
        throw Error(ErrorKind::ConvergenceFailure, "SVD did not converge on " + shape(m) + " input");
    }
    RawSvd out;
    out.sigma = solver.singularValues();
    if (options != 0) {
        out.u = solver.matrixU();
        out.v = solver.matrixV();
    }
    return out;
}

RawSvd robust_svd(const Matrix& m, bool vectors) {
    const int options = vectors ? (Eigen::ComputeFullU | Eigen::ComputeFullV) : 0;
    if (std::min(m.rows(), m.cols()) <= kJacobiLimit) {
        return jacobi(m, options);
    }
    Eigen::BDCSVD<Matrix> solver(m, options);
    if (solver.info() != Eigen::Success || !plausible(solver.singularValues())) {
        return jacobi(m, options);
    }
    RawSvd out;
    out.sigma = solver.singularValues();
    if (vectors) {
        out.u = solver.matrixU();
        out.v = solver.matrixV();
        const double scale = out.sigma(0);
        const Matrix rebuilt = out.u.leftCols(out.sigma.size()) * out.sigma.asDiagonal() *
                               out.v.leftCols(out.sigma.size()).adjoint();
        if (!((rebuilt - m).norm() <= 1e-10 * (1.0 + scale) * std::sqrt(static_cast<double>(m.size())))) {
            return jacobi(m, options);
        }
    }
    return out;
}

Matrix hermitian_part(const Matrix& p) {
    return (p + p.adjoint()) / 2.0;
}

} // namespace

double ToleranceConfig::rank_cutoff(Eigen::Index rows, Eigen::Index cols) const {
    if (rank_rel) {
        return *rank_rel;
    }
    return static_cast<double>(std::max<Eigen::Index>({rows, cols, 1})) * std::numeric_limits<double>::epsilon();
}

void ToleranceConfig::validate() const {
    const bool ok = (!rank_rel || (*rank_rel >= 0.0 && std::isfinite(*rank_rel))) && residual_rel >= 0.0 &&
                    std::isfinite(residual_rel) && psd_rel >= 0.0 && std::isfinite(psd_rel);
    if (!ok) {
        throw Error(ErrorKind::InvalidSpec, "tolerances must be finite and nonnegative");
    }
}

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) {
        throw Error(ErrorKind::NonFinite, std::string(what) + " has non-finite entries");
    }
}

void require_same_rows(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows()) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": row counts differ (" + shape(a) + " vs " + shape(b) + ")");
    }
}

void require_same_cols(const Matrix& a, const Matrix& b, const char* what) {
    if (a.cols() != b.cols()) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": column counts differ (" + shape(a) + " vs " + shape(b) + ")");
    }
}

Matrix adjoint(const Matrix& m) {
    return m.adjoint();
}

Matrix identity(Eigen::Index n) {
    return Matrix::Identity(n, n);
}

double norm2(const Matrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    require_finite(m, "norm input");
    return robust_svd(m, false).sigma(0);
}

SvdFactorization svd(const Matrix& m, const ToleranceConfig& tol) {
    require_finite(m, "svd input");
    SvdFactorization f;
    if (m.size() == 0) {
        f.u = identity(m.rows());
        f.v = identity(m.cols());
        return f;
    }
    RawSvd raw = robust_svd(m, true);
    f.u = std::move(raw.u);
    f.v = std::move(raw.v);
    f.sigma = std::move(raw.sigma);

    const double cutoff = tol.rank_cutoff(m.rows(), m.cols()) * f.sigma(0);
    f.rank = 0;
    if (f.sigma(0) > 0.0) {
        while (f.rank < f.sigma.size() && f.sigma(f.rank) > cutoff) {
            ++f.rank;
        }
    }
    return f;
}

Eigen::Index numerical_rank(const Matrix& m, const ToleranceConfig& tol) {
    return svd(m, tol).rank;
}

Matrix pseudoinverse(const Matrix& m, const ToleranceConfig& tol) {
    const SvdFactorization f = svd(m, tol);
    const Eigen::Index r = f.rank;
    if (r == 0) {
        return Matrix::Zero(m.cols(), m.rows());
    }
    const RealVector inv = f.sigma.head(r).cwiseInverse();
    return f.v.leftCols(r) * inv.asDiagonal() * f.u.leftCols(r).adjoint();
}

Matrix projector_onto_range(const Matrix& m, const ToleranceConfig& tol) {
    const Matrix basis = range_basis(m, tol);
    return basis * basis.adjoint();
}

Matrix projector_onto_corange(const Matrix& m, const ToleranceConfig& tol) {
    const SvdFactorization f = svd(m, tol);
    const auto vr = f.v.leftCols(f.rank);
    return vr * vr.adjoint();
}

Matrix range_basis(const Matrix& m, const ToleranceConfig& tol) {
    const SvdFactorization f = svd(m, tol);
    return f.u.leftCols(f.rank);
}

Matrix kernel_basis(const Matrix& m, const ToleranceConfig& tol) {
    const SvdFactorization f = svd(m, tol);
    return f.v.rightCols(m.cols() - f.rank);
}

bool is_hermitian(const Matrix& p, const ToleranceConfig& tol) {
    if (p.rows() != p.cols()) {
        return false;
    }
    return norm2(p - p.adjoint()) <= tol.residual_rel * (1.0 + norm2(p));
}

Matrix hermitian_psd_sqrt(const Matrix& p, const ToleranceConfig& tol, double reference_scale) {
    require_finite(p, "psd sqrt input");
    if (!is_hermitian(p, tol)) {
        throw Error(ErrorKind::NotHermitian, "square root needs a Hermitian matrix", norm2(p - p.adjoint()));
    }
    if (p.size() == 0) {
        return p;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(p));
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "Hermitian eigensolver did not converge");
    }
    const RealVector& lambda = eig.eigenvalues();
    const double scale = std::max(lambda.cwiseAbs().maxCoeff(), reference_scale);
    const double floor = tol.psd_rel * scale;
    if (lambda.minCoeff() < -floor) {
        throw Error(ErrorKind::NotPositiveSemidefinite, "eigenvalue below the PSD floor", -lambda.minCoeff());
    }
    // Roundoff-level eigenvalues would turn into sqrt(eps)-sized ones and
    // corrupt the rank of the root, so they are zeroed together with the
    // clamped negatives.
    RealVector root(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        root(i) = lambda(i) > floor ? std::sqrt(lambda(i)) : 0.0;
    }
    const Matrix& vecs = eig.eigenvectors();
    return hermitian_part(vecs * root.asDiagonal() * vecs.adjoint());
}

double min_eigenvalue(const Matrix& p) {
    if (p.size() == 0) {
        return 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(p), Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "Hermitian eigensolver did not converge");
    }
    return eig.eigenvalues()(0);
}

bool loewner_leq(const Matrix& p, const Matrix& q, const ToleranceConfig& tol) {
    if (p.rows() != q.rows() || p.cols() != q.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "Loewner comparison of " + shape(p) + " and " + shape(q));
    }
    if (!is_hermitian(p, tol) || !is_hermitian(q, tol)) {
        throw Error(ErrorKind::NotHermitian, "Loewner comparison needs Hermitian operands");
    }
    const double scale = std::max({norm2(p), norm2(q), 1.0});
    return min_eigenvalue(q - p) >= -tol.psd_rel * scale;
}

double range_inclusion_residual(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
    require_same_rows(a, b, "range inclusion");
    const Matrix basis = range_basis(b, tol);
    return norm2(a - basis * (basis.adjoint() * a));
}

double kernel_inclusion_residual(const Matrix& b, const Matrix& a, const ToleranceConfig& tol) {
    require_same_cols(a, b, "kernel inclusion");
    const Matrix null = kernel_basis(b, tol);
    if (null.cols() == 0) {
        return 0.0;
    }
    return norm2(a * null);
}

bool range_included(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
    return range_inclusion_residual(a, b, tol) <= tol.residual_rel * (1.0 + norm2(a));
}

bool kernel_included(const Matrix& b, const Matrix& a, const ToleranceConfig& tol) {
    return kernel_inclusion_residual(b, a, tol) <= tol.residual_rel * (1.0 + norm2(a));
}

bool subspace_equal_ranges(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
    require_same_rows(a, b, "range equality");
    return range_included(a, b, tol) && range_included(b, a, tol);
}

double projector_distance(const Matrix& p1, const Matrix& p2) {
    if (p1.rows() != p2.rows() || p1.cols() != p2.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "projector comparison of " + shape(p1) + " and " + shape(p2));
    }
    return (p1 - p2).norm();
}

bool projectors_equal(const Matrix& p1, const Matrix& p2, const ToleranceConfig& tol) {
    return projector_distance(p1, p2) <= tol.residual_rel * static_cast<double>(std::max<Eigen::Index>(p1.rows(), 1));
}

} // namespace opquot
