#pragma once

// Dense complex linear-algebra kernel: SVD, numerical rank, Moore-Penrose
// pseudoinverse, orthogonal projectors, PSD square roots, Loewner order and
// subspace predicates. Everything else in the library is built on these.

#include <Eigen/Dense>

#include <complex>
#include <optional>

#include "opquot/errors.hpp"

namespace opquot {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerance policy shared by every numerical decision in the library.
///
/// `rank_rel` is a relative singular-value cutoff; when unset the cutoff for an
/// m x n matrix is max(m, n) * machine epsilon. `residual_rel` bounds relative
/// residuals of inclusion and identity checks, `psd_rel` is the relative
/// eigenvalue floor used for Loewner comparisons and PSD square roots.
struct ToleranceConfig {
    std::optional<double> rank_rel;
    double residual_rel = 1e-8;
    double psd_rel = 1e-10;

    double rank_cutoff(Eigen::Index rows, Eigen::Index cols) const;
    void validate() const;
};

struct SvdFactorization {
    Matrix u;          // m x m unitary
    RealVector sigma;  // nonincreasing, length min(m, n)
    Matrix v;          // n x n unitary
    Eigen::Index rank = 0;
};

// Shape and finiteness checks.
void require_finite(const Matrix& m, const char* what);
void require_same_rows(const Matrix& a, const Matrix& b, const char* what);
void require_same_cols(const Matrix& a, const Matrix& b, const char* what);

Matrix adjoint(const Matrix& m);
Matrix identity(Eigen::Index n);

/// Spectral norm (largest singular value); zero for empty matrices.
double norm2(const Matrix& m);

SvdFactorization svd(const Matrix& m, const ToleranceConfig& tol = {});
Eigen::Index numerical_rank(const Matrix& m, const ToleranceConfig& tol = {});

Matrix pseudoinverse(const Matrix& m, const ToleranceConfig& tol = {});

/// m m^+ : orthogonal projector onto R(m).
Matrix projector_onto_range(const Matrix& m, const ToleranceConfig& tol = {});
/// m^+ m : orthogonal projector onto N(m)^perp = R(m^*).
Matrix projector_onto_corange(const Matrix& m, const ToleranceConfig& tol = {});

/// Orthonormal columns spanning R(m) (the leading left singular vectors).
Matrix range_basis(const Matrix& m, const ToleranceConfig& tol = {});
/// Orthonormal columns spanning N(m) (the trailing right singular vectors).
Matrix kernel_basis(const Matrix& m, const ToleranceConfig& tol = {});

/// ||p - p^*|| <= residual_rel * (1 + ||p||).
bool is_hermitian(const Matrix& p, const ToleranceConfig& tol = {});

/// Hermitian PSD square root via eigendecomposition. Eigenvalues within
/// psd_rel * max(||p||, reference_scale) of zero are set to zero; anything
/// more negative throws NotPositiveSemidefinite. Pass the scale of the data
/// p was computed from when p itself may be pure roundoff.
Matrix hermitian_psd_sqrt(const Matrix& p, const ToleranceConfig& tol = {}, double reference_scale = 0.0);

/// Smallest eigenvalue of a Hermitian matrix (symmetrised before solving).
double min_eigenvalue(const Matrix& p);

/// p <= q in the Loewner order: lambda_min(q - p) >= -psd_rel * max(||p||, ||q||, 1).
bool loewner_leq(const Matrix& p, const Matrix& q, const ToleranceConfig& tol = {});

/// ||(I - b b^+) a||; inclusion holds when this is <= residual_rel * (1 + ||a||).
double range_inclusion_residual(const Matrix& a, const Matrix& b, const ToleranceConfig& tol = {});
/// ||a (I - b^+ b)||; a annihilates N(b) when this is <= residual_rel * (1 + ||a||).
double kernel_inclusion_residual(const Matrix& b, const Matrix& a, const ToleranceConfig& tol = {});

/// R(a) is a subset of R(b).
bool range_included(const Matrix& a, const Matrix& b, const ToleranceConfig& tol = {});
/// N(b) is a subset of N(a).
bool kernel_included(const Matrix& b, const Matrix& a, const ToleranceConfig& tol = {});
bool subspace_equal_ranges(const Matrix& a, const Matrix& b, const ToleranceConfig& tol = {});

/// Frobenius distance between two orthogonal projectors of the same size.
double projector_distance(const Matrix& p1, const Matrix& p2);
/// The subspace-equality criterion: ||P1 - P2||_F <= residual_rel * dim.
bool projectors_equal(const Matrix& p1, const Matrix& p2, const ToleranceConfig& tol = {});

} // namespace opquot
