#pragma once

// Left quotients [B\A] = B^+ A (Douglas solutions of BX = A) and right
// quotients [A/B] = A B^+ (the operator Bx -> Ax), with application, norms,
// adjoint duality, inverses and the graph-level constructions.

#include <utility>

#include "opquot/numkernel.hpp"

namespace opquot {

/// [B\A]: the unique solution C of BC = A with R(C) inside R(B^*).
/// Requires R(A) inside R(B). Immutable after construction.
class LeftQuotient {
public:
    const Matrix& numerator() const noexcept { return a_; }
    const Matrix& denominator() const noexcept { return b_; }
    const Matrix& q() const noexcept { return q_; }
    const ToleranceConfig& tol() const noexcept { return tol_; }

private:
    LeftQuotient(Matrix a, Matrix b, Matrix q, ToleranceConfig tol)
        : a_(std::move(a)), b_(std::move(b)), q_(std::move(q)), tol_(tol) {}

    friend LeftQuotient left_quotient(const Matrix& a, const Matrix& b, const ToleranceConfig& tol);

    Matrix a_;
    Matrix b_;
    Matrix q_;
    ToleranceConfig tol_;
};

/// [A/B]: the operator Bx -> Ax with domain R(B). Requires N(B) inside N(A).
/// `q()` is the total matrix A B^+; `apply_right` enforces the domain.
class RightQuotient {
public:
    const Matrix& numerator() const noexcept { return a_; }
    const Matrix& denominator() const noexcept { return b_; }
    const Matrix& q() const noexcept { return q_; }
    const Matrix& domain_projector() const noexcept { return domain_; }
    const ToleranceConfig& tol() const noexcept { return tol_; }

private:
    RightQuotient(Matrix a, Matrix b, Matrix q, Matrix domain, ToleranceConfig tol)
        : a_(std::move(a)), b_(std::move(b)), q_(std::move(q)), domain_(std::move(domain)), tol_(tol) {}

    friend RightQuotient right_quotient(const Matrix& a, const Matrix& b, const ToleranceConfig& tol);

    Matrix a_;
    Matrix b_;
    Matrix q_;
    Matrix domain_;
    ToleranceConfig tol_;
};

/// The graph G(B,A) = R([B;A]) and its adjoint G(B,A)^* = V(N([B;A]^*)),
/// where V(x, y) = (-y, x). Adjoint columns split as (x over y) with
/// x of length rows(A) and y of length rows(B), and satisfy A^* x = B^* y.
struct GraphData {
    Matrix t;
    Matrix graph_basis;
    Matrix adjoint_graph_basis;
};

struct ClosednessCertificate {
    Eigen::Index rank = 0; // dim(R(A^*) + R(B^*))
    bool closed = true;    // finite-dimensional subspaces are always closed
};

/// Residuals of the Douglas conditions for a constructed left quotient.
struct DouglasResiduals {
    double factorization = 0.0; // ||B q - A||
    double kernel = 0.0;        // ||q (I - A^+ A)||, N(q) = N(A)
    double corange = 0.0;       // ||(I - B^+ B) q||, R(q) inside R(B^*)
    Eigen::Index rank_q = 0;
    Eigen::Index rank_a = 0;
};

LeftQuotient left_quotient(const Matrix& a, const Matrix& b, const ToleranceConfig& tol = {});
RightQuotient right_quotient(const Matrix& a, const Matrix& b, const ToleranceConfig& tol = {});

DouglasResiduals douglas_residuals(const LeftQuotient& lq);

Vector apply_left(const LeftQuotient& lq, const Vector& x);
/// Throws OutOfDomain unless ||(I - B B^+) y|| <= residual_rel * (1 + ||y||).
Vector apply_right(const RightQuotient& rq, const Vector& y);

/// Spectral norm of [B\A]; its square is inf{mu : AA^* <= mu BB^*}.
double left_norm(const LeftQuotient& lq);

/// [B\A]^* = [A^*/B^*].
RightQuotient adjoint_left(const LeftQuotient& lq);
/// [A/B]^* = [B^*\A^*].
LeftQuotient adjoint_right(const RightQuotient& rq);

/// [B\A]^{-1} = [A\B], defined when R(A) = R(B).
LeftQuotient invert_left(const LeftQuotient& lq, const ToleranceConfig& tol = {});
/// [A/B]^{-1} = [B/A], defined when N(A) = N(B).
RightQuotient invert_right(const RightQuotient& rq, const ToleranceConfig& tol = {});

/// Vertical stack [top; bottom].
Matrix stack(const Matrix& top, const Matrix& bottom);

GraphData graph(const Matrix& a, const Matrix& b, const ToleranceConfig& tol = {});

/// R_{A^*,B^*} = (A^*A + B^*B)^{1/2}.
Matrix r_operator(const Matrix& a, const Matrix& b, const ToleranceConfig& tol = {});

/// | ||Jx|| - ||x'|| | where x' is x projected onto R(A^*) + R(B^*) and
/// Jx = (B R^+ x', A R^+ x').
double j_isometry_defect(const Matrix& a, const Matrix& b, const Vector& x, const ToleranceConfig& tol = {});

ClosednessCertificate closedness_certificate(const Matrix& a, const Matrix& b, const ToleranceConfig& tol = {});

} // namespace opquot
