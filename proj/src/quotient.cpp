#include "opquot/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace opquot {

namespace {

void require_length(const Vector& x, Eigen::Index n, const char* what) {
    if (x.size() != n) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": vector length " + std::to_string(x.size()) + ", expected " +
                        std::to_string(n));
    }
}

} // namespace

LeftQuotient left_quotient(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
    tol.validate();
    require_finite(a, "numerator");
    require_finite(b, "denominator");
    require_same_rows(a, b, "left quotient");
    const double residual = range_inclusion_residual(a, b, tol);
    if (residual > tol.residual_rel * (1.0 + norm2(a))) {
        throw Error(ErrorKind::RangeInclusionViolated, "R(A) is not contained in R(B); residual " +
                                                           std::to_string(residual),
                    residual);
    }
    Matrix q = pseudoinverse(b, tol) * a;
    return LeftQuotient(a, b, std::move(q), tol);
}

RightQuotient right_quotient(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
    tol.validate();
    require_finite(a, "numerator");
    require_finite(b, "denominator");
    require_same_cols(a, b, "right quotient");
    const double residual = kernel_inclusion_residual(b, a, tol);
    if (residual > tol.residual_rel * (1.0 + norm2(a))) {
        throw Error(ErrorKind::KernelInclusionViolated, "N(B) is not contained in N(A); residual " +
                                                            std::to_string(residual),
                    residual);
    }
    Matrix q = a * pseudoinverse(b, tol);
    Matrix domain = projector_onto_range(b, tol);
    return RightQuotient(a, b, std::move(q), std::move(domain), tol);
}

DouglasResiduals douglas_residuals(const LeftQuotient& lq) {
    const Matrix& a = lq.numerator();
    const Matrix& b = lq.denominator();
    const Matrix& q = lq.q();
    const ToleranceConfig& tol = lq.tol();

    DouglasResiduals r;
    r.factorization = norm2(b * q - a);
    r.kernel = norm2(q - q * projector_onto_corange(a, tol));
    r.corange = norm2(q - projector_onto_corange(b, tol) * q);
    r.rank_q = numerical_rank(q, tol);
    r.rank_a = numerical_rank(a, tol);
    return r;
}

Vector apply_left(const LeftQuotient& lq, const Vector& x) {
    require_length(x, lq.q().cols(), "apply_left");
    return lq.q() * x;
}

Vector apply_right(const RightQuotient& rq, const Vector& y) {
    require_length(y, rq.q().cols(), "apply_right");
    const double outside = (y - rq.domain_projector() * y).norm();
    if (outside > rq.tol().residual_rel * (1.0 + y.norm())) {
        throw Error(ErrorKind::OutOfDomain, "vector is not in R(B), the domain of [A/B]", outside);
    }
    return rq.q() * y;
}

double left_norm(const LeftQuotient& lq) {
    return norm2(lq.q());
}

RightQuotient adjoint_left(const LeftQuotient& lq) {
    return right_quotient(adjoint(lq.numerator()), adjoint(lq.denominator()), lq.tol());
}

LeftQuotient adjoint_right(const RightQuotient& rq) {
    return left_quotient(adjoint(rq.numerator()), adjoint(rq.denominator()), rq.tol());
}

LeftQuotient invert_left(const LeftQuotient& lq, const ToleranceConfig& tol) {
    const Matrix& a = lq.numerator();
    const Matrix& b = lq.denominator();
    const double forward = range_inclusion_residual(a, b, tol);
    const double backward = range_inclusion_residual(b, a, tol);
    if (forward > tol.residual_rel * (1.0 + norm2(a)) || backward > tol.residual_rel * (1.0 + norm2(b))) {
        throw Error(ErrorKind::RangesNotEqual, "R(A) and R(B) differ", std::max(forward, backward));
    }
    return left_quotient(b, a, tol);
}

RightQuotient invert_right(const RightQuotient& rq, const ToleranceConfig& tol) {
    const Matrix& a = rq.numerator();
    const Matrix& b = rq.denominator();
    const double forward = kernel_inclusion_residual(b, a, tol);
    const double backward = kernel_inclusion_residual(a, b, tol);
    if (forward > tol.residual_rel * (1.0 + norm2(a)) || backward > tol.residual_rel * (1.0 + norm2(b))) {
        throw Error(ErrorKind::KernelsNotEqual, "N(A) and N(B) differ", std::max(forward, backward));
    }
    return right_quotient(b, a, tol);
}

Matrix stack(const Matrix& top, const Matrix& bottom) {
    require_same_cols(top, bottom, "stack");
    Matrix out(top.rows() + bottom.rows(), top.cols());
    out << top, bottom;
    return out;
}

GraphData graph(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
    require_same_cols(a, b, "graph");
    GraphData g;
    g.t = stack(b, a);
    g.graph_basis = range_basis(g.t, tol);

    // N(T^*) holds pairs (u, w) with B^*u + A^*w = 0; V maps them to (-w, u).
    const Matrix null = kernel_basis(adjoint(g.t), tol);
    const Eigen::Index p = b.rows();
    const Eigen::Index m = a.rows();
    g.adjoint_graph_basis.resize(m + p, null.cols());
    g.adjoint_graph_basis.topRows(m) = -null.bottomRows(m);
    g.adjoint_graph_basis.bottomRows(p) = null.topRows(p);
    return g;
}

Matrix r_operator(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
    require_same_cols(a, b, "R operator");
    return hermitian_psd_sqrt(a.adjoint() * a + b.adjoint() * b, tol);
}

double j_isometry_defect(const Matrix& a, const Matrix& b, const Vector& x, const ToleranceConfig& tol) {
    require_length(x, a.cols(), "J isometry");
    const Matrix r = r_operator(a, b, tol);
    const Matrix basis = range_basis(r, tol);
    const Vector projected = basis * (basis.adjoint() * x);
    const Vector pre = pseudoinverse(r, tol) * projected;
    const double jx = std::sqrt((b * pre).squaredNorm() + (a * pre).squaredNorm());
    return std::abs(jx - projected.norm());
}

ClosednessCertificate closedness_certificate(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
    ClosednessCertificate c;
    c.rank = numerical_rank(stack(a, b), tol);
    c.closed = true;
    return c;
}

} // namespace opquot
