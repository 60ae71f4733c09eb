#include "opquot/algebra.hpp"

#include <algorithm>
#include <string>

namespace opquot {

namespace {

void require_psd(const Matrix& p, const ToleranceConfig& tol, const char* what) {
    require_finite(p, what);
    if (!is_hermitian(p, tol)) {
        throw Error(ErrorKind::NotHermitian, std::string(what) + " is not Hermitian", norm2(p - p.adjoint()));
    }
    const double lambda = min_eigenvalue(p);
    if (lambda < -tol.psd_rel * std::max(norm2(p), 1.0)) {
        throw Error(ErrorKind::NotPositiveSemidefinite, std::string(what) + " has a negative eigenvalue", -lambda);
    }
}

bool within(double residual, double scale, const ToleranceConfig& tol) {
    return residual <= tol.residual_rel * (1.0 + scale);
}

void require_conformable(const Matrix& lhs, const Matrix& rhs, const char* what) {
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": witness products are not conformable");
    }
}

} // namespace

ParallelSumResult parallel_sum(const Matrix& p, const Matrix& q, const ToleranceConfig& tol) {
    if (p.rows() != q.rows() || p.cols() != q.cols() || p.rows() != p.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "parallel sum needs square operands of equal size");
    }
    require_psd(p, tol, "first parallel-sum operand");
    require_psd(q, tol, "second parallel-sum operand");

    ParallelSumResult r;
    const Matrix raw = p * pseudoinverse(p + q, tol) * q;
    r.value = (raw + raw.adjoint()) / 2.0;
    // An empty intersection of ranges leaves pure roundoff in r.value, so the
    // PSD floor is taken relative to the operands.
    r.s = hermitian_psd_sqrt(r.value, tol, norm2(p) + norm2(q));
    r.range_projector = projector_onto_range(r.s, tol);
    return r;
}

LeftSum sum_left(const LeftQuotient& lq1, const LeftQuotient& lq2, const ToleranceConfig& tol) {
    const Matrix& a = lq1.numerator();
    const Matrix& b = lq1.denominator();
    const Matrix& c = lq2.numerator();
    const Matrix& d = lq2.denominator();
    require_same_cols(b, d, "left sum denominators");
    require_same_cols(a, c, "left sum numerators");

    ParallelSumResult ps = parallel_sum(b.adjoint() * b, d.adjoint() * d, tol);
    SumWitness w{ps.s * pseudoinverse(b, tol), ps.s * pseudoinverse(d, tol)};
    const Matrix numerator = w.b1 * a + w.d1 * c;
    LeftQuotient result = left_quotient(numerator, ps.s, tol);

    const Matrix plain = lq1.q() + lq2.q();
    const double defect = norm2(plain - ps.range_projector * plain);
    return LeftSum{std::move(result), defect, std::move(ps), std::move(w)};
}

LeftQuotient sum_left_same_denominator(const LeftQuotient& lq1, const LeftQuotient& lq2,
                                       const ToleranceConfig& tol) {
    const Matrix& d = lq1.denominator();
    if (d.rows() != lq2.denominator().rows() || d.cols() != lq2.denominator().cols() ||
        d != lq2.denominator()) {
        throw Error(ErrorKind::DenominatorMismatch, "left quotients do not share a denominator");
    }
    require_same_cols(lq1.numerator(), lq2.numerator(), "left sum numerators");
    return left_quotient(lq1.numerator() + lq2.numerator(), d, tol);
}

RightSum sum_right(const RightQuotient& rq1, const RightQuotient& rq2, const ToleranceConfig& tol) {
    const Matrix& a = rq1.numerator();
    const Matrix& b = rq1.denominator();
    const Matrix& c = rq2.numerator();
    const Matrix& d = rq2.denominator();
    require_same_rows(b, d, "right sum denominators");
    require_same_rows(a, c, "right sum numerators");

    ParallelSumResult ps = parallel_sum(b * b.adjoint(), d * d.adjoint(), tol);
    SumWitness w{pseudoinverse(b, tol) * ps.s, pseudoinverse(d, tol) * ps.s};
    const Matrix numerator = a * w.b1 + c * w.d1;
    RightQuotient result = right_quotient(numerator, ps.s, tol);

    const Matrix plain = rq1.q() + rq2.q();
    const double defect = norm2(plain - plain * ps.range_projector);
    return RightSum{std::move(result), defect, std::move(ps), std::move(w)};
}

RightQuotient sum_right_same_denominator(const RightQuotient& rq1, const RightQuotient& rq2,
                                         const ToleranceConfig& tol) {
    const Matrix& d = rq1.denominator();
    if (d.rows() != rq2.denominator().rows() || d.cols() != rq2.denominator().cols() ||
        d != rq2.denominator()) {
        throw Error(ErrorKind::DenominatorMismatch, "right quotients do not share a denominator");
    }
    require_same_rows(rq1.numerator(), rq2.numerator(), "right sum numerators");
    return right_quotient(rq1.numerator() + rq2.numerator(), d, tol);
}

Matrix pinv_product(const Matrix& s, const Matrix& t, const ToleranceConfig& tol) {
    if (s.cols() != t.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "product S T is not defined");
    }
    const double distance = projector_distance(projector_onto_range(t, tol), projector_onto_corange(s, tol));
    if (distance > tol.residual_rel * static_cast<double>(std::max<Eigen::Index>(t.rows(), 1))) {
        throw Error(ErrorKind::ReverseOrderConditionViolated, "R(T) differs from N(S)^perp", distance);
    }
    return pseudoinverse(t, tol) * pseudoinverse(s, tol);
}

ProductWitness check_witness_left(const LeftQuotient& lq1, const LeftQuotient& lq2, const Matrix& m,
                                  const Matrix& n, const ToleranceConfig& tol) {
    const Matrix& a = lq1.numerator();
    const Matrix& b = lq1.denominator();
    const Matrix& d = lq2.denominator();
    if (m.cols() != d.rows() || n.cols() != a.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "left witness shapes do not fit M D and N A");
    }
    const Matrix md = m * d;
    const Matrix na = n * a;
    require_conformable(md, na, "left witness");

    ProductWitness w{m, n};
    w.compatibility_residual = norm2(md - na);
    w.kernel_residual = projector_distance(projector_onto_corange(n, tol), projector_onto_range(b, tol));
    w.valid = within(w.compatibility_residual, norm2(na), tol) &&
              w.kernel_residual <= tol.residual_rel * static_cast<double>(std::max<Eigen::Index>(b.rows(), 1));
    return w;
}

ProductWitness check_witness_right(const RightQuotient& rq1, const RightQuotient& rq2, const Matrix& m,
                                   const Matrix& n, const ToleranceConfig& tol) {
    const Matrix& b = rq1.denominator();
    const Matrix& c = rq2.numerator();
    const Matrix& d = rq2.denominator();
    if (m.rows() != b.cols() || n.rows() != c.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "right witness shapes do not fit B M and C N");
    }
    const Matrix bm = b * m;
    const Matrix cn = c * n;
    require_conformable(bm, cn, "right witness");

    ProductWitness w{m, n};
    w.compatibility_residual = norm2(bm - cn);
    w.kernel_residual = projector_distance(projector_onto_range(n, tol), projector_onto_corange(d, tol));
    w.valid = within(w.compatibility_residual, norm2(cn), tol) &&
              w.kernel_residual <= tol.residual_rel * static_cast<double>(std::max<Eigen::Index>(d.cols(), 1));
    return w;
}

ProductWitness auto_witness_left(const LeftQuotient& lq1, const LeftQuotient& lq2, const ToleranceConfig& tol) {
    const Matrix n = pseudoinverse(lq1.denominator(), tol);
    const Matrix m = lq1.q() * pseudoinverse(lq2.denominator(), tol);
    return check_witness_left(lq1, lq2, m, n, tol);
}

ProductWitness auto_witness_right(const RightQuotient& rq1, const RightQuotient& rq2, const ToleranceConfig& tol) {
    const Matrix n = pseudoinverse(rq2.denominator(), tol);
    const Matrix m = pseudoinverse(rq1.denominator(), tol) * (rq2.numerator() * n);
    return check_witness_right(rq1, rq2, m, n, tol);
}

LeftQuotient product_left(const LeftQuotient& lq1, const LeftQuotient& lq2, const ProductWitness& w,
                          const ToleranceConfig& tol) {
    const ProductWitness checked = check_witness_left(lq1, lq2, w.m, w.n, tol);
    if (!checked.valid) {
        throw Error(ErrorKind::InvalidWitness,
                    "MD = NA residual " + std::to_string(checked.compatibility_residual) +
                        ", kernel condition residual " + std::to_string(checked.kernel_residual),
                    std::max(checked.compatibility_residual, checked.kernel_residual));
    }
    return left_quotient(w.m * lq2.numerator(), w.n * lq1.denominator(), tol);
}

RightQuotient product_right(const RightQuotient& rq1, const RightQuotient& rq2, const ProductWitness& w,
                            const ToleranceConfig& tol) {
    const ProductWitness checked = check_witness_right(rq1, rq2, w.m, w.n, tol);
    if (!checked.valid) {
        throw Error(ErrorKind::InvalidWitness,
                    "BM = CN residual " + std::to_string(checked.compatibility_residual) +
                        ", range condition residual " + std::to_string(checked.kernel_residual),
                    std::max(checked.compatibility_residual, checked.kernel_residual));
    }
    const Matrix corange = projector_onto_corange(rq1.denominator(), tol);
    return right_quotient(rq1.numerator() * corange * w.m, rq2.denominator() * w.n, tol);
}

LeftQuotient simplify_left(const Matrix& m, const LeftQuotient& lq, const ToleranceConfig& tol) {
    const Matrix& b = lq.denominator();
    if (m.cols() != b.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "M B is not defined");
    }
    const double distance = projector_distance(projector_onto_corange(m, tol), projector_onto_range(b, tol));
    if (distance > tol.residual_rel * static_cast<double>(std::max<Eigen::Index>(b.rows(), 1))) {
        throw Error(ErrorKind::SimplificationConditionViolated, "N(M)^perp differs from R(B)", distance);
    }
    return left_quotient(m * lq.numerator(), m * b, tol);
}

RightQuotient simplify_right(const Matrix& m, const RightQuotient& rq, const ToleranceConfig& tol) {
    const Matrix& b = rq.denominator();
    if (m.rows() != b.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "B M is not defined");
    }
    const double distance = projector_distance(projector_onto_range(m, tol), projector_onto_corange(b, tol));
    if (distance > tol.residual_rel * static_cast<double>(std::max<Eigen::Index>(b.cols(), 1))) {
        throw Error(ErrorKind::SimplificationConditionViolated, "R(M) differs from N(B)^perp", distance);
    }
    return right_quotient(rq.numerator() * m, b * m, tol);
}

CanonicalDecomposition canonical_decomposition(const Matrix& a, const ToleranceConfig& tol) {
    const Matrix as = a.adjoint();
    const Matrix gram = as * a;
    return CanonicalDecomposition{left_quotient(gram, as, tol), left_quotient(as, gram, tol)};
}

} // namespace opquot
