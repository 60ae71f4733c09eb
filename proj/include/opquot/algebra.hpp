#pragma once

// Sums and products of quotients: parallel sums and the S operators, sum
// theorems (general and shared-denominator), witness-verified products, the
// reverse-order law for pseudoinverses, simplification and the canonical
// decompositions A = [A^*\A^*A], A^+ = [A^*A\A^*].

#include "opquot/quotient.hpp"

namespace opquot {

/// P : Q = P (P + Q)^+ Q for Hermitian PSD P, Q, with its square root S and
/// the projector onto R(S) = R(P) intersected with R(Q).
struct ParallelSumResult {
    Matrix value;
    Matrix s;
    Matrix range_projector;
};

/// Auxiliary factors of the sum theorems: b1 = S B^+, d1 = S D^+ for left
/// sums and b1 = B^+ S, d1 = D^+ S for right sums.
struct SumWitness {
    Matrix b1;
    Matrix d1;
};

struct LeftSum {
    LeftQuotient quotient;
    double defect = 0.0; // ||(I - P_R(S)) (q1 + q2)||
    ParallelSumResult parallel;
    SumWitness witness;
};

struct RightSum {
    RightQuotient quotient;
    double defect = 0.0; // ||(q1 + q2) (I - P_R(S))||
    ParallelSumResult parallel;
    SumWitness witness;
};

/// Witness pair (M, N) for the product theorems. Invalidity is data: the
/// residuals are always filled in.
///   left:  compatibility = ||M D - N A||, kernel = ||P_{N(N)^perp} - P_{R(B)}||_F
///   right: compatibility = ||B M - C N||, kernel = ||P_{R(N)} - P_{N(D)^perp}||_F
struct ProductWitness {
    Matrix m;
    Matrix n;
    bool valid = false;
    double compatibility_residual = 0.0;
    double kernel_residual = 0.0;
};

ParallelSumResult parallel_sum(const Matrix& p, const Matrix& q, const ToleranceConfig& tol = {});

/// [B\A] + [D\C] rewritten as [S\(B1 A + D1 C)] with S = S_{B^*,D^*}. The
/// returned q equals P_R(S) (q1 + q2); `defect` measures the part of the plain
/// sum that falls outside R(S).
LeftSum sum_left(const LeftQuotient& lq1, const LeftQuotient& lq2, const ToleranceConfig& tol = {});

/// [D\A] + [D\B] = [D\(A+B)]. Denominators must be identical matrices.
LeftQuotient sum_left_same_denominator(const LeftQuotient& lq1, const LeftQuotient& lq2,
                                       const ToleranceConfig& tol = {});

/// [A/B] + [C/D] rewritten as [(A B1 + C D1)/S] with S = S_{B,D}; the
/// returned q equals (q1 + q2) P_R(S).
RightSum sum_right(const RightQuotient& rq1, const RightQuotient& rq2, const ToleranceConfig& tol = {});

RightQuotient sum_right_same_denominator(const RightQuotient& rq1, const RightQuotient& rq2,
                                         const ToleranceConfig& tol = {});

/// (ST)^+ = T^+ S^+ when R(T) = N(S)^perp; throws ReverseOrderConditionViolated otherwise.
Matrix pinv_product(const Matrix& s, const Matrix& t, const ToleranceConfig& tol = {});

ProductWitness check_witness_left(const LeftQuotient& lq1, const LeftQuotient& lq2, const Matrix& m,
                                  const Matrix& n, const ToleranceConfig& tol = {});
ProductWitness check_witness_right(const RightQuotient& rq1, const RightQuotient& rq2, const Matrix& m,
                                   const Matrix& n, const ToleranceConfig& tol = {});

/// Candidate N = B^+, M = B^+ A D^+.
ProductWitness auto_witness_left(const LeftQuotient& lq1, const LeftQuotient& lq2, const ToleranceConfig& tol = {});
/// Candidate N = D^+, M = B^+ C D^+ (least-squares solution of B M = C N).
ProductWitness auto_witness_right(const RightQuotient& rq1, const RightQuotient& rq2,
                                  const ToleranceConfig& tol = {});

/// [B\A][D\C] = [NB\MC]. The witness is re-checked; throws InvalidWitness.
LeftQuotient product_left(const LeftQuotient& lq1, const LeftQuotient& lq2, const ProductWitness& w,
                          const ToleranceConfig& tol = {});
/// [A/B][C/D] = [A P_{N(B)^perp} M / DN]. The witness is re-checked.
RightQuotient product_right(const RightQuotient& rq1, const RightQuotient& rq2, const ProductWitness& w,
                            const ToleranceConfig& tol = {});

/// [MB\MA] = [B\A] when N(M)^perp = R(B).
LeftQuotient simplify_left(const Matrix& m, const LeftQuotient& lq, const ToleranceConfig& tol = {});
/// [AM/BM] = [A/B] when R(M) = N(B)^perp.
RightQuotient simplify_right(const Matrix& m, const RightQuotient& rq, const ToleranceConfig& tol = {});

struct CanonicalDecomposition {
    LeftQuotient first;  // [A^*\A^*A], q = A
    LeftQuotient second; // [A^*A\A^*], q = A^+
};

CanonicalDecomposition canonical_decomposition(const Matrix& a, const ToleranceConfig& tol = {});

} // namespace opquot
