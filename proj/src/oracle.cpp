#include "opquot/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace opquot::oracle {

namespace {

struct RankedFactors {
    Matrix u;
    RealVector sigma;
    Matrix v;

    Matrix product() const { return u * sigma.asDiagonal() * v.adjoint(); }
};

RankedFactors ranked_factors(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank, std::mt19937_64& rng,
                             bool stress) {
    RankedFactors f;
    f.u = random_orthonormal(rows, rank, rng);
    f.v = random_orthonormal(cols, rank, rng);
    f.sigma.resize(rank);
    const double smallest = stress ? 1e-7 : 0.1;
    for (Eigen::Index i = 0; i < rank; ++i) {
        const double t = rank > 1 ? static_cast<double>(i) / static_cast<double>(rank - 1) : 0.0;
        f.sigma(i) = 1.0 + t * (smallest - 1.0);
    }
    return f;
}

void require_spec(bool ok, const std::string& what) {
    if (!ok) {
        throw Error(ErrorKind::InvalidSpec, what);
    }
}

// Pseudoinverse through the complete orthogonal decomposition, kept separate
// from the SVD-based pseudoinverse of the main path.
Eigen::CompleteOrthogonalDecomposition<Matrix> cod_of(const Matrix& b, const ToleranceConfig& tol) {
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    cod.setThreshold(tol.rank_cutoff(b.rows(), b.cols()));
    cod.compute(b);
    return cod;
}

} // namespace

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
    case Mode::RangeIncluded: return "range_included";
    case Mode::KernelIncluded: return "kernel_included";
    case Mode::SameRange: return "same_range";
    case Mode::SameKernel: return "same_kernel";
    case Mode::PinvProductPair: return "pinv_product_pair";
    case Mode::WitnessCompatible: return "witness_compatible";
    }
    return "unknown";
}

std::optional<Mode> parse_mode(std::string_view name) noexcept {
    std::string key(name);
    std::replace(key.begin(), key.end(), '-', '_');
    for (Mode m : {Mode::RangeIncluded, Mode::KernelIncluded, Mode::SameRange, Mode::SameKernel,
                   Mode::PinvProductPair, Mode::WitnessCompatible}) {
        if (key == to_string(m)) {
            return m;
        }
    }
    return std::nullopt;
}

Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = Scalar(re, im);
        }
    }
    return m;
}

Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    if (cols > rows) {
        throw Error(ErrorKind::InvalidSpec, "cannot place more orthonormal columns than rows");
    }
    const Matrix g = random_gaussian(rows, std::max<Eigen::Index>(cols, 1), rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix q = qr.householderQ() * Matrix::Identity(rows, std::max<Eigen::Index>(cols, 1));
    return q.leftCols(cols);
}

Matrix random_with_rank(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank, std::mt19937_64& rng,
                        bool stress) {
    if (rank < 0 || rank > std::min(rows, cols)) {
        throw Error(ErrorKind::InvalidSpec, "rank exceeds the matrix dimensions");
    }
    return ranked_factors(rows, cols, rank, rng, stress).product();
}

GeneratedInstance generate(const InstanceSpec& spec) {
    require_spec(spec.m > 0 && spec.n > 0 && spec.p > 0, "dimensions must be positive");
    require_spec(spec.rank_b >= 0, "rank must be nonnegative");
    std::mt19937_64 rng(spec.seed);
    const Eigen::Index r = spec.rank_b;
    GeneratedInstance out;

    switch (spec.mode) {
    case Mode::RangeIncluded: {
        require_spec(r <= std::min(spec.m, spec.p), "rank_b must not exceed min(m, p)");
        out.b = random_with_rank(spec.m, spec.p, r, rng, spec.stress);
        out.a = out.b * random_gaussian(spec.p, spec.n, rng);
        break;
    }
    case Mode::KernelIncluded: {
        require_spec(r <= std::min(spec.p, spec.n), "rank_b must not exceed min(p, n)");
        out.b = random_with_rank(spec.p, spec.n, r, rng, spec.stress);
        out.a = random_gaussian(spec.m, spec.p, rng) * out.b;
        break;
    }
    case Mode::SameRange: {
        require_spec(r <= std::min(spec.m, spec.p), "rank_b must not exceed min(m, p)");
        require_spec(spec.n >= r, "same_range needs n >= rank_b");
        const RankedFactors f = ranked_factors(spec.m, spec.p, r, rng, spec.stress);
        out.b = f.product();
        // A = B (V H) = U diag(sigma) H with H of full row rank, so R(A) = R(U) = R(B).
        const Matrix h = random_orthonormal(spec.n, r, rng).adjoint();
        out.a = f.u * f.sigma.asDiagonal() * h;
        break;
    }
    case Mode::SameKernel: {
        require_spec(r <= std::min(spec.p, spec.n), "rank_b must not exceed min(p, n)");
        require_spec(spec.m >= r, "same_kernel needs m >= rank_b");
        const RankedFactors f = ranked_factors(spec.p, spec.n, r, rng, spec.stress);
        out.b = f.product();
        // A = (H U^*) B = H diag(sigma) V^* with H injective, so N(A) = N(V^*) = N(B).
        const Matrix h = random_orthonormal(spec.m, r, rng);
        out.a = h * f.sigma.asDiagonal() * f.v.adjoint();
        break;
    }
    case Mode::PinvProductPair: {
        require_spec(r <= std::min(spec.p, spec.n), "rank_b must not exceed min(p, n)");
        require_spec(spec.m >= r, "pinv_product_pair needs m >= rank_b");
        const RankedFactors t = ranked_factors(spec.p, spec.n, r, rng, spec.stress);
        out.b = t.product();
        // S = F Q^* with Q an orthonormal basis of R(T) and F injective.
        const Matrix f = random_with_rank(spec.m, r, r, rng);
        out.a = f * t.u.adjoint();
        break;
    }
    case Mode::WitnessCompatible: {
        require_spec(r <= std::min(spec.m, spec.p), "rank_b must not exceed min(m, p)");
        out.b = random_with_rank(spec.m, spec.p, r, rng, spec.stress);
        out.a = out.b * random_gaussian(spec.p, spec.n, rng);
        out.d = random_with_rank(spec.n, spec.n, spec.n, rng);
        out.c = out.d * random_gaussian(spec.n, spec.p, rng);

        ProductWitness w;
        w.n = pseudoinverse(out.b);
        w.m = w.n * out.a * out.d.partialPivLu().inverse();
        w.compatibility_residual = norm2(w.m * out.d - w.n * out.a);
        w.kernel_residual =
            projector_distance(projector_onto_corange(w.n), projector_onto_range(out.b));
        w.valid = true;
        out.witness = std::move(w);
        break;
    }
    }
    return out;
}

double mu_bisection(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
    require_same_rows(a, b, "mu bisection");
    if (!range_included(a, b, tol)) {
        return std::numeric_limits<double>::infinity();
    }
    const Matrix aa = a * a.adjoint();
    const Matrix bb = b * b.adjoint();
    if (loewner_leq(aa, Matrix::Zero(aa.rows(), aa.cols()), tol)) {
        return 0.0;
    }

    const SvdFactorization f = svd(b, tol);
    if (f.rank == 0) {
        return std::numeric_limits<double>::infinity();
    }
    const double smallest = f.sigma(f.rank - 1);
    const double ratio = norm2(a) / smallest;
    const double upper = ratio * ratio + 1.0;
    if (!loewner_leq(aa, upper * bb, tol)) {
        return std::numeric_limits<double>::infinity();
    }

    double lo = 0.0;
    double hi = upper;
    const double width = 1e-9 * (1.0 + upper);
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (loewner_leq(aa, mid * bb, tol)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Matrix least_squares_douglas(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
    require_same_rows(a, b, "least squares");
    require_finite(a, "numerator");
    require_finite(b, "denominator");
    const auto cod = cod_of(b, tol);
    Matrix x = cod.solve(a);
    const double residual = (b * x - a).norm();
    if (residual > tol.residual_rel * (1.0 + a.norm())) {
        throw Error(ErrorKind::RangeInclusionViolated, "BX = A has no exact solution", residual);
    }
    return x;
}

UniquenessReport douglas_uniqueness_probe(const Matrix& a, const Matrix& b, int trials, std::uint64_t seed,
                                          const ToleranceConfig& tol) {
    const Matrix base = least_squares_douglas(a, b, tol);
    const auto cod = cod_of(b, tol);
    const Matrix kernel_projector = identity(b.cols()) - cod.pseudoInverse() * b;

    UniquenessReport report;
    report.trials = trials;
    report.kernel_dim = b.cols() - cod.rank();

    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        const Matrix w = random_gaussian(b.cols(), a.cols(), rng);
        const Matrix shift = kernel_projector * w;
        const Matrix x = base + shift;

        if ((b * x - a).norm() <= tol.residual_rel * (1.0 + a.norm() + x.norm())) {
            ++report.solutions;
        }
        const bool alternative = shift.norm() > tol.residual_rel * (1.0 + w.norm());
        const bool condition_c = (kernel_projector * x).norm() <= tol.residual_rel * (1.0 + x.norm());
        if (alternative) {
            ++report.alternatives;
            if (!condition_c) {
                ++report.alternatives_violating_c;
            }
        }
        if (condition_c == alternative) {
            report.consistent = false;
        }
    }
    return report;
}

} // namespace opquot::oracle
