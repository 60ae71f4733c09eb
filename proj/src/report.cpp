#include "opquot/report.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "opquot/oracle.hpp"
#include "opquot/quotient.hpp"

namespace opquot {

namespace {

nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

// Orthogonal projector onto N(q) intersected with R(b).
Matrix kernel_within_range(const Matrix& q, const Matrix& b, const ToleranceConfig& tol) {
    const Matrix range = range_basis(b, tol);
    const Matrix inner = kernel_basis(q * range, tol);
    const Matrix basis = range * inner;
    return basis * basis.adjoint();
}

// Orthogonal projector onto b N(a), assuming N(b) inside N(a). Restricting to
// N(a) within N(b)^perp keeps b injective, so no rank decision is made on
// roundoff-sized images.
Matrix image_of_kernel(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
    const Matrix corange = range_basis(adjoint(b), tol);
    const Matrix inner = kernel_basis(a * corange, tol);
    return projector_onto_range(b * corange * inner, tol);
}

void verify_left(VerificationReport& report, const Matrix& a, const Matrix& b, std::uint64_t seed,
                 const ToleranceConfig& tol) {
    const double rel = tol.residual_rel;
    const double inclusion = range_inclusion_residual(a, b, tol);
    if (!report.add("range_inclusion", inclusion, rel * (1.0 + norm2(a))).pass) {
        return;
    }
    const LeftQuotient lq = left_quotient(a, b, tol);
    const Matrix& q = lq.q();
    const double qn = norm2(q);

    const DouglasResiduals d = douglas_residuals(lq);
    report.add("douglas_factorization", d.factorization, rel * (1.0 + norm2(a)));
    report.add("douglas_kernel", d.kernel, rel * (1.0 + qn));
    report.add("douglas_rank", std::abs(static_cast<double>(d.rank_q - d.rank_a)), 0.0);
    report.add("douglas_corange", d.corange, rel * (1.0 + qn));

    const double mu = oracle::mu_bisection(a, b, tol);
    report.add("douglas_norm", std::abs(qn * qn - mu), 1e-6 * (1.0 + mu));

    const Matrix ls = oracle::least_squares_douglas(a, b, tol);
    report.add("oracle_least_squares", norm2(ls - q), rel * (1.0 + qn));

    const oracle::UniquenessReport u = oracle::douglas_uniqueness_probe(a, b, 8, seed, tol);
    double probe = static_cast<double>(u.alternatives - u.alternatives_violating_c + (u.trials - u.solutions));
    if (!u.consistent || (u.kernel_dim > 0 && u.alternatives == 0)) {
        probe += 1.0;
    }
    report.add("uniqueness_probe", probe, 0.0);

    const RightQuotient dual = adjoint_left(lq);
    report.add("adjoint_duality", norm2(dual.q() - adjoint(q)), 1e-10 * (1.0 + qn));
    report.add("double_adjoint", norm2(adjoint_right(dual).q() - q), 1e-10 * (1.0 + qn));

    std::mt19937_64 rng(seed);
    const Vector x = oracle::random_gaussian(a.cols(), 1, rng).col(0);
    report.add("apply_left", (b * apply_left(lq, x) - a * x).norm(), rel * (1.0 + norm2(a)) * (1.0 + x.norm()));
}

void verify_right(VerificationReport& report, const Matrix& a, const Matrix& b, std::uint64_t seed,
                  const ToleranceConfig& tol) {
    const double rel = tol.residual_rel;
    const double inclusion = kernel_inclusion_residual(b, a, tol);
    if (!report.add("kernel_inclusion", inclusion, rel * (1.0 + norm2(a))).pass) {
        return;
    }
    const RightQuotient rq = right_quotient(a, b, tol);
    const Matrix& q = rq.q();
    const double qn = norm2(q);
    const double dim = static_cast<double>(std::max<Eigen::Index>(b.rows(), 1));

    report.add("defining_identity", norm2(q * b - a), rel * (1.0 + norm2(a)));
    report.add("domain_split", norm2(q - q * rq.domain_projector()), rel * (1.0 + qn));

    report.add("kernel_law", projector_distance(image_of_kernel(a, b, tol), kernel_within_range(q, b, tol)),
               rel * dim);

    const LeftQuotient dual = adjoint_right(rq);
    report.add("adjoint_duality", norm2(dual.q() - adjoint(q)), 1e-10 * (1.0 + qn));
    report.add("double_adjoint", norm2(adjoint_left(dual).q() - q), 1e-10 * (1.0 + qn));

    const GraphData g = graph(a, b, tol);
    const Eigen::Index m = a.rows();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < g.adjoint_graph_basis.cols(); ++k) {
        const Vector x = g.adjoint_graph_basis.col(k).head(m);
        const Vector y = g.adjoint_graph_basis.col(k).tail(b.rows());
        worst = std::max(worst, (a.adjoint() * x - b.adjoint() * y).norm());
    }
    report.add("graph_adjoint", worst, rel * (1.0 + norm2(a) + norm2(b)));
    const double total = static_cast<double>(g.graph_basis.cols() + g.adjoint_graph_basis.cols());
    report.add("graph_dimensions", std::abs(total - static_cast<double>(g.t.rows())), 0.0);

    std::mt19937_64 rng(seed);
    const Vector x = oracle::random_gaussian(a.cols(), 1, rng).col(0);
    report.add("j_isometry", j_isometry_defect(a, b, x, tol), rel * (1.0 + x.norm()));

    const ClosednessCertificate c = closedness_certificate(a, b, tol);
    const double rank_gap = std::abs(static_cast<double>(c.rank - numerical_rank(stack(a, b), tol)));
    report.add("closedness", rank_gap + (c.closed ? 0.0 : 1.0), 0.0);

    const Vector y = b * x;
    report.add("apply_right", (apply_right(rq, y) - a * x).norm(), rel * (1.0 + norm2(a)) * (1.0 + x.norm()));
}

} // namespace

const Check& VerificationReport::add(std::string name, double residual, double tolerance) {
    const bool pass = std::isfinite(residual) && residual <= tolerance;
    checks_.push_back(Check{std::move(name), residual, tolerance, pass});
    return checks_.back();
}

int VerificationReport::passed() const noexcept {
    return static_cast<int>(std::count_if(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; }));
}

int VerificationReport::failed() const noexcept {
    return static_cast<int>(checks_.size()) - passed();
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json checks = nlohmann::json::array();
    for (const Check& c : checks_) {
        checks.push_back({{"name", c.name},
                          {"residual", number_or_null(c.residual)},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    }
    return {{"instance", instance}, {"checks", checks}, {"summary", {{"passed", passed()}, {"failed", failed()}}}};
}

VerificationReport verify_instance(const Matrix& a, const Matrix& b, VerifyMode mode, std::uint64_t seed,
                                   const ToleranceConfig& tol) {
    VerificationReport report;
    report.instance = {{"mode", mode == VerifyMode::Left ? "left" : "right"},
                       {"a_dims", {a.rows(), a.cols()}},
                       {"b_dims", {b.rows(), b.cols()}},
                       {"seed", seed}};
    if (mode == VerifyMode::Left) {
        verify_left(report, a, b, seed, tol);
    } else {
        verify_right(report, a, b, seed, tol);
    }
    return report;
}

} // namespace opquot
