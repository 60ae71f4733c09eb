#pragma once

// Independent verifiers and deterministic instance generators. The verifiers
// deliberately avoid the SVD path used by the main library: least squares goes
// through QR with column pivoting, the Douglas norm through Loewner bisection.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "opquot/algebra.hpp"

namespace opquot::oracle {

enum class Mode {
    RangeIncluded,
    KernelIncluded,
    SameRange,
    SameKernel,
    PinvProductPair,
    WitnessCompatible,
};

std::string_view to_string(Mode mode) noexcept;
/// Accepts the snake_case names (`range_included`, ...) and their dashed forms.
std::optional<Mode> parse_mode(std::string_view name) noexcept;

struct InstanceSpec {
    Eigen::Index m = 4;
    Eigen::Index n = 4;
    Eigen::Index p = 4;
    Eigen::Index rank_b = 2;
    std::uint64_t seed = 0;
    Mode mode = Mode::RangeIncluded;
    bool stress = false; // smallest placed singular value 1e-7 instead of 0.1
};

/// A generated instance. Shapes and roles per mode:
///   range_included      B m x p (rank rank_b), A = B X is m x n
///   kernel_included     B p x n (rank rank_b), A = X B is m x n
///   same_range          B m x p, A m x n with R(A) = R(B)  (needs n >= rank_b)
///   same_kernel         B p x n, A m x n with N(A) = N(B)  (needs m >= rank_b)
///   pinv_product_pair   a = S (m x p), b = T (p x n) with R(T) = N(S)^perp
///   witness_compatible  [B\A] with B m x p, A = B X m x n, and [D\C] with
///                       D n x n invertible, C = D Y n x p; `witness` is valid
struct GeneratedInstance {
    Matrix a;
    Matrix b;
    Matrix c;
    Matrix d;
    std::optional<ProductWitness> witness;
};

GeneratedInstance generate(const InstanceSpec& spec);

/// Complex standard normal entries (real and imaginary parts with variance 1/2).
Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
/// rows x cols matrix with orthonormal columns (cols <= rows).
Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
/// U diag(sigma) V^* with sigma placed linearly from 1.0 down to 0.1 (1e-7 under stress).
Matrix random_with_rank(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank, std::mt19937_64& rng,
                        bool stress = false);

/// inf{mu >= 0 : AA^* <= mu BB^*} by bisection; +infinity when R(A) is not in R(B).
double mu_bisection(const Matrix& a, const Matrix& b, const ToleranceConfig& tol = {});

/// Minimum-norm least-squares solution of BX = A via complete orthogonal
/// decomposition (QR with column pivoting). Throws RangeInclusionViolated when
/// BX = A has no exact solution.
Matrix least_squares_douglas(const Matrix& a, const Matrix& b, const ToleranceConfig& tol = {});

struct UniquenessReport {
    int trials = 0;
    Eigen::Index kernel_dim = 0;      // dim N(B)
    int solutions = 0;                // trials where B X = A held
    int alternatives = 0;             // trials with (I - B^+B) W != 0
    int alternatives_violating_c = 0; // alternatives with R(X) outside R(B^*)
    bool consistent = true;           // condition (c) held exactly when (I - B^+B) W = 0
};

/// Draws `trials` random W, forms X = B^+A + (I - B^+B) W and checks that each X
/// solves BX = A while only the W with (I - B^+B) W = 0 keep R(X) inside R(B^*).
UniquenessReport douglas_uniqueness_probe(const Matrix& a, const Matrix& b, int trials, std::uint64_t seed,
                                          const ToleranceConfig& tol = {});

} // namespace opquot::oracle
