#pragma once

// Verification reports: named residual/tolerance checks that serialise to the
// JSON schema in docs/verification_report.schema.json, plus the invariant
// suites behind the `verify` subcommand.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "opquot/numkernel.hpp"

namespace opquot {

struct Check {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

class VerificationReport {
public:
    nlohmann::json instance = nlohmann::json::object();

    /// Records a check; it passes iff residual <= tolerance (non-finite residuals fail).
    const Check& add(std::string name, double residual, double tolerance);

    const std::vector<Check>& checks() const noexcept { return checks_; }
    int passed() const noexcept;
    int failed() const noexcept;
    bool all_passed() const noexcept { return failed() == 0; }

    nlohmann::json to_json() const;

private:
    std::vector<Check> checks_;
};

enum class VerifyMode { Left, Right };

/// Runs every invariant of [B\A] (left) or [A/B] (right) on one instance. A
/// violated inclusion precondition is recorded as a failed check and ends the suite.
VerificationReport verify_instance(const Matrix& a, const Matrix& b, VerifyMode mode, std::uint64_t seed,
                                   const ToleranceConfig& tol = {});

} // namespace opquot
