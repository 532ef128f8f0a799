#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "blocksplit/spectral.hpp"

namespace blocksplit {

struct CheckResult {
    int criterion = 0;  // 1..14 for acceptance criteria, 0 for supporting checks
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Applied to every transition matrix the checks build; used to confirm
/// that a corrupted matrix is reported.
using MatrixMutator = std::function<void(TransitionMatrix&)>;

struct VerifyOptions {
    MatrixMutator mutate;
    /// Threads for simulation sweeps; 0 picks the hardware count.
    int threads = 0;
    /// When set, the figure sweeps write their CSV and SVG files here.
    std::string artifact_dir;
};

enum class VerifyLevel { quick, full };

/// One acceptance criterion (1..14).
CheckResult run_criterion(int criterion, const VerifyOptions& options = {});

/// Projection identities and intra-class eigenvector relations.
std::vector<CheckResult> supporting_checks(const VerifyOptions& options = {});

/// quick: exact identities, eigenvectors, projections, margins, bounds and
/// the f-min lemma. full: additionally every simulation-based criterion.
std::vector<CheckResult> run_verify(VerifyLevel level, const VerifyOptions& options = {});

std::string format_check(const CheckResult& result);

/// Prints one line per check and returns 0 when all passed, 1 otherwise.
int cmd_verify(VerifyLevel level, std::ostream& out, const VerifyOptions& options = {});

}  // namespace blocksplit
