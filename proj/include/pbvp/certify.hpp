#pragma once

#include <optional>

#include "pbvp/conditions.hpp"
#include "pbvp/problems.hpp"

namespace pbvp {

struct CertifyOptions {
    std::optional<double> a, b;          // override the instance's shift
    std::optional<double> delta, Delta;  // override the instance's slacks
    int samples = 200;                   // band members for the invariance checks
    unsigned seed = 7;
};

/// Runs the hypothesis plan the instance's construction promises:
/// bracket defects for every family; defect comparison plus the sampled
/// invariance inequality (primed for the frozen-branch families) under
/// the recorded shift; Lipschitz tube, asymptotic growth, and the
/// one-sided quadratic bounds for split problems.  params records the
/// constants used.  Throws when the instance has no bracket.
Certificate certify_problem(const BuiltProblem& built, const CertifyOptions& opt = {});

}  // namespace pbvp
