#pragma once

// The end-to-end checks shared by `equant verify-all` and the acceptance
// test binary. Each check records named measurements against limits.

#include <string>
#include <vector>

namespace equant {

struct Measurement {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool at_least = false;  // value >= limit instead of value <= limit

    bool passed() const { return at_least ? value >= limit : value <= limit; }
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::vector<Measurement> measurements;
    std::string error;  // set when the check threw

    bool passed() const;
};

CriterionResult check_cartesian_metric();      // 1
CriterionResult check_variance_formula();      // 2
CriterionResult check_affine_metric();         // 3
CriterionResult check_affine_curvature();      // 4
CriterionResult check_weak_correspondence();   // 5
CriterionResult check_enhanced_action();       // 6
CriterionResult check_contact_transforms();    // 7
CriterionResult check_self_adjointness();      // 8
CriterionResult check_spectral_realization();  // 9

// Criteria 1 through 9 in order.
std::vector<CriterionResult> run_acceptance();

}  // namespace equant
