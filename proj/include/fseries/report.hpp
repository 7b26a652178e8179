#pragma once

#include <string>
#include <vector>

namespace fseries {

// Outcome of one verified identity: either exact equality or a counterexample.
struct IdentityReport {
    std::string identity;
    std::string parameters;
    bool exact_equal = true;
    std::string counterexample;  // empty when exact_equal

    void record_mismatch(const std::string& where, const std::string& lhs, const std::string& rhs) {
        if (exact_equal) {
            exact_equal = false;
            counterexample = where + ": lhs = " + lhs + ", rhs = " + rhs;
        }
    }
    std::string status() const { return exact_equal ? "exact-equal" : "counterexample"; }
};

}  // namespace fseries
