#pragma once

#include <string>

namespace hofa {

/// Operation-count cap. The default can be overridden with HOFA_BUDGET.
struct Budget {
    double max_ops;

    static Budget standard();
    static Budget unlimited();

    /// Throws BudgetError if `ops` exceeds the cap.
    void require(double ops, const std::string& what) const;
};

}  // namespace hofa
