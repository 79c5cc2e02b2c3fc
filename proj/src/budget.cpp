#include "hofa/budget.hpp"

#include <cstdlib>
#include <limits>

#include "hofa/error.hpp"

namespace hofa {

namespace {
constexpr double kDefaultBudget = 4e9;
}

Budget Budget::standard() {
    if (const char* env = std::getenv("HOFA_BUDGET")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && v > 0) return Budget{v};
    }
    return Budget{kDefaultBudget};
}

Budget Budget::unlimited() { return Budget{std::numeric_limits<double>::infinity()}; }

void Budget::require(double ops, const std::string& what) const {
    if (ops > max_ops) throw BudgetError(what, ops, max_ops);
}

}  // namespace hofa
