#pragma once

// Derivatives conditions, polynomial hierarchies, bounded coefficient solving,
// the strong derivatives condition, and one random-sumset extension step.

#include <cstdint>
#include <optional>
#include <vector>

#include "hofa/budget.hpp"
#include "hofa/cocycle.hpp"
#include "hofa/coefficients.hpp"
#include "hofa/cubesys.hpp"
#include "hofa/domain.hpp"
#include "hofa/parallel.hpp"

namespace hofa {

/// A vector-valued level function, stored as its scalar components.
using LevelFn = std::vector<GroupFn>;

struct DerivativesReport {
    int k = 0;
    int t = 0;
    std::int64_t bound = 0;
    bool exact = true;          // all inputs rational; identity compared exactly
    double eta = 0.0;           // tolerance in float mode
    std::uint64_t checked = 0;  // cubes of S
    std::uint64_t missing = 0;  // cubes without coefficients
    std::uint64_t undefined = 0;         // cubes with a vertex outside the domain of g or f
    std::uint64_t bound_violations = 0;  // cubes with some ||b(c, omega)||_1 > M
    std::uint64_t identity_violations = 0;
    std::vector<Cube> violating;         // first few failing cubes, in code order
    bool pass() const { return missing == 0 && undefined == 0 && bound_violations == 0 && identity_violations == 0; }
};

struct CheckOptions {
    double eta = 1e-9;
    std::size_t max_witnesses = 16;
    parallel::Options par{};
};

/// Checks  dg(c) = sum_omega (-1)^{|omega|} b(c, omega) . f_{<t}(x + omega.h)  and
/// ||b(c, omega)||_1 <= M on every cube of S. `lower` holds the levels 0 .. t-1.
/// With t = 0 the family is empty and the condition reads dg = 0 on S; a field of
/// total width 0 may then omit entries.
DerivativesReport check_derivatives_condition(const GroupFn& g, const std::vector<LevelFn>& lower,
                                              const CoefficientField& b, int k, int t, std::int64_t bound,
                                              const CubeSet& s, const CheckOptions& opt = {});

/// Levels f_0 .. f_s on a shared domain, cube sets S_0 .. S_{s+1}, and for
/// each level and component the coefficients of its (f, i+1, i, M) condition on S_{i+1}.
struct PolynomialHierarchy {
    std::vector<LevelFn> levels;
    std::vector<CubeSet> systems;
    std::vector<std::vector<CoefficientField>> coeffs;  // [level][component]; level 0 may be empty
    std::int64_t bound = 0;

    int height() const { return static_cast<int>(levels.size()) - 1; }
    std::vector<int> widths() const;
    int dimension() const;
};

struct LevelCheck {
    int level = 0;
    int component = 0;
    DerivativesReport report;
};

struct HierarchyReport {
    std::vector<LevelCheck> checks;
    bool pass = true;
    int failing_level = -1;
    int failing_component = -1;
};

HierarchyReport check_hierarchy(const PolynomialHierarchy& h, const CheckOptions& opt = {});

struct TopReport {
    HierarchyReport hierarchy;
    DerivativesReport top;
    bool pass = true;
};

/// g sits at the top of h: h is checked, and g satisfies the (f, s+1, s, M) condition
/// on `top_set`, where s = number of levels of h.
TopReport check_top(const GroupFn& g, const PolynomialHierarchy& h, const CoefficientField& b, std::int64_t bound,
                    const CubeSet& top_set, const CheckOptions& opt = {});

struct SolveOptions {
    Budget budget = Budget::standard();
    parallel::Options par{};
};

struct SolveReport {
    CoefficientField field;
    std::uint64_t solved = 0;
    std::vector<Cube> failures;  // cubes with no solution within the bound, in code order
    std::uint64_t undefined = 0; // cubes with an undefined vertex (also listed as failures)
};

/// Per cube, the lexicographically smallest graded vector family with every
/// ||b(c, omega)||_1 <= max_bound satisfying the derivatives identity exactly.
/// Requires rational inputs. Failure on a cube certifies no solution within the bound.
SolveReport solve_coefficients(const GroupFn& g, const std::vector<LevelFn>& lower, int k, int t,
                               std::int64_t max_bound, const CubeSet& s, const SolveOptions& opt = {});

/// Level block b_level of a graded field, as a field of width d_level.
CoefficientField level_block(const CoefficientField& b, int level);

struct StrongReport {
    DerivativesReport derivatives;
    bool normal_form = true;
    std::optional<Cube> normal_form_witness;
    NormalFormReport normal_form_detail;
    std::vector<LossReport> upper;     // levels 1 .. t-1, directions merged
    std::optional<LossReport> cocycle; // level t-1; absent when t = 0 or b is not in normal form
    bool clause[4] = {true, true, true, true};
    bool pass() const { return clause[0] && clause[1] && clause[2] && clause[3]; }
};

/// The four clauses: derivatives condition, normal form, upper compatibility of
/// b_1 .. b_{t-1}, and b_{t-1} a generalised k-cocycle of type t-1, all with loss delta.
StrongReport check_strong_derivatives_condition(const GroupFn& g, const std::vector<LevelFn>& lower,
                                                const CoefficientField& b, int k, int t, std::int64_t bound,
                                                double delta, const CubeSet& s, const CheckOptions& opt = {});

struct ExtendOptions {
    double coverage_target = 0.99;
    double min_density = 0.01;
    bool measure_epsilon = true;
    Budget budget = Budget::standard();
    parallel::Options par{};
};

struct AuxFunction {
    std::int64_t a = 0;
    std::int64_t b = 0;
    GroupFn g;  // x -> f(x + a) - f(x + b)
    std::optional<EpsilonReport> epsilon;
};

struct ExtendResult {
    std::vector<std::int64_t> shifts;  // A, increasing
    GroupFn extended;                  // f'(y) = f(y + a) for the smallest valid a
    std::vector<std::int64_t> chosen;  // that a per y, or -1 outside X - A
    std::vector<AuxFunction> aux;      // pairs a < b
    double density = 0.0;              // |X| / |H|
    double coverage = 0.0;             // |X - A| / |H|
};

/// One random-sumset extension step. Throws CoverageError when |X - A| / |H|
/// falls below the target, signalling a retry with a larger A.
ExtendResult extend_domain_step(const GroupFn& f, int s, int a_size, std::uint64_t seed,
                                const ExtendOptions& opt = {});

}  // namespace hofa
