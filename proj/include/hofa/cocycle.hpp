#pragma once

// The c^u / c_u calculus on cubes: cocycles, inversion, Z_r transforms,
// normal forms, upper compatibility, and generalised cocycles.

#include <cstdint>
#include <optional>
#include <vector>

#include "hofa/coefficients.hpp"
#include "hofa/cubesys.hpp"
#include "hofa/domain.hpp"

namespace hofa {

/// Direction i becomes h_i + u.
Cube cube_up(const CyclicDomain& dom, const Cube& c, std::int64_t u, int i);
/// Basepoint becomes x + h_i, direction i becomes u.
Cube cube_down(const CyclicDomain& dom, const Cube& c, std::int64_t u, int i);

/// Exact partial function on k-cubes: integer numerators over a shared denominator.
class CubeFunction {
public:
    CubeFunction(CyclicDomain dom, int k, std::int64_t denom = 1);
    /// rho(c) = d f(c) on every k-cube, for rational f.
    static CubeFunction derivative_of(const GroupFn& f, int k);

    const CyclicDomain& domain() const { return dom_; }
    int dim() const { return k_; }
    std::int64_t denom() const { return den_; }

    bool defined(const Cube& c) const;
    std::int64_t numerator(const Cube& c) const;
    void set(const Cube& c, std::int64_t numerator);
    void unset(const Cube& c);
    CubeSet support() const;

private:
    CyclicDomain dom_;
    int k_;
    std::int64_t den_;
    std::vector<std::int64_t> num_;
    std::vector<std::uint8_t> def_;
};

struct LossReport {
    int k = 0;
    double delta = 0.0;
    double normalizer = 0.0;                    // |H|^{k+2}
    std::vector<std::uint64_t> violations;      // per direction
    std::vector<std::uint64_t> valid_pairs;     // per direction: c, c^u, c_u all in S
    std::vector<std::uint64_t> upper_violations;  // generalised cocycles only: upper compatibility, per direction
    bool pass = true;
    std::optional<Cube> witness;
    std::int64_t witness_u = 0;
    int witness_direction = -1;

    double conditional_rate(int i) const {
        const auto v = valid_pairs[static_cast<std::size_t>(i)];
        return v ? static_cast<double>(violations[static_cast<std::size_t>(i)]) / static_cast<double>(v) : 0.0;
    }
};

/// Counts (c, u) with c, c^u, c_u in S and rho(c) != rho(c^u) - rho(c_u), per direction.
LossReport is_cocycle(const CubeFunction& rho, const CubeSet& s, double delta);

struct InversionReport {
    GroupFn lambda;
    double coverage_min = 1.0;      // smallest per-basepoint fraction of defined h
    double agreement = 0.0;         // fraction of cubes of S with d lambda(c) = rho(c)
    std::uint64_t agreeing = 0;
    std::uint64_t checked = 0;
    double max_abs_lambda = 0.0;
    double sup_rho = 0.0;
};

/// lambda(x) = average of rho(x; h) over defined h. Throws InsufficientDataError
/// when some basepoint has fewer than `min_coverage` of its h defined.
InversionReport cocycle_invert(const CubeFunction& rho, double min_coverage = 0.5);

/// Z_r(omega, omega') = sum over omega' <= eta <= omega, |eta| <= r of (-1)^{|omega| - |eta|}.
std::int64_t zr_coefficient(std::uint32_t omega, std::uint32_t omega_prime, int r, int k);
/// b'(omega') = sum_omega Z_r(omega, omega') b(omega); asserts b'(omega') = 0 for |omega'| > r.
CubeCoefficients zr_transform(const CubeCoefficients& b, int r, int k);

/// Level widths of a graded vector; block j sits at level first_level + j.
struct Grading {
    std::vector<int> widths;
    int first_level = 0;

    int total() const;
};

struct NormalFormReport {
    bool ok = true;
    std::uint32_t omega = 0;
    int coordinate = -1;
};

/// Level-l block of b(omega) must vanish when |omega| > l.
NormalFormReport is_normal_form(const CubeCoefficients& b, const Grading& g);
/// Applies Z_l to the level-l block.
CubeCoefficients normal_form_transform(const CubeCoefficients& b, const Grading& g, int k);

/// omega_i = 0: b(c^u, omega); omega_i = 1: b(c_u, omega with bit i cleared).
/// Throws DomainError if either cube is missing from the field.
std::vector<std::int64_t> frak_b(const CoefficientField& b, const Cube& c, std::int64_t u, int i, std::uint32_t omega);
CubeCoefficients frak_b_all(const CoefficientField& b, const Cube& c, std::int64_t u, int i);

/// Counts (c, u) (c, c^u, c_u in S) with b(c^u, omega) != b(c_u, omega) for some omega with omega_i = 1.
LossReport is_upper_compatible(const CoefficientField& b, const CubeSet& s, double delta, int i);
/// Normal form is a precondition. Counts (c, u) with b(c, .) != Z_r(frak_b(c, u, i, .)), per direction,
/// and separately the upper-compatibility failures; both counts must stay within the loss.
LossReport is_generalized_cocycle(const CoefficientField& b, const Grading& g, const CubeSet& s, int r, double delta);

/// Field b(c, omega) = Z_r-transform of omega -> lambda(x + omega.h), on every cube of S.
/// Throws DomainError if the transformed values are not integers.
CoefficientField lift_polynomial_field(const GroupFn& lambda, const CubeSet& s, int r);

}  // namespace hofa
