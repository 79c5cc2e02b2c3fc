#pragma once

// Bracket polynomials, carry bits, and their derivative coefficient identities.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hofa/coefficients.hpp"
#include "hofa/domain.hpp"

namespace hofa {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// floor of an exact rational.
BigInt floor_of(const Rational& q);
/// q - floor(q), in [0, 1).
Rational frac_of(const Rational& q);

/// Immutable expression tree.
///
/// Text form (prefix):
///   (const k)       k/N
///   (rat p q)       p/q
///   (mon a xj)      a * x_j / N, where x = x1 and xj is the j-th coordinate
///   (frac e) (floor e) (add e1 e2 ...) (mul e1 e2 ...)
class BracketExpr {
public:
    enum class Kind { constant, rational, monomial, frac, floor, add, mul };

    static BracketExpr constant(std::int64_t k);
    static BracketExpr rational(Rational q);
    static BracketExpr monomial(std::int64_t a, int var = 0);
    static BracketExpr frac(BracketExpr e);
    static BracketExpr floor(BracketExpr e);
    static BracketExpr add(std::vector<BracketExpr> terms);
    static BracketExpr mul(std::vector<BracketExpr> factors);

    static BracketExpr parse(const std::string& text);
    std::string to_string() const;

    Kind kind() const;
    /// Largest variable index used, or -1.
    int max_var() const;

    Rational eval(std::span<const std::int64_t> x, std::int64_t n) const;

private:
    struct Node;
    explicit BracketExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Evaluates e on all of Z_N^d. The result is rational mode over the smallest
/// power of N clearing every denominator (or the lcm of denominators otherwise).
GroupFn materialize(const BracketExpr& e, const CyclicDomain& dom);

/// 1 iff {ax/N} + {ay/N} >= 1.
int carry_bit(std::int64_t a, std::int64_t x, std::int64_t y, std::int64_t n);

/// Second derivative of g(x) = {ax/N} on the 2-cube (x; h1, h2):
/// carry(a, x, h2) - carry(a, x + h1, h2). Verified exactly; |b| <= 1.
int bracket_linear_coeffs(std::int64_t a, std::int64_t n, const Cube& c);

/// The same identity written as a coefficient field over f_0 = 1:
/// b(c, 0) = carry(a, x, h2), b(c, {1}) = carry(a, x + h1, h2), other omega zero.
CubeCoefficients bracket_linear_field_entry(std::int64_t a, std::int64_t n, const Cube& c);

/// Coefficient vectors b(c, omega) in Z^3 (against the family 1, {ax/N}, {bx/N})
/// for g(x) = {ax/N}{bx/N} on a 3-cube, with ||b(c, omega)||_1 <= 2.
/// Returns the lexicographically smallest valid field; verified exactly.
CubeCoefficients bracket_quadratic_coeffs(std::int64_t a, std::int64_t b, std::int64_t n, const Cube& c);

/// Closed-form expansion (-alpha beta, -beta, -alpha) per omega, where alpha/beta are the
/// carry counts of a(x + omega.h) and b(x + omega.h). Exact but not norm-minimal.
CubeCoefficients bracket_quadratic_expansion(std::int64_t a, std::int64_t b, std::int64_t n, const Cube& c);

/// Exact check of  N^2 dg(c) = sum_omega (-1)^{|omega|} <b(omega), N^2 (1, {av/N}, {bv/N})>.
bool verify_bracket_quadratic(std::int64_t a, std::int64_t b, std::int64_t n, const Cube& c, const CubeCoefficients& coeffs);

}  // namespace hofa
