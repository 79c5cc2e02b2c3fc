#pragma once

// Filtered groups, polynomial maps, nilmanifolds, nilsequences and nilpolynomials.
//
// Two group laws ship: abelian towers R^{d_1} x ... x R^{d_s} (coordinates add,
// level i block at filtration level i) and the Heisenberg group. Heisenberg
// elements are stored by their matrix entries (x, y, z):
//
//     [1 x z]
//     [0 1 y]      (x, y, z)(x', y', z') = (x + x', y + y', z + z' + x y')
//     [0 0 1]
//
// which are the coordinates of the ordered product Y^y X^x Z^z. Levels are
// (x, y) at 1 and z at 2; the lattice is the integer points.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hofa/bracket.hpp"
#include "hofa/domain.hpp"

namespace hofa {

using Element = std::vector<Rational>;

enum class GroupLaw { abelian, heisenberg };
const char* to_string(GroupLaw law);

class FilteredGroup {
public:
    /// Abelian tower with level widths dims (degree = dims.size()).
    static FilteredGroup abelian(std::vector<int> dims);
    static FilteredGroup heisenberg();

    GroupLaw law() const { return law_; }
    int degree() const { return static_cast<int>(dims_.size()); }
    const std::vector<int>& dims() const { return dims_; }
    /// D = d_1 + ... + d_s.
    int dimension() const;
    /// Filtration level of coordinate index c.
    int level_of_coordinate(int c) const;

    Element identity() const;
    Element mul(const Element& a, const Element& b) const;
    Element inv(const Element& a) const;
    /// a^{-1} b^{-1} a b.
    Element commutator(const Element& a, const Element& b) const;
    /// Largest r <= s + 1 with g in G_r; the identity has level s + 1.
    int level(const Element& g) const;
    /// gamma_{ij}^t as an element (i, j 0-based).
    Element generator(int i, int j, const Rational& t = 1) const;
    /// Ordered product of gamma_{ij}^{a_ij} over the coordinate vector a.
    Element from_coordinates(const std::vector<Rational>& a) const;
    /// Inverse of from_coordinates.
    std::vector<Rational> coordinates(const Element& g) const;
    /// Largest |coordinate| over commutators of unit generators; throws InternalError if one is non-integral.
    std::int64_t complexity() const;

    /// Fundamental-domain representative in [0, 1)^D of g Gamma.
    Element project(const Element& g) const;
    bool operator==(const FilteredGroup& o) const { return law_ == o.law_ && dims_ == o.dims_; }

private:
    FilteredGroup(GroupLaw law, std::vector<int> dims) : law_(law), dims_(std::move(dims)) {}
    void check(const Element& g) const;

    GroupLaw law_;
    std::vector<int> dims_;
};

/// ({x}, {y}, {z - x floor(y)}).
Element heisenberg_project(const Rational& x, const Rational& y, const Rational& z);

/// Multivariate polynomial with rational coefficients.
class Polynomial {
public:
    struct Term {
        std::vector<int> exps;
        Rational coeff;
    };

    explicit Polynomial(int vars = 1) : vars_(vars) {}
    static Polynomial constant(const Rational& c, int vars = 1);
    /// Univariate sum coeffs[k] x^k.
    static Polynomial univariate(const std::vector<Rational>& coeffs);

    int vars() const { return vars_; }
    int degree() const;
    const std::vector<Term>& terms() const { return terms_; }
    Polynomial& add_term(std::vector<int> exps, const Rational& coeff);

    Rational eval(std::span<const Rational> x) const;
    Rational eval_int(std::span<const std::int64_t> x) const;

private:
    int vars_;
    std::vector<Term> terms_;
};

/// Map Z^d -> G given coordinate-wise by polynomials.
struct PolyMap {
    FilteredGroup group;
    std::vector<Polynomial> coords;

    int vars() const { return coords.empty() ? 1 : coords.front().vars(); }
    Element eval(std::span<const std::int64_t> x) const;
    Element eval(std::int64_t n) const { return eval(std::span<const std::int64_t>(&n, 1)); }
};

struct DerivativeWitness {
    int order = 0;
    std::vector<std::int64_t> x;
    std::vector<std::vector<std::int64_t>> hs;
    Element value;
    int level = 0;
};

struct PolyMapReport {
    bool pass = true;
    bool exhaustive = true;
    std::uint64_t checked = 0;
    std::optional<DerivativeWitness> witness;
};

struct PolyMapOptions {
    std::int64_t range = 3;            // |x_i|, |h_ij| <= range
    std::uint64_t max_tuples = 2'000'000;  // beyond this, sample
    std::uint64_t samples = 20'000;
    std::uint64_t seed = 1;
};

/// Every order-m derivative Delta_{h_1..h_m} p(x) lies in G_m, m = 1 .. s + 1
/// (order s + 1 must be the identity).
PolyMapReport check_polynomial_map(const PolyMap& p, const PolyMapOptions& opt = {});

/// Output maps on the fundamental domain.
class OutputMap {
public:
    enum class Kind { exponential, bump };

    /// u -> e(sum_i w_i u_i).
    static OutputMap exponential(std::vector<std::int64_t> weights);
    /// u -> sin^2(pi u_b) e(k u_last), u_b = y for Heisenberg and the last coordinate otherwise.
    static OutputMap bump(std::int64_t k);

    Kind kind() const { return kind_; }
    const std::vector<std::int64_t>& weights() const { return weights_; }
    std::int64_t frequency() const { return k_; }
    cplx eval(const FilteredGroup& g, const Element& u) const;
    /// Lipschitz constant for the L1 coordinate metric; infinity when the map is
    /// discontinuous on the quotient.
    double lipschitz(const FilteredGroup& g) const;

private:
    Kind kind_ = Kind::exponential;
    std::vector<std::int64_t> weights_;
    std::int64_t k_ = 0;
};

struct Nilsequence {
    PolyMap p;
    OutputMap f;

    Element orbit(std::int64_t n) const { return p.group.project(p.eval(n)); }
    cplx eval(std::int64_t n) const { return f.eval(p.group, orbit(n)); }
    double lipschitz() const { return f.lipschitz(p.group); }
};

cplx eval_nilsequence(const Nilsequence& psi, std::int64_t n);

struct PeriodicityReport {
    bool periodic = true;
    std::optional<std::int64_t> witness;
    double max_gap = 0.0;
};

/// pi(p(n + N)) = pi(p(n)) for n in [lo, hi], coordinates compared on the circle within tol.
PeriodicityReport is_N_periodic(const Nilsequence& psi, std::int64_t n, std::int64_t lo, std::int64_t hi,
                                double tol = 1e-9);

/// Z^d -> G -> R with an arbitrary bounded lift rho and a polynomial output F.
struct Nilpolynomial {
    PolyMap p;
    std::function<Element(std::span<const std::int64_t>)> rho;
    Polynomial f;         // in the D coordinates
    int degree = 1;
    Rational radius = 1;  // rho stays in the sup-norm ball of this radius

    Rational eval(std::span<const std::int64_t> x) const;
};

Rational eval_nilpolynomial(const Nilpolynomial& g, std::span<const std::int64_t> x);

struct NilpolyReport {
    bool projection_ok = true;
    bool radius_ok = true;
    bool output_ok = true;
    bool map_ok = true;
    std::uint64_t points = 0;
    std::optional<std::vector<std::int64_t>> projection_witness;
    std::optional<std::vector<std::int64_t>> radius_witness;
    Rational max_radius = 0;
    PolyMapReport map;
    std::optional<DerivativeWitness> output_witness;
    bool pass() const { return projection_ok && radius_ok && output_ok && map_ok; }
};

struct NilpolyOptions {
    std::int64_t lo = -20;
    std::int64_t hi = 20;  // every coordinate of x ranges over [lo, hi]
    std::uint64_t output_samples = 2000;
    std::uint64_t seed = 1;
    PolyMapOptions map{};
};

/// (i) pi(p(x)) = pi(rho(x)) on the box, (ii) rho within the radius, (iii) F a
/// polynomial map G -> R of the declared degree (randomised over filtration levels),
/// plus p itself a polynomial map.
NilpolyReport verify_nilpolynomial(const Nilpolynomial& g, const NilpolyOptions& opt = {});

/// Upper bound on the quotient distance: min of ||u gamma_1 - v gamma_2||_1 in coordinates
/// over lattice points whose y entries lie in [-radius, radius]; the x and z entries of
/// the lattice points are optimised exactly. Exact (radius-free) for abelian towers.
double manifold_metric(const FilteredGroup& g, const Element& u, const Element& v, int radius = 2);

double to_double(const Rational& q);

}  // namespace hofa
