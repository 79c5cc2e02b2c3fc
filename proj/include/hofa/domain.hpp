#pragma once

// Cyclic groups Z_N^d, functions on them, discrete derivatives, and cubes.
//
// Group elements are flat indices in [0, N^d), lexicographic with
// coordinate 0 varying fastest.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hofa {

using cplx = std::complex<double>;

/// e(t) = exp(2 pi i t).
cplx expi(double t);
/// e(num/den), reducing num mod den first so large arguments stay accurate.
cplx expi_frac(std::int64_t num, std::int64_t den);

/// Non-negative remainder.
constexpr std::int64_t mod(std::int64_t a, std::int64_t n) {
    const std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

bool is_prime(std::int64_t n);

class CyclicDomain {
public:
    CyclicDomain(std::int64_t n, int d = 1);

    std::int64_t modulus() const { return n_; }
    int arity() const { return d_; }
    bool prime() const { return prime_; }
    /// |H| = N^d.
    std::int64_t size() const { return size_; }

    std::int64_t add(std::int64_t a, std::int64_t b) const;
    std::int64_t sub(std::int64_t a, std::int64_t b) const;
    std::int64_t neg(std::int64_t a) const;
    /// m * a for an integer scalar m.
    std::int64_t scale(std::int64_t m, std::int64_t a) const;

    std::vector<std::int64_t> coords(std::int64_t a) const;
    std::int64_t index(std::span<const std::int64_t> coords) const;

    bool operator==(const CyclicDomain& o) const { return n_ == o.n_ && d_ == o.d_; }

private:
    std::int64_t n_;
    int d_;
    bool prime_;
    std::int64_t size_;
};

enum class ValueMode { complex, real, rational };

const char* to_string(ValueMode m);

/// Dense function on Z_N^d, optionally partial (defined on a mask).
///
/// Rational mode stores integer numerators over a shared denominator
/// (N by default) so equality tests are exact.
class GroupFn {
public:
    static GroupFn complex(CyclicDomain dom, std::vector<cplx> values,
                           std::vector<std::uint8_t> mask = {});
    static GroupFn real(CyclicDomain dom, std::vector<double> values,
                        std::vector<std::uint8_t> mask = {});
    static GroupFn rational(CyclicDomain dom, std::vector<std::int64_t> numerators,
                            std::int64_t denom = 0, std::vector<std::uint8_t> mask = {});

    const CyclicDomain& domain() const { return dom_; }
    ValueMode mode() const { return mode_; }
    std::int64_t size() const { return dom_.size(); }

    bool total() const { return mask_.empty(); }
    bool defined(std::int64_t i) const { return mask_.empty() || mask_[static_cast<std::size_t>(i)] != 0; }
    std::int64_t defined_count() const;
    const std::vector<std::uint8_t>& mask() const { return mask_; }

    cplx complex_at(std::int64_t i) const;
    double real_at(std::int64_t i) const;
    std::int64_t numerator(std::int64_t i) const { return num_[static_cast<std::size_t>(i)]; }
    std::int64_t denom() const { return den_; }

    std::span<const cplx> complex_values() const { return cv_; }
    std::span<const double> real_values() const { return rv_; }
    std::span<const std::int64_t> numerators() const { return num_; }

    /// Same values, restricted to the given mask (intersected with the current one).
    GroupFn restricted(std::vector<std::uint8_t> mask) const;
    /// Rational function re-expressed over a multiple of its denominator.
    GroupFn with_denom(std::int64_t new_denom) const;

private:
    GroupFn(CyclicDomain dom, ValueMode mode) : dom_(dom), mode_(mode) {}
    void check_mask() const;

    CyclicDomain dom_;
    ValueMode mode_;
    std::vector<cplx> cv_;
    std::vector<double> rv_;
    std::vector<std::int64_t> num_;
    std::int64_t den_ = 1;
    std::vector<std::uint8_t> mask_;
};

/// x -> f(x) conj(f(x+h)). Requires a total complex function.
GroupFn mult_derivative(const GroupFn& f, std::int64_t h);
/// Iterated multiplicative derivative along h_1, ..., h_k.
GroupFn mult_derivative(const GroupFn& f, std::span<const std::int64_t> hs);

/// x -> f(x) - f(x+h), defined where both terms are. Real or rational input.
GroupFn add_derivative(const GroupFn& f, std::int64_t h);

/// A basepoint plus k directions; its vertices are x + omega.h.
struct Cube {
    std::int64_t base = 0;
    std::vector<std::int64_t> dirs;

    int dim() const { return static_cast<int>(dirs.size()); }
    bool operator==(const Cube&) const = default;
};

/// Vertex x + sum_{i in omega} h_i; omega is a bitmask over directions.
std::int64_t vertex(const CyclicDomain& dom, const Cube& c, std::uint32_t omega);

/// sum_omega (-1)^{|omega|} f(x + omega.h); nullopt if a vertex is undefined.
std::optional<double> cube_derivative(const GroupFn& f, const Cube& c);
/// Exact version for rational functions; result is a numerator over f.denom().
std::optional<std::int64_t> cube_derivative_exact(const GroupFn& f, const Cube& c);

/// Face keeping the listed directions, basepoint shifted by the directions in `offset`.
Cube face(const CyclicDomain& dom, const Cube& c, std::span<const int> kept,
          std::span<const int> offset);
/// x -> x + h_i, h_i -> -h_i.
Cube reflect(const CyclicDomain& dom, const Cube& c, int i);
/// Direction j of the result is direction sigma[j] of c.
Cube permute(const Cube& c, std::span<const int> sigma);

int popcount(std::uint32_t w);

/// Dense code base + |H| (h_1 + |H| (h_2 + ...)); throws if it would overflow.
std::uint64_t cube_code(const CyclicDomain& dom, const Cube& c);
Cube cube_from_code(const CyclicDomain& dom, int k, std::uint64_t code);
/// |H|^{k+1}, or throws if it exceeds 2^62.
std::uint64_t cube_count(const CyclicDomain& dom, int k);

}  // namespace hofa
