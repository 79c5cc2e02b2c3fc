#pragma once

// Cube sets, systems of cubes, closure operators, and approximate-polynomial measurement.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hofa/budget.hpp"
#include "hofa/domain.hpp"
#include "hofa/parallel.hpp"

namespace hofa {

/// Explicit set of k-dimensional cubes on H, stored as a bitmap over H^{k+1}.
class CubeSet {
public:
    static constexpr std::uint64_t kMaxUniverse = 100'000'000;

    CubeSet(CyclicDomain dom, int k);
    static CubeSet full(CyclicDomain dom, int k);

    const CyclicDomain& domain() const { return dom_; }
    int dim() const { return k_; }
    std::uint64_t universe() const { return universe_; }
    std::uint64_t count() const { return count_; }
    double density() const { return static_cast<double>(count_) / static_cast<double>(universe_); }

    bool contains(const Cube& c) const;
    bool contains_code(std::uint64_t code) const { return (bits_[code >> 6] >> (code & 63)) & 1u; }
    /// Returns true if the cube was newly added.
    bool insert(const Cube& c);
    bool insert_code(std::uint64_t code);
    bool erase(const Cube& c);

    /// Calls fn(cube) for every member in increasing code order.
    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                const int b = __builtin_ctzll(word);
                word &= word - 1;
                fn(cube_from_code(dom_, k_, (static_cast<std::uint64_t>(w) << 6) | static_cast<std::uint64_t>(b)));
            }
        }
    }
    std::vector<Cube> cubes() const;

    bool operator==(const CubeSet& o) const { return dom_ == o.dom_ && k_ == o.k_ && bits_ == o.bits_; }
    bool subset_of(const CubeSet& o) const;

private:
    CyclicDomain dom_;
    int k_;
    std::uint64_t universe_;
    std::uint64_t count_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// Levels S_0, ..., S_{s+1} where S_i holds i-dimensional cubes.
struct CubeSystem {
    std::vector<CubeSet> levels;
    double delta = 0.0;

    static CubeSystem full(const CyclicDomain& dom, int s);
    int degree() const { return static_cast<int>(levels.size()) - 2; }
};

struct CubeSystemReport {
    bool symmetric = true;
    bool face_closed = true;
    bool dense_extensions = true;
    std::optional<Cube> symmetry_witness;   // member whose image is missing
    std::optional<Cube> face_witness;       // member with a missing face
    std::optional<Cube> extension_witness;  // member with too few extensions
    std::int64_t extension_witness_count = 0;
    double min_extension_fraction = 1.0;

    bool ok() const { return symmetric && face_closed && dense_extensions; }
};

/// Symmetry (direction swaps and reflections), face closure, and extension counts >= delta |H|.
CubeSystemReport check_cube_system(const std::vector<CubeSet>& levels, double delta);

/// Smallest superset closed under direction permutations and reflections.
CubeSet symmetrize(const CubeSet& s);
/// Adds every face of every level to the level below, top down.
std::vector<CubeSet> face_closure(std::vector<CubeSet> levels);

struct ClosureReport {
    CubeSet result;
    double density_before = 0.0;
    double density_after = 0.0;
    std::vector<double> density_per_round;
};

/// Adds c whenever c^u and c_u are both present for some allowed direction i and u in H.
/// An empty direction list means all directions.
ClosureReport glue_closure(const CubeSet& s, const std::vector<int>& directions = {});
/// Adds (x + u; h) whenever (x; h) is in `lower` and (x; h, u) is in `upper`.
ClosureReport translate_closure(const CubeSet& lower, const CubeSet& upper);

struct EpsilonReport {
    int s = 0;
    bool exhaustive = true;
    bool exact = true;           // rational mode: exact zero test; otherwise |.| < eta
    double eta = 0.0;
    std::uint64_t count = 0;     // tuples with all vertices defined and vanishing derivative
    std::uint64_t defined = 0;   // tuples with all vertices defined
    std::uint64_t total = 0;     // |H|^{s+2}, or the number of samples
    double epsilon = 0.0;        // count / total
    double half_width = 0.0;     // 95% confidence half-width (sampled mode)
    std::uint64_t seed = 0;
};

struct EpsilonOptions {
    Budget budget = Budget::standard();
    std::uint64_t samples = 0;  // 0: exhaustive
    std::uint64_t seed = 0;
    double eta = 1e-9;
    parallel::Options par{};
};

/// Fraction of (x, h) in H^{s+2} with every vertex in the mask and d_h f(x) = 0.
EpsilonReport approx_poly_epsilon(const GroupFn& f, int s, const EpsilonOptions& opt = {});

}  // namespace hofa
