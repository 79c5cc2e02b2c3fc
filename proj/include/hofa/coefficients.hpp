#pragma once

// Bounded integer coefficient fields b(c, omega) and the exact per-cube search.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hofa/domain.hpp"

namespace hofa {

/// Per-omega vectors for one cube: entry[omega][j], omega a bitmask over directions.
using CubeCoefficients = std::vector<std::vector<std::int64_t>>;

class CoefficientField {
public:
    CoefficientField(CyclicDomain dom, int k, std::vector<int> widths, std::int64_t bound);

    const CyclicDomain& domain() const { return dom_; }
    int dim() const { return k_; }
    const std::vector<int>& widths() const { return widths_; }
    int total_width() const { return width_; }
    std::int64_t bound() const { return bound_; }
    void set_bound(std::int64_t m) { bound_ = m; }
    std::size_t size() const { return codes_.size(); }
    /// Integers per cube: 2^k vectors of total_width() entries, omega-major.
    std::size_t stride() const { return stride_; }

    /// Inserts or replaces the entry for c. Vectors must have total_width() entries,
    /// each fitting in 32 bits.
    void set(const Cube& c, const CubeCoefficients& b);
    bool contains(const Cube& c) const { return raw(c) != nullptr; }
    std::optional<CubeCoefficients> find(const Cube& c) const;
    /// Flat entry for c (entry[omega * total_width() + j]), or nullptr.
    const std::int32_t* raw(const Cube& c) const;

    Cube cube(std::size_t i) const { return cube_from_code(dom_, k_, codes_[i]); }
    CubeCoefficients entry(std::size_t i) const;
    const std::int32_t* raw_entry(std::size_t i) const { return data_.data() + i * stride_; }

    /// Largest L1 norm over all stored vectors.
    std::int64_t max_l1() const;

private:
    std::int64_t slot(std::uint64_t code) const;

    CyclicDomain dom_;
    int k_;
    std::vector<int> widths_;
    int width_ = 0;
    std::size_t stride_ = 0;
    std::int64_t bound_;
    std::vector<std::uint64_t> codes_;
    std::vector<std::int32_t> data_;
    std::vector<std::int32_t> dense_;  // code -> slot + 1, when the universe is small
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Integer vectors of length d with L1 norm <= bound, ordered by (L1, lexicographic).
std::vector<std::vector<std::int64_t>> bounded_vectors(int d, std::int64_t bound);

/// Finds b(omega), omega = 0 .. 2^k - 1, each drawn from `candidates`, with
///   sum_omega (-1)^{|omega|} <b(omega), values[omega]> = target.
/// Returns the lexicographically smallest choice (omega in increasing order, candidate
/// rank within omega), or nullopt when none exists. Values and target are integers
/// in a common unit.
std::optional<CubeCoefficients> solve_cube_coefficients(int k, const std::vector<std::vector<std::int64_t>>& values,
                                                        std::int64_t target,
                                                        const std::vector<std::vector<std::int64_t>>& candidates);

}  // namespace hofa
