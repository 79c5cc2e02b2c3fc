#include "hofa/coefficients.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "hofa/error.hpp"

namespace hofa {

namespace {
constexpr std::uint64_t kDenseIndex = std::uint64_t{1} << 24;
}

CoefficientField::CoefficientField(CyclicDomain dom, int k, std::vector<int> widths, std::int64_t bound)
    : dom_(dom), k_(k), widths_(std::move(widths)), bound_(bound) {
    if (k < 0 || k > 16) throw DomainError("coefficient field dimension out of range");
    for (int w : widths_) {
        if (w < 0) throw DomainError("negative level width");
        width_ += w;
    }
    stride_ = (std::size_t{1} << k_) * static_cast<std::size_t>(width_);
}

std::int64_t CoefficientField::slot(std::uint64_t code) const {
    if (!dense_.empty()) return code < dense_.size() ? dense_[code] - 1 : -1;
    auto it = index_.find(code);
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

void CoefficientField::set(const Cube& c, const CubeCoefficients& b) {
    if (c.dim() != k_) throw DomainError("coefficient entry has wrong cube dimension");
    if (b.size() != (std::size_t{1} << k_)) throw DomainError("coefficient entry needs 2^k vectors");
    for (const auto& v : b) {
        if (static_cast<int>(v.size()) != width_) throw DomainError("coefficient vector has wrong width");
        for (auto x : v)
            if (x < INT32_MIN || x > INT32_MAX) throw DomainError("coefficient does not fit in 32 bits");
    }
    const auto code = cube_code(dom_, c);
    std::int64_t at = slot(code);
    if (at < 0) {
        if (dense_.empty() && index_.empty()) {
            const auto universe = cube_count(dom_, k_);
            if (universe <= kDenseIndex) dense_.assign(universe, 0);
        }
        at = static_cast<std::int64_t>(codes_.size());
        if (!dense_.empty()) dense_[code] = static_cast<std::int32_t>(at + 1);
        else index_.emplace(code, codes_.size());
        codes_.push_back(code);
        data_.resize(data_.size() + stride_);
    }
    auto* out = data_.data() + static_cast<std::size_t>(at) * stride_;
    for (const auto& v : b)
        for (auto x : v) *out++ = static_cast<std::int32_t>(x);
}

const std::int32_t* CoefficientField::raw(const Cube& c) const {
    if (c.dim() != k_) return nullptr;
    const auto at = slot(cube_code(dom_, c));
    return at < 0 ? nullptr : data_.data() + static_cast<std::size_t>(at) * stride_;
}

std::optional<CubeCoefficients> CoefficientField::find(const Cube& c) const {
    const auto at = slot(c.dim() == k_ ? cube_code(dom_, c) : ~std::uint64_t{0});
    if (at < 0) return std::nullopt;
    return entry(static_cast<std::size_t>(at));
}

CubeCoefficients CoefficientField::entry(std::size_t i) const {
    const auto* p = raw_entry(i);
    CubeCoefficients out(std::size_t{1} << k_);
    for (auto& v : out) {
        v.assign(p, p + width_);
        p += width_;
    }
    return out;
}

std::int64_t CoefficientField::max_l1() const {
    std::int64_t m = 0;
    const auto w = static_cast<std::size_t>(width_);
    for (std::size_t i = 0; w && i < data_.size(); i += w) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < w; ++j) s += std::llabs(data_[i + j]);
        m = std::max(m, s);
    }
    return m;
}

std::vector<std::vector<std::int64_t>> bounded_vectors(int d, std::int64_t bound) {
    if (d < 0 || bound < 0) throw DomainError("bounded_vectors: bad parameters");
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> cur(static_cast<std::size_t>(d), -bound);
    if (d == 0) return {{}};
    for (;;) {
        std::int64_t l1 = 0;
        for (auto x : cur) l1 += std::llabs(x);
        if (l1 <= bound) out.push_back(cur);
        int i = d - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == bound) cur[static_cast<std::size_t>(i--)] = -bound;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        if (out.size() > 50'000'000) throw BudgetError("bounded_vectors", static_cast<double>(out.size()), 5e7);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        std::int64_t la = 0, lb = 0;
        for (auto x : a) la += std::llabs(x);
        for (auto x : b) lb += std::llabs(x);
        return la < lb;
    });
    return out;
}

namespace {

constexpr std::int64_t kDenseLimit = std::int64_t{1} << 28;

// Set of integers in [lo, lo + span).
class DenseSet {
public:
    DenseSet(std::int64_t lo, std::int64_t span) : lo_(lo), span_(span), w_(static_cast<std::size_t>((span + 63) / 64), 0) {}

    void insert(std::int64_t v) {
        const std::int64_t i = v - lo_;
        w_[static_cast<std::size_t>(i >> 6)] |= std::uint64_t{1} << (i & 63);
    }
    bool contains(std::int64_t v) const {
        const std::int64_t i = v - lo_;
        if (i < 0 || i >= span_) return false;
        return (w_[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1u;
    }
    /// this |= src shifted by `shift` (value v in src becomes v + shift).
    void or_shifted(const DenseSet& src, std::int64_t shift) {
        // bit index in this for value v: v - lo_ = (u + src.lo_) + shift - lo_ with u the src bit index
        const std::int64_t delta = src.lo_ + shift - lo_;
        const auto nw = static_cast<std::int64_t>(w_.size());
        const auto sw = static_cast<std::int64_t>(src.w_.size());
        const std::int64_t wshift = delta >= 0 ? delta / 64 : -((-delta + 63) / 64);
        const int bshift = static_cast<int>(delta - wshift * 64);
        for (std::int64_t j = 0; j < sw; ++j) {
            const std::uint64_t word = src.w_[static_cast<std::size_t>(j)];
            if (!word) continue;
            const std::int64_t t = j + wshift;
            if (t >= 0 && t < nw) w_[static_cast<std::size_t>(t)] |= word << bshift;
            if (bshift && t + 1 >= 0 && t + 1 < nw) w_[static_cast<std::size_t>(t + 1)] |= word >> (64 - bshift);
        }
        // clear bits beyond span
        if (span_ % 64) w_.back() &= (std::uint64_t{1} << (span_ % 64)) - 1;
    }

private:
    std::int64_t lo_, span_;
    std::vector<std::uint64_t> w_;
};

}  // namespace

std::optional<CubeCoefficients> solve_cube_coefficients(int k, const std::vector<std::vector<std::int64_t>>& values,
                                                        std::int64_t target,
                                                        const std::vector<std::vector<std::int64_t>>& candidates) {
    const std::size_t nv = std::size_t{1} << k;
    if (values.size() != nv) throw DomainError("solve_cube_coefficients: need 2^k value vectors");
    if (candidates.empty()) return std::nullopt;
    const std::size_t d = candidates.front().size();
    for (const auto& v : values)
        if (v.size() != d) throw DomainError("solve_cube_coefficients: width mismatch");

    // contrib[w][r] = (-1)^{|w|} <cand_r, values[w]>
    std::vector<std::vector<std::int64_t>> contrib(nv);
    std::vector<std::vector<std::int64_t>> distinct(nv);
    std::vector<std::int64_t> lo(nv + 1, 0), hi(nv + 1, 0);
    for (std::size_t w = nv; w-- > 0;) {
        const std::int64_t sign = (popcount(static_cast<std::uint32_t>(w)) & 1) ? -1 : 1;
        auto& c = contrib[w];
        c.reserve(candidates.size());
        for (const auto& cand : candidates) {
            __int128 s = 0;
            for (std::size_t j = 0; j < d; ++j) s += static_cast<__int128>(cand[j]) * values[w][j];
            s *= sign;
            if (s > (std::int64_t{1} << 60) || s < -(std::int64_t{1} << 60))
                throw DomainError("solve_cube_coefficients: values too large");
            c.push_back(static_cast<std::int64_t>(s));
        }
        distinct[w] = c;
        std::sort(distinct[w].begin(), distinct[w].end());
        distinct[w].erase(std::unique(distinct[w].begin(), distinct[w].end()), distinct[w].end());
        lo[w] = lo[w + 1] + distinct[w].front();
        hi[w] = hi[w + 1] + distinct[w].back();
    }
    if (target < lo[0] || target > hi[0]) return std::nullopt;

    // reach[w] = sums achievable by omegas w..nv-1
    const bool dense = hi[0] - lo[0] < kDenseLimit;
    std::vector<DenseSet> dreach;
    std::vector<std::set<std::int64_t>> sreach;
    if (dense) {
        dreach.reserve(nv + 1);
        for (std::size_t w = 0; w <= nv; ++w) dreach.emplace_back(lo[w], hi[w] - lo[w] + 1);
        dreach[nv].insert(0);
        for (std::size_t w = nv; w-- > 0;)
            for (auto c : distinct[w]) dreach[w].or_shifted(dreach[w + 1], c);
    } else {
        sreach.resize(nv + 1);
        sreach[nv].insert(0);
        for (std::size_t w = nv; w-- > 0;) {
            for (auto c : distinct[w])
                for (auto r : sreach[w + 1]) sreach[w].insert(r + c);
            if (sreach[w].size() > 20'000'000) throw BudgetError("solve_cube_coefficients reachable set", static_cast<double>(sreach[w].size()), 2e7);
        }
    }
    auto reachable = [&](std::size_t w, std::int64_t v) {
        return dense ? dreach[w].contains(v) : sreach[w].count(v) > 0;
    };
    if (!reachable(0, target)) return std::nullopt;

    CubeCoefficients out(nv);
    std::int64_t remaining = target;
    for (std::size_t w = 0; w < nv; ++w) {
        bool found = false;
        for (std::size_t r = 0; r < candidates.size(); ++r) {
            if (reachable(w + 1, remaining - contrib[w][r])) {
                out[w] = candidates[r];
                remaining -= contrib[w][r];
                found = true;
                break;
            }
        }
        if (!found) throw InternalError("solve_cube_coefficients: reconstruction failed");
    }
    if (remaining != 0) throw InternalError("solve_cube_coefficients: residual after reconstruction");
    return out;
}

}  // namespace hofa
