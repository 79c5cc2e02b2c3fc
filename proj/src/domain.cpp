#include "hofa/domain.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "hofa/error.hpp"

namespace hofa {

cplx expi(double t) {
    t -= std::floor(t);
    const double a = 2.0 * std::numbers::pi * t;
    return {std::cos(a), std::sin(a)};
}

cplx expi_frac(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw DomainError("expi_frac: denominator must be positive");
    const std::int64_t r = mod(num, den);
    const double a = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
    return {std::cos(a), std::sin(a)};
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::int64_t p = 3; p * p <= n; p += 2)
        if (n % p == 0) return false;
    return true;
}

int popcount(std::uint32_t w) { return std::popcount(w); }

CyclicDomain::CyclicDomain(std::int64_t n, int d) : n_(n), d_(d) {
    if (n < 2) throw DomainError("modulus must be at least 2, got " + std::to_string(n));
    if (d < 1) throw DomainError("arity must be positive, got " + std::to_string(d));
    prime_ = is_prime(n);
    size_ = 1;
    for (int i = 0; i < d; ++i) {
        if (size_ > (std::int64_t{1} << 40) / n) throw DomainError("group too large");
        size_ *= n;
    }
}

std::int64_t CyclicDomain::add(std::int64_t a, std::int64_t b) const {
    if (d_ == 1) {
        const std::int64_t s = a + b;
        return s >= n_ ? s - n_ : s;
    }
    std::int64_t out = 0, place = 1;
    for (int i = 0; i < d_; ++i) {
        std::int64_t s = a % n_ + b % n_;
        if (s >= n_) s -= n_;
        out += s * place;
        place *= n_;
        a /= n_;
        b /= n_;
    }
    return out;
}

std::int64_t CyclicDomain::neg(std::int64_t a) const {
    if (d_ == 1) return a == 0 ? 0 : n_ - a;
    std::int64_t out = 0, place = 1;
    for (int i = 0; i < d_; ++i) {
        const std::int64_t c = a % n_;
        out += (c == 0 ? 0 : n_ - c) * place;
        place *= n_;
        a /= n_;
    }
    return out;
}

std::int64_t CyclicDomain::sub(std::int64_t a, std::int64_t b) const { return add(a, neg(b)); }

std::int64_t CyclicDomain::scale(std::int64_t m, std::int64_t a) const {
    std::int64_t out = 0, place = 1;
    for (int i = 0; i < d_; ++i) {
        const std::int64_t c = a % n_;
        out += mod(static_cast<std::int64_t>((static_cast<__int128>(m) * c) % n_), n_) * place;
        place *= n_;
        a /= n_;
    }
    return out;
}

std::vector<std::int64_t> CyclicDomain::coords(std::int64_t a) const {
    std::vector<std::int64_t> c(static_cast<std::size_t>(d_));
    for (int i = 0; i < d_; ++i) {
        c[static_cast<std::size_t>(i)] = a % n_;
        a /= n_;
    }
    return c;
}

std::int64_t CyclicDomain::index(std::span<const std::int64_t> c) const {
    if (static_cast<int>(c.size()) != d_) throw DomainError("coordinate tuple has wrong length");
    std::int64_t out = 0;
    for (int i = d_ - 1; i >= 0; --i) out = out * n_ + mod(c[static_cast<std::size_t>(i)], n_);
    return out;
}

const char* to_string(ValueMode m) {
    switch (m) {
        case ValueMode::complex: return "complex";
        case ValueMode::real: return "real";
        case ValueMode::rational: return "rational";
    }
    return "?";
}

void GroupFn::check_mask() const {
    if (!mask_.empty() && static_cast<std::int64_t>(mask_.size()) != dom_.size())
        throw DomainError("mask length does not match |H|");
}

GroupFn GroupFn::complex(CyclicDomain dom, std::vector<cplx> values, std::vector<std::uint8_t> mask) {
    if (static_cast<std::int64_t>(values.size()) != dom.size())
        throw DomainError("values length " + std::to_string(values.size()) + " != |H| = " +
                          std::to_string(dom.size()));
    GroupFn f(dom, ValueMode::complex);
    f.cv_ = std::move(values);
    f.mask_ = std::move(mask);
    f.check_mask();
    if (!f.mask_.empty())
        for (std::size_t i = 0; i < f.cv_.size(); ++i)
            if (!f.mask_[i]) f.cv_[i] = 0.0;
    return f;
}

GroupFn GroupFn::real(CyclicDomain dom, std::vector<double> values, std::vector<std::uint8_t> mask) {
    if (static_cast<std::int64_t>(values.size()) != dom.size())
        throw DomainError("values length " + std::to_string(values.size()) + " != |H| = " +
                          std::to_string(dom.size()));
    GroupFn f(dom, ValueMode::real);
    f.rv_ = std::move(values);
    f.mask_ = std::move(mask);
    f.check_mask();
    if (!f.mask_.empty())
        for (std::size_t i = 0; i < f.rv_.size(); ++i)
            if (!f.mask_[i]) f.rv_[i] = 0.0;
    return f;
}

GroupFn GroupFn::rational(CyclicDomain dom, std::vector<std::int64_t> numerators, std::int64_t denom,
                          std::vector<std::uint8_t> mask) {
    if (static_cast<std::int64_t>(numerators.size()) != dom.size())
        throw DomainError("values length " + std::to_string(numerators.size()) + " != |H| = " +
                          std::to_string(dom.size()));
    if (denom == 0) denom = dom.modulus();
    if (denom < 0) throw DomainError("denominator must be positive");
    GroupFn f(dom, ValueMode::rational);
    f.num_ = std::move(numerators);
    f.den_ = denom;
    f.mask_ = std::move(mask);
    f.check_mask();
    if (!f.mask_.empty())
        for (std::size_t i = 0; i < f.num_.size(); ++i)
            if (!f.mask_[i]) f.num_[i] = 0;
    return f;
}

std::int64_t GroupFn::defined_count() const {
    if (mask_.empty()) return dom_.size();
    std::int64_t c = 0;
    for (auto m : mask_) c += m != 0;
    return c;
}

cplx GroupFn::complex_at(std::int64_t i) const {
    const auto k = static_cast<std::size_t>(i);
    switch (mode_) {
        case ValueMode::complex: return cv_[k];
        case ValueMode::real: return rv_[k];
        case ValueMode::rational: return static_cast<double>(num_[k]) / static_cast<double>(den_);
    }
    return 0.0;
}

double GroupFn::real_at(std::int64_t i) const {
    const auto k = static_cast<std::size_t>(i);
    switch (mode_) {
        case ValueMode::complex: throw DomainError("real value requested from a complex function");
        case ValueMode::real: return rv_[k];
        case ValueMode::rational: return static_cast<double>(num_[k]) / static_cast<double>(den_);
    }
    return 0.0;
}

GroupFn GroupFn::restricted(std::vector<std::uint8_t> mask) const {
    if (static_cast<std::int64_t>(mask.size()) != dom_.size()) throw DomainError("mask length does not match |H|");
    if (!mask_.empty())
        for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = mask[i] && mask_[i];
    switch (mode_) {
        case ValueMode::complex: return complex(dom_, cv_, std::move(mask));
        case ValueMode::real: return real(dom_, rv_, std::move(mask));
        case ValueMode::rational: return rational(dom_, num_, den_, std::move(mask));
    }
    throw InternalError("bad mode");
}

GroupFn GroupFn::with_denom(std::int64_t new_denom) const {
    if (mode_ != ValueMode::rational) throw DomainError("with_denom requires a rational function");
    if (new_denom <= 0 || new_denom % den_ != 0)
        throw DomainError("new denominator must be a positive multiple of the old one");
    const std::int64_t m = new_denom / den_;
    std::vector<std::int64_t> v(num_);
    for (auto& x : v) x *= m;
    return rational(dom_, std::move(v), new_denom, mask_);
}

GroupFn mult_derivative(const GroupFn& f, std::int64_t h) {
    if (f.mode() != ValueMode::complex) throw DomainError("mult_derivative requires a complex function");
    if (!f.total()) throw DomainError("mult_derivative requires a total function");
    const auto& dom = f.domain();
    h = mod(h, dom.size());
    std::vector<cplx> out(static_cast<std::size_t>(dom.size()));
    const auto v = f.complex_values();
    for (std::int64_t x = 0; x < dom.size(); ++x)
        out[static_cast<std::size_t>(x)] =
            v[static_cast<std::size_t>(x)] * std::conj(v[static_cast<std::size_t>(dom.add(x, h))]);
    return GroupFn::complex(dom, std::move(out));
}

GroupFn mult_derivative(const GroupFn& f, std::span<const std::int64_t> hs) {
    if (hs.empty()) {
        if (f.mode() != ValueMode::complex) throw DomainError("mult_derivative requires a complex function");
        if (!f.total()) throw DomainError("mult_derivative requires a total function");
        return f;
    }
    GroupFn g = mult_derivative(f, hs[0]);
    for (std::size_t i = 1; i < hs.size(); ++i) g = mult_derivative(g, hs[i]);
    return g;
}

GroupFn add_derivative(const GroupFn& f, std::int64_t h) {
    const auto& dom = f.domain();
    h = mod(h, dom.size());
    const auto n = static_cast<std::size_t>(dom.size());
    std::vector<std::uint8_t> mask;
    if (!f.total()) {
        mask.resize(n);
        for (std::int64_t x = 0; x < dom.size(); ++x)
            mask[static_cast<std::size_t>(x)] = f.defined(x) && f.defined(dom.add(x, h));
    }
    if (f.mode() == ValueMode::rational) {
        std::vector<std::int64_t> out(n);
        for (std::int64_t x = 0; x < dom.size(); ++x)
            out[static_cast<std::size_t>(x)] = f.numerator(x) - f.numerator(dom.add(x, h));
        return GroupFn::rational(dom, std::move(out), f.denom(), std::move(mask));
    }
    if (f.mode() == ValueMode::real) {
        std::vector<double> out(n);
        const auto v = f.real_values();
        for (std::int64_t x = 0; x < dom.size(); ++x)
            out[static_cast<std::size_t>(x)] = v[static_cast<std::size_t>(x)] - v[static_cast<std::size_t>(dom.add(x, h))];
        return GroupFn::real(dom, std::move(out), std::move(mask));
    }
    throw DomainError("add_derivative requires a real or rational function");
}

std::int64_t vertex(const CyclicDomain& dom, const Cube& c, std::uint32_t omega) {
    std::int64_t v = c.base;
    for (int i = 0; i < c.dim(); ++i)
        if (omega >> i & 1u) v = dom.add(v, c.dirs[static_cast<std::size_t>(i)]);
    return v;
}

namespace {
void check_cube(const CyclicDomain& dom, const Cube& c) {
    if (c.dim() > 30) throw DomainError("cube dimension too large");
    auto in = [&](std::int64_t a) { return a >= 0 && a < dom.size(); };
    if (!in(c.base)) throw DomainError("cube basepoint outside the group");
    for (auto h : c.dirs)
        if (!in(h)) throw DomainError("cube direction outside the group");
}
}  // namespace

std::optional<double> cube_derivative(const GroupFn& f, const Cube& c) {
    if (f.mode() == ValueMode::complex) throw DomainError("cube_derivative requires a real function");
    const auto& dom = f.domain();
    check_cube(dom, c);
    const std::uint32_t verts = 1u << c.dim();
    double s = 0.0;
    for (std::uint32_t w = 0; w < verts; ++w) {
        const std::int64_t v = vertex(dom, c, w);
        if (!f.defined(v)) return std::nullopt;
        s += (popcount(w) & 1) ? -f.real_at(v) : f.real_at(v);
    }
    return s;
}

std::optional<std::int64_t> cube_derivative_exact(const GroupFn& f, const Cube& c) {
    if (f.mode() != ValueMode::rational) throw DomainError("cube_derivative_exact requires a rational function");
    const auto& dom = f.domain();
    check_cube(dom, c);
    const std::uint32_t verts = 1u << c.dim();
    std::int64_t s = 0;
    for (std::uint32_t w = 0; w < verts; ++w) {
        const std::int64_t v = vertex(dom, c, w);
        if (!f.defined(v)) return std::nullopt;
        s += (popcount(w) & 1) ? -f.numerator(v) : f.numerator(v);
    }
    return s;
}

Cube face(const CyclicDomain& dom, const Cube& c, std::span<const int> kept, std::span<const int> offset) {
    std::vector<std::uint8_t> used(static_cast<std::size_t>(c.dim()), 0);
    Cube out;
    out.base = c.base;
    for (int i : kept) {
        if (i < 0 || i >= c.dim()) throw DomainError("face: index out of range");
        if (used[static_cast<std::size_t>(i)]) throw DomainError("face: repeated index");
        used[static_cast<std::size_t>(i)] = 1;
        out.dirs.push_back(c.dirs[static_cast<std::size_t>(i)]);
    }
    for (int i : offset) {
        if (i < 0 || i >= c.dim()) throw DomainError("face: index out of range");
        if (used[static_cast<std::size_t>(i)]) throw DomainError("face: offset index must be a removed direction");
        used[static_cast<std::size_t>(i)] = 2;
        out.base = dom.add(out.base, c.dirs[static_cast<std::size_t>(i)]);
    }
    return out;
}

Cube reflect(const CyclicDomain& dom, const Cube& c, int i) {
    if (i < 0 || i >= c.dim()) throw DomainError("reflect: index out of range");
    Cube out = c;
    const auto k = static_cast<std::size_t>(i);
    out.base = dom.add(c.base, c.dirs[k]);
    out.dirs[k] = dom.neg(c.dirs[k]);
    return out;
}

Cube permute(const Cube& c, std::span<const int> sigma) {
    if (static_cast<int>(sigma.size()) != c.dim()) throw DomainError("permute: wrong permutation length");
    std::vector<std::uint8_t> seen(sigma.size(), 0);
    Cube out;
    out.base = c.base;
    for (int j : sigma) {
        if (j < 0 || j >= c.dim() || seen[static_cast<std::size_t>(j)]) throw DomainError("permute: not a permutation");
        seen[static_cast<std::size_t>(j)] = 1;
        out.dirs.push_back(c.dirs[static_cast<std::size_t>(j)]);
    }
    return out;
}

std::uint64_t cube_count(const CyclicDomain& dom, int k) {
    const auto h = static_cast<std::uint64_t>(dom.size());
    std::uint64_t total = 1;
    for (int i = 0; i <= k; ++i) {
        if (total > (std::uint64_t{1} << 62) / h) throw DomainError("cube space too large to index");
        total *= h;
    }
    return total;
}

std::uint64_t cube_code(const CyclicDomain& dom, const Cube& c) {
    const auto h = static_cast<std::uint64_t>(dom.size());
    cube_count(dom, c.dim());
    std::uint64_t code = 0;
    for (int i = c.dim() - 1; i >= 0; --i) code = code * h + static_cast<std::uint64_t>(c.dirs[static_cast<std::size_t>(i)]);
    return code * h + static_cast<std::uint64_t>(c.base);
}

Cube cube_from_code(const CyclicDomain& dom, int k, std::uint64_t code) {
    const auto h = static_cast<std::uint64_t>(dom.size());
    Cube c;
    c.base = static_cast<std::int64_t>(code % h);
    code /= h;
    for (int i = 0; i < k; ++i) {
        c.dirs.push_back(static_cast<std::int64_t>(code % h));
        code /= h;
    }
    return c;
}

}  // namespace hofa
