#include "hofa/bracket.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "hofa/error.hpp"

namespace hofa {

BigInt floor_of(const Rational& q) {
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    BigInt f = num / den;  // truncates toward zero
    if (num < 0 && f * den != num) f -= 1;
    return f;
}

Rational frac_of(const Rational& q) { return q - Rational(floor_of(q)); }

struct BracketExpr::Node {
    Kind kind;
    std::int64_t a = 0;
    int var = 0;
    Rational q;
    std::vector<BracketExpr> kids;
};

BracketExpr BracketExpr::constant(std::int64_t k) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->a = k;
    return BracketExpr(n);
}

BracketExpr BracketExpr::rational(Rational q) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::rational;
    n->q = std::move(q);
    return BracketExpr(n);
}

BracketExpr BracketExpr::monomial(std::int64_t a, int var) {
    if (var < 0) throw DomainError("monomial variable index must be non-negative");
    auto n = std::make_shared<Node>();
    n->kind = Kind::monomial;
    n->a = a;
    n->var = var;
    return BracketExpr(n);
}

BracketExpr BracketExpr::frac(BracketExpr e) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::frac;
    n->kids.push_back(std::move(e));
    return BracketExpr(n);
}

BracketExpr BracketExpr::floor(BracketExpr e) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::floor;
    n->kids.push_back(std::move(e));
    return BracketExpr(n);
}

BracketExpr BracketExpr::add(std::vector<BracketExpr> terms) {
    if (terms.empty()) throw DomainError("add needs at least one term");
    auto n = std::make_shared<Node>();
    n->kind = Kind::add;
    n->kids = std::move(terms);
    return BracketExpr(n);
}

BracketExpr BracketExpr::mul(std::vector<BracketExpr> factors) {
    if (factors.empty()) throw DomainError("mul needs at least one factor");
    auto n = std::make_shared<Node>();
    n->kind = Kind::mul;
    n->kids = std::move(factors);
    return BracketExpr(n);
}

BracketExpr::Kind BracketExpr::kind() const { return node_->kind; }

int BracketExpr::max_var() const {
    int m = node_->kind == Kind::monomial ? node_->var : -1;
    for (const auto& k : node_->kids) m = std::max(m, k.max_var());
    return m;
}

Rational BracketExpr::eval(std::span<const std::int64_t> x, std::int64_t n) const {
    const Node& nd = *node_;
    switch (nd.kind) {
        case Kind::constant: return Rational(nd.a, n);
        case Kind::rational: return nd.q;
        case Kind::monomial:
            if (nd.var >= static_cast<int>(x.size())) throw DomainError("expression uses a variable beyond the point's arity");
            return Rational(BigInt(nd.a) * x[static_cast<std::size_t>(nd.var)], n);
        case Kind::frac: return frac_of(nd.kids[0].eval(x, n));
        case Kind::floor: return Rational(floor_of(nd.kids[0].eval(x, n)));
        case Kind::add: {
            Rational s = 0;
            for (const auto& k : nd.kids) s += k.eval(x, n);
            return s;
        }
        case Kind::mul: {
            Rational p = 1;
            for (const auto& k : nd.kids) p *= k.eval(x, n);
            return p;
        }
    }
    throw InternalError("bad bracket node");
}

namespace {

std::string var_name(int v) { return v == 0 ? "x" : "x" + std::to_string(v + 1); }

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    BracketExpr parse_all() {
        BracketExpr e = expr();
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw DomainError("bracket expression: " + what + " at offset " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    std::string atom() {
        skip();
        const std::size_t b = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' && s_[pos_] != ')') ++pos_;
        if (b == pos_) fail("expected a token");
        return s_.substr(b, pos_ - b);
    }
    std::int64_t integer() {
        const std::string t = atom();
        char* end = nullptr;
        const long long v = std::strtoll(t.c_str(), &end, 10);
        if (*end != '\0') fail("expected an integer, got '" + t + "'");
        return v;
    }
    int variable() {
        const std::string t = atom();
        if (t == "x") return 0;
        if (t.size() >= 2 && t[0] == 'x') {
            char* end = nullptr;
            const long v = std::strtol(t.c_str() + 1, &end, 10);
            if (*end == '\0' && v >= 1) return static_cast<int>(v - 1);
        }
        fail("expected a variable x, x1, x2, ..., got '" + t + "'");
    }
    void expect(char c) {
        skip();
        if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    BracketExpr expr() {
        expect('(');
        const std::string head = atom();
        BracketExpr out = BracketExpr::constant(0);
        if (head == "const") out = BracketExpr::constant(integer());
        else if (head == "rat") {
            const auto p = integer();
            const auto q = integer();
            if (q == 0) fail("zero denominator");
            out = BracketExpr::rational(Rational(p, q));
        } else if (head == "mon") {
            const auto a = integer();
            out = BracketExpr::monomial(a, variable());
        } else if (head == "frac") out = BracketExpr::frac(expr());
        else if (head == "floor") out = BracketExpr::floor(expr());
        else if (head == "add" || head == "mul") {
            std::vector<BracketExpr> kids;
            while (!peek(')')) kids.push_back(expr());
            if (kids.empty()) fail(head + " needs arguments");
            out = head == "add" ? BracketExpr::add(std::move(kids)) : BracketExpr::mul(std::move(kids));
        } else fail("unknown operator '" + head + "'");
        expect(')');
        return out;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

BracketExpr BracketExpr::parse(const std::string& text) { return Parser(text).parse_all(); }

std::string BracketExpr::to_string() const {
    const Node& nd = *node_;
    std::ostringstream os;
    switch (nd.kind) {
        case Kind::constant: os << "(const " << nd.a << ")"; break;
        case Kind::rational:
            os << "(rat " << boost::multiprecision::numerator(nd.q) << " " << boost::multiprecision::denominator(nd.q) << ")";
            break;
        case Kind::monomial: os << "(mon " << nd.a << " " << var_name(nd.var) << ")"; break;
        case Kind::frac: os << "(frac " << nd.kids[0].to_string() << ")"; break;
        case Kind::floor: os << "(floor " << nd.kids[0].to_string() << ")"; break;
        case Kind::add:
        case Kind::mul:
            os << (nd.kind == Kind::add ? "(add" : "(mul");
            for (const auto& k : nd.kids) os << " " << k.to_string();
            os << ")";
            break;
    }
    return os.str();
}

GroupFn materialize(const BracketExpr& e, const CyclicDomain& dom) {
    if (e.max_var() >= dom.arity()) throw DomainError("expression uses more variables than the domain arity");
    const std::int64_t n = dom.modulus();
    std::vector<Rational> vals(static_cast<std::size_t>(dom.size()));
    BigInt l = 1;
    for (std::int64_t i = 0; i < dom.size(); ++i) {
        const auto x = dom.coords(i);
        vals[static_cast<std::size_t>(i)] = e.eval(x, n);
        l = boost::multiprecision::lcm(l, BigInt(boost::multiprecision::denominator(vals[static_cast<std::size_t>(i)])));
    }
    BigInt den = n;
    while (den % l != 0 && den < BigInt(1) << 62) den *= n;
    if (den % l != 0) den = l;
    if (den > BigInt(1) << 62) throw DomainError("materialize: denominator too large for rational mode");
    std::vector<std::int64_t> num(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const Rational scaled = vals[i] * Rational(den);
        const BigInt k = boost::multiprecision::numerator(scaled);
        if (boost::multiprecision::denominator(scaled) != 1 || boost::multiprecision::abs(k) > BigInt(1) << 62)
            throw DomainError("materialize: value not representable");
        num[i] = static_cast<std::int64_t>(k);
    }
    return GroupFn::rational(dom, std::move(num), static_cast<std::int64_t>(den));
}

int carry_bit(std::int64_t a, std::int64_t x, std::int64_t y, std::int64_t n) {
    if (n < 1) throw DomainError("carry_bit: modulus must be positive");
    const auto r = [&](std::int64_t t) { return mod(static_cast<std::int64_t>((static_cast<__int128>(a) * t) % n), n); };
    return r(x) + r(y) >= n ? 1 : 0;
}

namespace {
std::int64_t residue(std::int64_t a, std::int64_t v, std::int64_t n) {
    return mod(static_cast<std::int64_t>((static_cast<__int128>(a) * v) % n), n);
}

void require_dim(const Cube& c, int k, const char* what) {
    if (c.dim() != k) throw DomainError(std::string(what) + ": cube must have dimension " + std::to_string(k));
}
}  // namespace

int bracket_linear_coeffs(std::int64_t a, std::int64_t n, const Cube& c) {
    require_dim(c, 2, "bracket_linear_coeffs");
    const CyclicDomain dom(n);
    const std::int64_t x = mod(c.base, n), h1 = mod(c.dirs[0], n), h2 = mod(c.dirs[1], n);
    const int b = carry_bit(a, x, h2, n) - carry_bit(a, dom.add(x, h1), h2, n);
    // exact: numerators of the second derivative over N
    const std::int64_t s = residue(a, x, n) - residue(a, dom.add(x, h1), n) - residue(a, dom.add(x, h2), n) +
                           residue(a, dom.add(dom.add(x, h1), h2), n);
    if (s != static_cast<std::int64_t>(b) * n || b < -1 || b > 1)
        throw InternalError("bracket linear identity failed on a cube");
    return b;
}

CubeCoefficients bracket_linear_field_entry(std::int64_t a, std::int64_t n, const Cube& c) {
    require_dim(c, 2, "bracket_linear_field_entry");
    bracket_linear_coeffs(a, n, c);
    const CyclicDomain dom(n);
    const std::int64_t x = mod(c.base, n), h1 = mod(c.dirs[0], n), h2 = mod(c.dirs[1], n);
    CubeCoefficients out(4, std::vector<std::int64_t>{0});
    out[0][0] = carry_bit(a, x, h2, n);
    out[1][0] = carry_bit(a, dom.add(x, h1), h2, n);
    return out;
}

namespace {

// target N^2 dg(c) in units 1/N^2 divided by N (always integral), and family values in units of 1/N
struct QuadraticData {
    std::int64_t target;                            // units 1/N
    std::vector<std::vector<std::int64_t>> values;  // [omega] = (N, av mod N, bv mod N)
};

QuadraticData quadratic_data(std::int64_t a, std::int64_t b, std::int64_t n, const Cube& c) {
    require_dim(c, 3, "bracket_quadratic_coeffs");
    const CyclicDomain dom(n);
    QuadraticData q;
    __int128 t = 0;
    Cube cc{mod(c.base, n), {mod(c.dirs[0], n), mod(c.dirs[1], n), mod(c.dirs[2], n)}};
    for (std::uint32_t w = 0; w < 8; ++w) {
        const std::int64_t v = vertex(dom, cc, w);
        const std::int64_t ra = residue(a, v, n), rb = residue(b, v, n);
        const __int128 term = static_cast<__int128>(ra) * rb;
        t += (popcount(w) & 1) ? -term : term;
        q.values.push_back({n, ra, rb});
    }
    if (t % n != 0) throw InternalError("bracket quadratic: third derivative not a multiple of 1/N");
    q.target = static_cast<std::int64_t>(t / n);
    return q;
}

}  // namespace

bool verify_bracket_quadratic(std::int64_t a, std::int64_t b, std::int64_t n, const Cube& c, const CubeCoefficients& coeffs) {
    const auto q = quadratic_data(a, b, n, c);
    if (coeffs.size() != 8) return false;
    __int128 s = 0;
    for (std::uint32_t w = 0; w < 8; ++w) {
        if (coeffs[w].size() != 3) return false;
        __int128 dot = 0;
        for (int j = 0; j < 3; ++j) dot += static_cast<__int128>(coeffs[w][static_cast<std::size_t>(j)]) * q.values[w][static_cast<std::size_t>(j)];
        s += (popcount(w) & 1) ? -dot : dot;
    }
    return s == q.target;
}

CubeCoefficients bracket_quadratic_expansion(std::int64_t a, std::int64_t b, std::int64_t n, const Cube& c) {
    require_dim(c, 3, "bracket_quadratic_expansion");
    const CyclicDomain dom(n);
    const std::int64_t x = mod(c.base, n);
    std::int64_t ha[3], hb[3];
    for (int j = 0; j < 3; ++j) {
        ha[j] = residue(a, mod(c.dirs[static_cast<std::size_t>(j)], n), n);
        hb[j] = residue(b, mod(c.dirs[static_cast<std::size_t>(j)], n), n);
    }
    CubeCoefficients out(8);
    Cube cc{x, {mod(c.dirs[0], n), mod(c.dirs[1], n), mod(c.dirs[2], n)}};
    for (std::uint32_t w = 0; w < 8; ++w) {
        const std::int64_t v = vertex(dom, cc, w);
        std::int64_t sa = residue(a, x, n), sb = residue(b, x, n);
        for (int j = 0; j < 3; ++j)
            if (w >> j & 1u) {
                sa += ha[j];
                sb += hb[j];
            }
        // carry counts: {a v / N} = {ax/N} + sum {a h_j / N} - alpha
        const std::int64_t alpha = (sa - residue(a, v, n)) / n;
        const std::int64_t beta = (sb - residue(b, v, n)) / n;
        out[w] = {-alpha * beta, -beta, -alpha};
    }
    if (!verify_bracket_quadratic(a, b, n, c, out)) throw InternalError("bracket quadratic expansion failed on a cube");
    return out;
}

CubeCoefficients bracket_quadratic_coeffs(std::int64_t a, std::int64_t b, std::int64_t n, const Cube& c) {
    static const auto candidates = bounded_vectors(3, 2);
    const auto q = quadratic_data(a, b, n, c);
    auto sol = solve_cube_coefficients(3, q.values, q.target, candidates);
    if (!sol) throw InternalError("bracket quadratic: no coefficient field with L1 norm <= 2 on a cube");
    if (!verify_bracket_quadratic(a, b, n, c, *sol)) throw InternalError("bracket quadratic: solution failed verification");
    return *sol;
}

}  // namespace hofa
