#include "hofa/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "hofa/error.hpp"

namespace hofa::io {

namespace fs = std::filesystem;

namespace {

template <class T>
T get(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw DomainError(std::string("field '") + key + "': " + e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) && !j.at(key).is_null() ? get<T>(j, key) : fallback;
}

CyclicDomain domain_of(const json& j) { return CyclicDomain(get<std::int64_t>(j, "n"), get_or<int>(j, "d", 1)); }

json domain_header(const CyclicDomain& dom) { return json{{"n", dom.modulus()}, {"d", dom.arity()}}; }

json cubes_json(const std::vector<Cube>& cs) {
    json a = json::array();
    for (const auto& c : cs) a.push_back(to_json(c));
    return a;
}

json finite(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? json("nan") : json(x > 0 ? "inf" : "-inf");
}

}  // namespace

json read_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw DomainError("cannot open '" + p.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError("'" + p.string() + "' is not valid JSON: " + e.what());
    }
}

void write_json(const fs::path& p, const json& j) {
    std::ofstream out(p);
    if (!out) throw DomainError("cannot write '" + p.string() + "'");
    std::string text = j.dump(1);
    if (text.size() > (std::size_t{1} << 16)) text = j.dump();
    out << text << '\n';
}

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_float()) {
        const double x = j.get<double>();
        if (!std::isfinite(x)) throw DomainError("non-finite rational");
        return Rational(x);
    }
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        try {
            const auto slash = s.find('/');
            if (slash == std::string::npos) return Rational(BigInt(s));
            BigInt p(s.substr(0, slash)), q(s.substr(slash + 1));
            if (q == 0) throw DomainError("zero denominator in '" + s + "'");
            return Rational(p, q);
        } catch (const std::runtime_error&) {
            throw DomainError("cannot parse rational '" + s + "'");
        }
    }
    throw DomainError("expected a rational, got " + j.dump());
}

json rational_to_json(const Rational& q) {
    if (denominator(q) == 1 && abs(numerator(q)) < BigInt(1) << 53) return static_cast<std::int64_t>(numerator(q));
    return numerator(q).str() + "/" + denominator(q).str();
}

json to_json(const GroupFn& f) {
    json j = domain_header(f.domain());
    j["mode"] = to_string(f.mode());
    json vals = json::array();
    switch (f.mode()) {
        case ValueMode::complex:
            for (auto z : f.complex_values()) vals.push_back({z.real(), z.imag()});
            break;
        case ValueMode::real:
            for (auto x : f.real_values()) vals.push_back(x);
            break;
        case ValueMode::rational:
            j["denom"] = f.denom();
            for (auto x : f.numerators()) vals.push_back(x);
            break;
    }
    j["values"] = std::move(vals);
    if (!f.total()) {
        json m = json::array();
        for (auto b : f.mask()) m.push_back(b ? 1 : 0);
        j["mask"] = std::move(m);
    }
    return j;
}

GroupFn function_from_json(const json& j) {
    const CyclicDomain dom = domain_of(j);
    const auto mode = get<std::string>(j, "mode");
    const json& vals = j.contains("values") ? j.at("values") : throw DomainError("missing field 'values'");
    if (!vals.is_array() || static_cast<std::int64_t>(vals.size()) != dom.size())
        throw DomainError("'values' must hold N^d = " + std::to_string(dom.size()) + " entries");
    std::vector<std::uint8_t> mask;
    if (j.contains("mask") && !j.at("mask").is_null()) {
        for (const auto& m : j.at("mask")) {
            if (m.is_boolean()) mask.push_back(m.get<bool>() ? 1 : 0);
            else if (m.is_number_integer()) mask.push_back(m.get<int>() ? 1 : 0);
            else throw DomainError("mask entries must be 0/1");
        }
    }
    try {
        if (mode == "complex") {
            std::vector<cplx> v;
            v.reserve(vals.size());
            for (const auto& x : vals) {
                if (x.is_number()) v.emplace_back(x.get<double>(), 0.0);
                else if (x.is_array() && x.size() == 2) v.emplace_back(x[0].get<double>(), x[1].get<double>());
                else throw DomainError("complex values must be numbers or [re, im] pairs");
            }
            return GroupFn::complex(dom, std::move(v), std::move(mask));
        }
        if (mode == "real") return GroupFn::real(dom, vals.get<std::vector<double>>(), std::move(mask));
        if (mode == "rational")
            return GroupFn::rational(dom, vals.get<std::vector<std::int64_t>>(), get_or<std::int64_t>(j, "denom", 0),
                                     std::move(mask));
    } catch (const json::exception& e) {
        throw DomainError(std::string("bad 'values': ") + e.what());
    }
    throw DomainError("unknown mode '" + mode + "'");
}

GroupFn read_function(const fs::path& p) { return function_from_json(read_json(p)); }

json to_json(const Cube& c) {
    json a = json::array({c.base});
    for (auto h : c.dirs) a.push_back(h);
    return a;
}

Cube cube_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw DomainError("a cube is a non-empty array [x, h_1, .., h_k]");
    Cube c;
    try {
        c.base = j[0].get<std::int64_t>();
        for (std::size_t i = 1; i < j.size(); ++i) c.dirs.push_back(j[i].get<std::int64_t>());
    } catch (const json::exception&) {
        throw DomainError("cube entries must be integers");
    }
    return c;
}

json to_json(const CubeSet& s) {
    json j = domain_header(s.domain());
    j["k"] = s.dim();
    j["cubes"] = cubes_json(s.cubes());
    return j;
}

CubeSet cubeset_from_json(const json& j, const std::optional<CyclicDomain>& dom) {
    const json* arr = &j;
    std::optional<CyclicDomain> d = dom;
    std::optional<int> k;
    if (j.is_object()) {
        d = domain_of(j);
        if (j.contains("k")) k = get<int>(j, "k");
        if (!j.contains("cubes")) throw DomainError("missing field 'cubes'");
        arr = &j.at("cubes");
    }
    if (!d) throw DomainError("a bare cube list needs the domain from the command line");
    if (!arr->is_array()) throw DomainError("'cubes' must be an array");
    if (!k) {
        if (arr->empty()) throw DomainError("cannot infer k from an empty cube list");
        k = static_cast<int>((*arr)[0].size()) - 1;
    }
    CubeSet s(*d, *k);
    for (const auto& t : *arr) {
        Cube c = cube_from_json(t);
        if (c.dim() != *k) throw DomainError("cube " + t.dump() + " does not have dimension " + std::to_string(*k));
        s.insert(c);
    }
    return s;
}

json to_json(const CoefficientField& b) {
    json j = domain_header(b.domain());
    j["k"] = b.dim();
    j["widths"] = b.widths();
    j["bound"] = b.bound();
    json entries = json::array();
    for (std::size_t i = 0; i < b.size(); ++i) entries.push_back({{"cube", to_json(b.cube(i))}, {"b", b.entry(i)}});
    j["entries"] = std::move(entries);
    return j;
}

CoefficientField field_from_json(const json& j) {
    CoefficientField b(domain_of(j), get<int>(j, "k"), get<std::vector<int>>(j, "widths"), get<std::int64_t>(j, "bound"));
    if (j.contains("entries")) {
        for (const auto& e : j.at("entries")) {
            Cube c = cube_from_json(e.at("cube"));
            if (c.dim() != b.dim()) throw DomainError("coefficient entry cube has the wrong dimension");
            b.set(c, get<CubeCoefficients>(e, "b"));
        }
    }
    return b;
}

json to_json(const CubeFunction& rho) {
    json j = domain_header(rho.domain());
    j["k"] = rho.dim();
    j["denom"] = rho.denom();
    json entries = json::array();
    rho.support().for_each([&](const Cube& c) { entries.push_back({{"cube", to_json(c)}, {"value", rho.numerator(c)}}); });
    j["entries"] = std::move(entries);
    return j;
}

CubeFunction cube_function_from_json(const json& j) {
    CubeFunction rho(domain_of(j), get<int>(j, "k"), get_or<std::int64_t>(j, "denom", 1));
    for (const auto& e : j.at("entries")) {
        Cube c = cube_from_json(e.at("cube"));
        if (c.dim() != rho.dim()) throw DomainError("cube function entry has the wrong dimension");
        rho.set(c, get<std::int64_t>(e, "value"));
    }
    return rho;
}

Polynomial polynomial_from_json(const json& j, int vars) {
    if (j.is_array()) {
        if (vars != 1) throw DomainError("coefficient lists describe univariate polynomials only");
        std::vector<Rational> c;
        for (const auto& x : j) c.push_back(rational_from_json(x));
        return Polynomial::univariate(c);
    }
    if (j.is_object() && j.contains("terms")) {
        Polynomial p(vars);
        for (const auto& t : j.at("terms")) p.add_term(get<std::vector<int>>(t, "exps"), rational_from_json(t.at("coeff")));
        return p;
    }
    throw DomainError("a polynomial is a coefficient list or {\"terms\": [...]}");
}

json to_json(const Polynomial& p) {
    json terms = json::array();
    for (const auto& t : p.terms()) terms.push_back({{"exps", t.exps}, {"coeff", rational_to_json(t.coeff)}});
    return json{{"terms", terms}};
}

FilteredGroup group_from_json(const json& j) {
    const auto g = get<std::string>(j, "group");
    if (g == "heisenberg") return FilteredGroup::heisenberg();
    if (g == "abelian") return FilteredGroup::abelian(get<std::vector<int>>(j, "dims"));
    throw DomainError("unknown group law '" + g + "'");
}

namespace {

PolyMap polymap_from_json(const json& j, const FilteredGroup& g, int vars) {
    const json& p = j.contains("p") ? j.at("p") : throw DomainError("missing field 'p'");
    if (!p.is_array() || static_cast<int>(p.size()) != g.dimension())
        throw DomainError("'p' needs one polynomial per coordinate (" + std::to_string(g.dimension()) + ")");
    PolyMap m{g, {}};
    for (const auto& c : p) m.coords.push_back(polynomial_from_json(c, vars));
    return m;
}

void check_dims(const json& j, const FilteredGroup& g) {
    if (j.contains("D") && get<int>(j, "D") != g.dimension())
        throw DomainError("declared D = " + std::to_string(get<int>(j, "D")) + " but the group has dimension " +
                          std::to_string(g.dimension()));
}

Element element_from_json(const json& j, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw DomainError("group element must have " + std::to_string(dim) + " coordinates");
    Element e;
    for (const auto& x : j) e.push_back(rational_from_json(x));
    return e;
}

}  // namespace

NilsequenceDescriptor nilsequence_from_json(const json& j) {
    FilteredGroup g = group_from_json(j);
    check_dims(j, g);
    PolyMap p = polymap_from_json(j, g, 1);
    const json& f = j.contains("F") ? j.at("F") : throw DomainError("missing field 'F'");
    const auto kind = get<std::string>(f, "kind");
    OutputMap out = kind == "exp"    ? OutputMap::exponential(get<std::vector<std::int64_t>>(f, "weights"))
                    : kind == "bump" ? OutputMap::bump(get<std::int64_t>(f, "k"))
                                     : throw DomainError("unknown output map '" + kind + "'");
    NilsequenceDescriptor d{{std::move(p), std::move(out)}, std::nullopt, std::nullopt};
    if (j.contains("K")) d.declared_k = get<double>(j, "K");
    if (j.contains("M")) {
        d.declared_m = get<std::int64_t>(j, "M");
        if (*d.declared_m < g.complexity())
            throw DomainError("declared M = " + std::to_string(*d.declared_m) + " is below the group complexity " +
                              std::to_string(g.complexity()));
    }
    return d;
}

Nilpolynomial nilpolynomial_from_json(const json& j) {
    FilteredGroup g = group_from_json(j);
    check_dims(j, g);
    const int vars = get_or<int>(j, "vars", 1);
    if (vars < 1) throw DomainError("'vars' must be positive");
    Nilpolynomial np{polymap_from_json(j, g, vars), nullptr, polynomial_from_json(j.at("F"), g.dimension()),
                     get<int>(j, "degree"), rational_from_json(j.contains("radius") ? j.at("radius") : json(1))};
    const json& rho = j.contains("rho") ? j.at("rho") : throw DomainError("missing field 'rho'");
    const auto kind = get<std::string>(rho, "kind");
    const PolyMap pm = np.p;
    const int dim = g.dimension();
    if (kind == "project") {
        np.rho = [pm](std::span<const std::int64_t> x) { return pm.group.project(pm.eval(x)); };
    } else if (kind == "project_plus") {
        if (vars != 1) throw DomainError("project_plus offsets need vars = 1");
        const auto period = get<std::int64_t>(rho, "period");
        if (period < 1) throw DomainError("period must be positive");
        std::vector<Element> offs;
        for (const auto& o : rho.at("offsets")) offs.push_back(element_from_json(o, dim));
        if (static_cast<std::int64_t>(offs.size()) != period) throw DomainError("need one offset per residue");
        np.rho = [pm, offs, period](std::span<const std::int64_t> x) {
            Element e = pm.group.project(pm.eval(x));
            const auto& o = offs[static_cast<std::size_t>(mod(x[0], period))];
            for (std::size_t i = 0; i < e.size(); ++i) e[i] += o[i];
            return e;
        };
    } else if (kind == "table") {
        if (vars != 1) throw DomainError("table lifts need vars = 1");
        const auto lo = get<std::int64_t>(rho, "lo");
        std::vector<Element> vals;
        for (const auto& o : rho.at("values")) vals.push_back(element_from_json(o, dim));
        np.rho = [vals, lo](std::span<const std::int64_t> x) {
            const std::int64_t i = x[0] - lo;
            if (i < 0 || i >= static_cast<std::int64_t>(vals.size()))
                throw DomainError("lift table has no entry for x = " + std::to_string(x[0]));
            return vals[static_cast<std::size_t>(i)];
        };
    } else {
        throw DomainError("unknown lift kind '" + kind + "'");
    }
    return np;
}

HierarchyBundle read_bundle(const fs::path& dir) {
    const json m = read_json(dir / "manifest.json");
    HierarchyBundle b;
    auto& h = b.hierarchy;
    h.bound = get<std::int64_t>(m, "M");
    b.delta = get_or<double>(m, "delta", 0.0);
    for (const auto& level : m.at("levels")) {
        LevelFn fn;
        for (const auto& f : level) fn.push_back(read_function(dir / f.get<std::string>()));
        if (fn.empty()) throw DomainError("every level needs at least one component");
        h.levels.push_back(std::move(fn));
    }
    for (const auto& s : m.at("systems")) h.systems.push_back(cubeset_from_json(read_json(dir / s.get<std::string>())));
    for (const auto& level : m.at("coeffs")) {
        std::vector<CoefficientField> fs;
        for (const auto& f : level) fs.push_back(field_from_json(read_json(dir / f.get<std::string>())));
        h.coeffs.push_back(std::move(fs));
    }
    if (get<int>(m, "s") != h.height())
        throw DomainError("manifest s = " + std::to_string(get<int>(m, "s")) + " but " + std::to_string(h.levels.size()) +
                          " levels were given");
    if (m.contains("D") && get<int>(m, "D") != h.dimension())
        throw DomainError("manifest D = " + std::to_string(get<int>(m, "D")) + " but the levels have total width " +
                          std::to_string(h.dimension()));
    if (m.contains("top")) {
        const json& t = m.at("top");
        b.top = read_function(dir / get<std::string>(t, "g"));
        b.top_coeffs = field_from_json(read_json(dir / get<std::string>(t, "coeffs")));
        b.top_system = cubeset_from_json(read_json(dir / get<std::string>(t, "system")));
    }
    return b;
}

void write_bundle(const fs::path& dir, const HierarchyBundle& b) {
    fs::create_directories(dir);
    const auto& h = b.hierarchy;
    json levels = json::array(), systems = json::array(), coeffs = json::array();
    for (std::size_t i = 0; i < h.levels.size(); ++i) {
        json names = json::array();
        for (std::size_t c = 0; c < h.levels[i].size(); ++c) {
            const auto name = "f" + std::to_string(i) + "_" + std::to_string(c) + ".json";
            write_json(dir / name, to_json(h.levels[i][c]));
            names.push_back(name);
        }
        levels.push_back(names);
    }
    for (std::size_t i = 0; i < h.systems.size(); ++i) {
        const auto name = "S" + std::to_string(i) + ".json";
        write_json(dir / name, to_json(h.systems[i]));
        systems.push_back(name);
    }
    for (std::size_t i = 0; i < h.coeffs.size(); ++i) {
        json names = json::array();
        for (std::size_t c = 0; c < h.coeffs[i].size(); ++c) {
            const auto name = "b" + std::to_string(i) + "_" + std::to_string(c) + ".json";
            write_json(dir / name, to_json(h.coeffs[i][c]));
            names.push_back(name);
        }
        coeffs.push_back(names);
    }
    json m{{"s", h.height()}, {"D", h.dimension()}, {"M", h.bound}, {"delta", b.delta},
           {"levels", levels}, {"systems", systems}, {"coeffs", coeffs}};
    if (b.top && b.top_coeffs && b.top_system) {
        write_json(dir / "g.json", to_json(*b.top));
        write_json(dir / "g_coeffs.json", to_json(*b.top_coeffs));
        write_json(dir / "g_system.json", to_json(*b.top_system));
        m["top"] = {{"g", "g.json"}, {"coeffs", "g_coeffs.json"}, {"system", "g_system.json"}};
    }
    write_json(dir / "manifest.json", m);
}

json to_json(const NormReport& r) {
    return json{{"s", r.s}, {"norm", "U^" + std::to_string(r.s + 1)}, {"value", r.value},
                {"method", to_string(r.method)}, {"cost", r.cost}, {"warnings", r.warnings}};
}

json to_json(const CorrelationResult& r) {
    return json{{"degree", r.degree}, {"coeffs", r.coeffs}, {"correlation", r.correlation}, {"guarantee", r.guarantee}};
}

json to_json(const CharacterField& r, std::size_t max_points) {
    json j{{"n", r.n}, {"arity", r.arity}, {"points", r.phi.size()}};
    std::size_t zeros = 0;
    for (auto p : r.phi) zeros += p == 0;
    j["zero_points"] = zeros;
    const std::size_t shown = std::min(max_points, r.phi.size());
    j["phi"] = std::vector<std::int64_t>(r.phi.begin(), r.phi.begin() + static_cast<std::ptrdiff_t>(shown));
    j["magnitude"] = std::vector<double>(r.magnitude.begin(), r.magnitude.begin() + static_cast<std::ptrdiff_t>(shown));
    j["truncated"] = shown < r.phi.size();
    return j;
}

json to_json(const EpsilonReport& r) {
    return json{{"s", r.s},           {"mode", r.exhaustive ? "exhaustive" : "sampled"},
                {"exact", r.exact},   {"eta", r.eta},
                {"count", r.count},   {"defined", r.defined},
                {"total", r.total},   {"epsilon", r.epsilon},
                {"confidence", r.exhaustive ? json(nullptr) : json{{"level", 0.95}, {"half_width", r.half_width}}},
                {"seed", r.seed}};
}

json to_json(const LossReport& r) {
    json j{{"k", r.k},
           {"delta", r.delta},
           {"normalizer", r.normalizer},
           {"violations", r.violations},
           {"valid_pairs", r.valid_pairs},
           {"pass", r.pass}};
    if (!r.upper_violations.empty()) j["upper_violations"] = r.upper_violations;
    if (r.witness) j["witness"] = {{"cube", to_json(*r.witness)}, {"u", r.witness_u}, {"direction", r.witness_direction}};
    return j;
}

json to_json(const InversionReport& r) {
    return json{{"lambda", to_json(r.lambda)},   {"coverage_min", r.coverage_min}, {"agreement", r.agreement},
                {"agreeing", r.agreeing},        {"checked", r.checked},           {"max_abs_lambda", r.max_abs_lambda},
                {"sup_rho", r.sup_rho}};
}

json to_json(const DerivativesReport& r) {
    return json{{"k", r.k},
                {"t", r.t},
                {"bound", r.bound},
                {"exact", r.exact},
                {"eta", r.eta},
                {"checked", r.checked},
                {"missing", r.missing},
                {"undefined", r.undefined},
                {"bound_violations", r.bound_violations},
                {"identity_violations", r.identity_violations},
                {"violating", cubes_json(r.violating)},
                {"pass", r.pass()}};
}

json to_json(const HierarchyReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"level", c.level}, {"component", c.component}, {"report", to_json(c.report)}});
    json j{{"pass", r.pass}, {"checks", checks}};
    if (!r.pass) j["failing"] = {{"level", r.failing_level}, {"component", r.failing_component}};
    return j;
}

json to_json(const TopReport& r) {
    return json{{"pass", r.pass}, {"hierarchy", to_json(r.hierarchy)}, {"top", to_json(r.top)}};
}

json to_json(const StrongReport& r) {
    json upper = json::array();
    for (const auto& u : r.upper) upper.push_back(to_json(u));
    json j{{"pass", r.pass()},
           {"clauses", {r.clause[0], r.clause[1], r.clause[2], r.clause[3]}},
           {"derivatives", to_json(r.derivatives)},
           {"normal_form", r.normal_form},
           {"upper", upper}};
    if (r.normal_form_witness)
        j["normal_form_witness"] = {{"cube", to_json(*r.normal_form_witness)},
                                    {"omega", r.normal_form_detail.omega},
                                    {"coordinate", r.normal_form_detail.coordinate}};
    if (r.cocycle) j["cocycle"] = to_json(*r.cocycle);
    return j;
}

json to_json(const ExtendResult& r) {
    json aux = json::array();
    for (const auto& a : r.aux) {
        json e{{"a", a.a}, {"b", a.b}, {"defined", a.g.defined_count()}};
        if (a.epsilon) e["epsilon"] = to_json(*a.epsilon);
        aux.push_back(e);
    }
    return json{{"shifts", r.shifts},     {"density", r.density}, {"coverage", r.coverage},
                {"extended", to_json(r.extended)}, {"chosen", r.chosen}, {"aux", aux}};
}

json to_json(const PolyMapReport& r) {
    json j{{"pass", r.pass}, {"exhaustive", r.exhaustive}, {"checked", r.checked}};
    if (r.witness) {
        json value = json::array();
        for (const auto& v : r.witness->value) value.push_back(rational_to_json(v));
        j["witness"] = {{"order", r.witness->order}, {"x", r.witness->x}, {"h", r.witness->hs},
                        {"value", value},            {"level", r.witness->level}};
    }
    return j;
}

json to_json(const PeriodicityReport& r) {
    json j{{"periodic", r.periodic}, {"max_gap", r.max_gap}};
    if (r.witness) j["witness"] = *r.witness;
    return j;
}

json to_json(const NilpolyReport& r) {
    json j{{"pass", r.pass()},
           {"points", r.points},
           {"projection_ok", r.projection_ok},
           {"radius_ok", r.radius_ok},
           {"max_radius", rational_to_json(r.max_radius)},
           {"output_ok", r.output_ok},
           {"map_ok", r.map_ok},
           {"map", to_json(r.map)}};
    if (r.projection_witness) j["projection_witness"] = *r.projection_witness;
    if (r.radius_witness) j["radius_witness"] = *r.radius_witness;
    if (r.output_witness)
        j["output_witness"] = {{"order", r.output_witness->order},
                               {"level_sum", r.output_witness->level},
                               {"value", rational_to_json(r.output_witness->value.at(0))}};
    return j;
}

json to_json(const PipelineReport& r) {
    json stages = json::array();
    for (const auto& st : r.stages)
        stages.push_back({{"name", st.name}, {"ok", st.ok}, {"skipped", st.skipped}, {"message", st.message}});
    json j{{"s", r.s}, {"stages", stages}};
    j["norm"] = r.norm ? to_json(*r.norm) : json(nullptr);
    j["phi"] = r.phi ? to_json(*r.phi, 16) : json(nullptr);
    j["epsilon"] = r.epsilon ? to_json(*r.epsilon) : json(nullptr);
    j["out_of_scope"] = r.out_of_scope;
    return j;
}

json to_json(const CubeSystemReport& r) {
    json j{{"ok", r.ok()},
           {"symmetric", r.symmetric},
           {"face_closed", r.face_closed},
           {"dense_extensions", r.dense_extensions},
           {"min_extension_fraction", finite(r.min_extension_fraction)}};
    if (r.symmetry_witness) j["symmetry_witness"] = to_json(*r.symmetry_witness);
    if (r.face_witness) j["face_witness"] = to_json(*r.face_witness);
    if (r.extension_witness)
        j["extension_witness"] = {{"cube", to_json(*r.extension_witness)}, {"count", r.extension_witness_count}};
    return j;
}

json to_json(const ClosureReport& r) {
    return json{{"density_before", r.density_before},
                {"density_after", r.density_after},
                {"density_per_round", r.density_per_round},
                {"result", to_json(r.result)}};
}

}  // namespace hofa::io
