// hofa: command-line front end.
//
// Exit codes: 0 success, 2 parameter or precondition error, 3 budget exceeded,
// 4 internal consistency failure.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hofa/bracket.hpp"
#include "hofa/cocycle.hpp"
#include "hofa/error.hpp"
#include "hofa/fourier.hpp"
#include "hofa/generators.hpp"
#include "hofa/gowers.hpp"
#include "hofa/hierarchy.hpp"
#include "hofa/inverse.hpp"
#include "hofa/io.hpp"
#include "hofa/nil.hpp"
#include "hofa/pipeline.hpp"
#include "hofa/random.hpp"

using namespace hofa;
using io::json;

namespace {

struct Global {
    unsigned jobs = 0;
    bool json_stdout = false;
    std::string json_out;
    std::string csv;
    std::optional<double> budget;
    std::optional<std::uint64_t> seed;

    parallel::Options par() const { return {.jobs = jobs}; }
    Budget cap() const { return budget ? Budget{*budget} : Budget::standard(); }
    std::uint64_t need_seed(const std::string& what) const {
        if (!seed) throw DomainError(what + " is randomized: --seed is required");
        return *seed;
    }
};

using Rows = std::vector<std::vector<std::string>>;

struct Output {
    Output() = default;
    explicit Output(json r) : report(std::move(r)) {}
    json report;
    std::vector<std::string> csv_header;
    Rows csv_rows;
    int exit_code = 0;
};

std::string num(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

void render(std::ostream& os, const json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
        const json& v = it.value();
        os << pad << it.key() << ':';
        if (v.is_object()) {
            os << '\n';
            render(os, v, indent + 2);
        } else if (v.is_array() && !v.empty() && v.front().is_object()) {
            os << '\n';
            std::size_t i = 0;
            for (const auto& e : v) {
                if (i == 8) {
                    os << pad << "  ... (" << v.size() - 8 << " more)\n";
                    break;
                }
                os << pad << "  [" << i++ << "]\n";
                render(os, e, indent + 4);
            }
        } else if (v.is_array() && v.size() > 12) {
            json head(v.begin(), v.begin() + 12);
            os << ' ' << head.dump() << " ... (" << v.size() << " entries)\n";
        } else {
            os << ' ' << v.dump() << '\n';
        }
    }
}

void write_csv(const std::string& path, const std::vector<std::string>& header, const Rows& rows) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write '" + path + "'");
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
    }
}

json input_summary(const GroupFn& f, const std::string& path) {
    return json{{"file", path}, {"n", f.domain().modulus()}, {"d", f.domain().arity()}, {"mode", to_string(f.mode())},
                {"defined", f.defined_count()}};
}

std::vector<std::int64_t> parse_ints(const std::string& s) {
    std::vector<std::int64_t> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoll(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw DomainError("expected a comma-separated integer list, got '" + s + "'");
        }
    }
    return v;
}

json json_arg(const std::string& s) {
    // a literal JSON value or the path of a JSON file
    try {
        return json::parse(s);
    } catch (const json::exception&) {
        return io::read_json(s);
    }
}

CubeFunction load_rho(const std::string& rho, const std::string& from, int k) {
    if (!rho.empty() && !from.empty()) throw DomainError("give either --rho or --from, not both");
    if (!rho.empty()) return io::cube_function_from_json(io::read_json(rho));
    if (from.empty()) throw DomainError("one of --rho or --from is required");
    if (k < 0) throw DomainError("--from needs -k");
    return CubeFunction::derivative_of(io::read_function(from), k);
}

CubeSet load_system(const std::string& path, const CyclicDomain& dom, int k) {
    if (path.empty()) return CubeSet::full(dom, k);
    CubeSet s = io::cubeset_from_json(io::read_json(path), dom);
    if (s.dim() != k) throw DomainError("cube set has dimension " + std::to_string(s.dim()) + ", expected " + std::to_string(k));
    return s;
}

std::vector<LevelFn> load_levels(const std::vector<std::string>& specs) {
    std::vector<LevelFn> levels;
    for (const auto& spec : specs) {
        LevelFn fn;
        std::stringstream ss(spec);
        std::string file;
        while (std::getline(ss, file, ',')) fn.push_back(io::read_function(file));
        if (fn.empty()) throw DomainError("empty --lower level");
        levels.push_back(std::move(fn));
    }
    return levels;
}

json values_json(const std::vector<cplx>& v) {
    json a = json::array();
    for (auto z : v) a.push_back({z.real(), z.imag()});
    return a;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hofa: higher-order Fourier analysis toolkit on Z_N"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--jobs", g.jobs, "worker threads (0 = all cores); results do not depend on it");
    app.add_flag("--json", g.json_stdout, "print the JSON report instead of text");
    app.add_option("--json-out", g.json_out, "also write the JSON report to this file");
    app.add_option("--emit-csv", g.csv, "write a CSV table (spectra, fields, values) to this file");
    app.add_option("--budget", g.budget, "operation-count cap (default: HOFA_BUDGET or built-in)");
    app.add_option("--seed", g.seed, "seed for randomized commands (mandatory there)");

    std::function<Output()> run;
    auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };

    // norm
    std::string in;
    int s = -1;
    std::string method = "fast";
    auto* norm = sub("norm", "Gowers norm ||f||_{U^{s+1}}");
    norm->add_option("-i,--input", in, "function file")->required();
    norm->add_option("-s", s, "degree s (computes U^{s+1})")->required();
    norm->add_option("--method", method, "naive | recursive | ssf | fourier | fast");
    norm->callback([&] {
        run = [&] {
            auto f = io::read_function(in);
            auto r = gowers(f, s, norm_method_from_string(method), {g.cap(), g.par()});
            Output o{json{{"input", input_summary(f, in)}, {"norm", io::to_json(r)}}};
            o.csv_header = {"s", "method", "value"};
            o.csv_rows = {{std::to_string(r.s), to_string(r.method), num(r.value)}};
            return o;
        };
    });

    // u2inv
    auto* u2 = sub("u2inv", "largest Fourier coefficient and its correlation guarantee");
    u2->add_option("-i,--input", in, "function file")->required();
    u2->callback([&] {
        run = [&] {
            auto f = io::read_function(in);
            auto r = u2_inverse(f);
            Output o{json{{"input", input_summary(f, in)}, {"result", io::to_json(r)},
                          {"guarantee_holds", r.correlation >= r.guarantee - 1e-12}}};
            auto spec = dft(f);
            o.csv_header = {"a", "re", "im", "abs"};
            for (std::size_t a = 0; a < spec.coeffs.size(); ++a)
                o.csv_rows.push_back({std::to_string(a), num(spec.coeffs[a].real()), num(spec.coeffs[a].imag()),
                                      num(std::abs(spec.coeffs[a]))});
            return o;
        };
    });

    // polysearch
    auto* ps = sub("polysearch", "exhaustive best polynomial phase of degree <= s");
    ps->add_option("-i,--input", in, "function file")->required();
    ps->add_option("-s", s, "degree")->required();
    ps->callback([&] {
        run = [&] {
            auto f = io::read_function(in);
            auto r = poly_phase_search(f, s, g.cap(), g.par());
            return Output{json{{"input", input_summary(f, in)}, {"result", io::to_json(r)}}};
        };
    });

    // phifield
    bool with_eps = false;
    auto* pf = sub("phifield", "character field Phi on Z_N^{s-2}");
    pf->add_option("-i,--input", in, "function file")->required();
    pf->add_option("-s", s, "degree (>= 3)")->required();
    pf->add_flag("--epsilon", with_eps, "also measure Phi's approximate-polynomial epsilon at degree s");
    std::string phi_out;
    pf->add_option("-o,--output", phi_out, "write Phi as a rational function file");
    pf->callback([&] {
        run = [&] {
            auto f = io::read_function(in);
            auto r = character_field(f, s, g.cap(), g.par());
            Output o{json{{"input", input_summary(f, in)}, {"phi", io::to_json(r)}}};
            if (with_eps) o.report["epsilon"] = io::to_json(approx_poly_epsilon(r.as_function(), s, {.budget = g.cap(), .par = g.par()}));
            if (!phi_out.empty()) io::write_json(phi_out, io::to_json(r.as_function()));
            o.csv_header = {"point", "phi", "magnitude", "energy"};
            for (std::size_t i = 0; i < r.phi.size(); ++i)
                o.csv_rows.push_back({std::to_string(i), std::to_string(r.phi[i]), num(r.magnitude[i]), num(r.energy[i])});
            return o;
        };
    });

    // approx
    std::uint64_t samples = 0;
    double eta = 1e-9;
    auto* ap = sub("approx", "approximate-polynomial epsilon of a partial real function");
    ap->add_option("-i,--input", in, "function file (real or rational)")->required();
    ap->add_option("-s", s, "degree")->required();
    ap->add_option("--samples", samples, "sample this many tuples instead of counting exhaustively (needs --seed)");
    ap->add_option("--eta", eta, "zero tolerance for real-valued input");
    ap->callback([&] {
        run = [&] {
            auto f = io::read_function(in);
            EpsilonOptions eo{g.cap(), samples, samples ? g.need_seed("sampled approx") : 0, eta, g.par()};
            auto r = approx_poly_epsilon(f, s, eo);
            Output o{json{{"input", input_summary(f, in)}, {"epsilon", io::to_json(r)}}};
            o.csv_header = {"s", "mode", "count", "total", "epsilon", "half_width"};
            o.csv_rows = {{std::to_string(r.s), r.exhaustive ? "exhaustive" : "sampled", std::to_string(r.count),
                           std::to_string(r.total), num(r.epsilon), num(r.half_width)}};
            return o;
        };
    });

    // cocycle-check / cocycle-invert
    std::string rho_file, from_file, system_file, out_file;
    int k = -1;
    double delta = 0.0, min_cov = 0.5;
    auto* cc = sub("cocycle-check", "count (c, u) violating rho(c) = rho(c^u) - rho(c_u)");
    cc->add_option("--rho", rho_file, "cube-function file");
    cc->add_option("--from", from_file, "use rho = derivative of this rational function");
    cc->add_option("-k", k, "cube dimension for --from");
    cc->add_option("--system", system_file, "cube-set file (default: all k-cubes)");
    cc->add_option("--delta", delta, "allowed loss");
    cc->callback([&] {
        run = [&] {
            auto rho = load_rho(rho_file, from_file, k);
            auto set = load_system(system_file, rho.domain(), rho.dim());
            auto r = is_cocycle(rho, set, delta);
            Output o{json{{"cubes", set.count()}, {"cocycle", io::to_json(r)}}};
            o.exit_code = 0;
            return o;
        };
    });
    auto* ci = sub("cocycle-invert", "lambda(x) = average of rho(x; h)");
    ci->add_option("--rho", rho_file, "cube-function file");
    ci->add_option("--from", from_file, "use rho = derivative of this rational function");
    ci->add_option("-k", k, "cube dimension for --from");
    ci->add_option("--min-coverage", min_cov, "minimum fraction of defined h per basepoint");
    ci->add_option("-o,--output", out_file, "write lambda as a function file");
    ci->callback([&] {
        run = [&] {
            auto rho = load_rho(rho_file, from_file, k);
            auto r = cocycle_invert(rho, min_cov);
            if (!out_file.empty()) io::write_json(out_file, io::to_json(r.lambda));
            Output o{json{{"inversion", io::to_json(r)}}};
            o.csv_header = {"x", "lambda"};
            for (std::int64_t x = 0; x < r.lambda.size(); ++x)
                o.csv_rows.push_back({std::to_string(x), num(r.lambda.real_at(x))});
            return o;
        };
    });

    // zr
    std::string coeffs_arg;
    int r_level = 0, width = 1;
    auto* zr = sub("zr", "Z_r transform of a cube coefficient family b(omega)");
    zr->add_option("--coeffs", coeffs_arg, "JSON array of 2^k integer vectors (literal or file)");
    zr->add_option("-r", r_level, "r")->required();
    zr->add_option("-k", k, "cube dimension (with a random family)");
    zr->add_option("--width", width, "vector width of a random family");
    zr->callback([&] {
        run = [&] {
            CubeCoefficients b;
            int kk = k;
            if (!coeffs_arg.empty()) {
                b = json_arg(coeffs_arg).get<CubeCoefficients>();
                int bits = 0;
                while ((std::size_t{1} << bits) < b.size()) ++bits;
                if ((std::size_t{1} << bits) != b.size()) throw DomainError("--coeffs needs 2^k vectors");
                kk = bits;
            } else {
                if (k < 0) throw DomainError("give --coeffs, or -k with --seed for a random family");
                Rng rng(g.need_seed("random zr family"));
                b.assign(std::size_t{1} << k, std::vector<std::int64_t>(static_cast<std::size_t>(width)));
                for (auto& v : b)
                    for (auto& x : v) x = rng.uniform_int(-3, 3);
            }
            auto t = zr_transform(b, r_level, kk);
            bool vanish = true;
            for (std::uint32_t w = 0; w < t.size(); ++w)
                if (popcount(w) > r_level)
                    for (auto x : t[w]) vanish = vanish && x == 0;
            return Output{json{{"k", kk}, {"r", r_level}, {"input", b}, {"transformed", t}, {"vanishes_above_r", vanish}}};
        };
    });

    // hierarchy-check
    std::string bundle_dir;
    bool strong = false;
    auto* hc = sub("hierarchy-check", "verify a polynomial hierarchy bundle (and its top function, if any)");
    hc->add_option("--bundle", bundle_dir, "bundle directory with manifest.json")->required();
    hc->add_flag("--strong", strong, "also check the strong derivatives condition for the top function");
    hc->callback([&] {
        run = [&] {
            auto b = io::read_bundle(bundle_dir);
            CheckOptions co;
            co.par = g.par();
            Output o;
            if (b.top) {
                auto t = check_top(*b.top, b.hierarchy, *b.top_coeffs, b.hierarchy.bound, *b.top_system, co);
                o.report = json{{"s", b.hierarchy.height()}, {"D", b.hierarchy.dimension()}, {"M", b.hierarchy.bound},
                                {"pass", t.pass}, {"report", io::to_json(t)}};
                if (strong) {
                    const int lv = static_cast<int>(b.hierarchy.levels.size());
                    auto st = check_strong_derivatives_condition(*b.top, b.hierarchy.levels, *b.top_coeffs, lv + 1, lv,
                                                                 b.hierarchy.bound, b.delta, *b.top_system, co);
                    o.report["strong"] = io::to_json(st);
                    o.report["pass"] = t.pass && st.pass();
                }
            } else {
                auto h = check_hierarchy(b.hierarchy, co);
                o.report = json{{"s", b.hierarchy.height()}, {"D", b.hierarchy.dimension()}, {"M", b.hierarchy.bound},
                                {"pass", h.pass}, {"report", io::to_json(h)}};
            }
            return o;
        };
    });

    // coeff-solve
    std::string g_file;
    std::vector<std::string> lower_specs;
    int t_level = -1;
    std::int64_t bound = 1;
    auto* cs = sub("coeff-solve", "bounded integer coefficients for the derivatives condition");
    cs->add_option("-g", g_file, "function g (rational)")->required();
    cs->add_option("--lower", lower_specs, "level files, one option per level 0..t-1 (comma-separated components)");
    cs->add_option("-k", k, "cube dimension")->required();
    cs->add_option("-t", t_level, "number of lower levels")->required();
    cs->add_option("-M,--bound", bound, "L1 bound per coefficient vector");
    cs->add_option("--system", system_file, "cube-set file (default: all k-cubes)");
    cs->add_option("-o,--output", out_file, "write the coefficient field");
    cs->callback([&] {
        run = [&] {
            auto gf = io::read_function(g_file);
            auto lower = load_levels(lower_specs);
            auto set = load_system(system_file, gf.domain(), k);
            auto r = solve_coefficients(gf, lower, k, t_level, bound, set, {g.cap(), g.par()});
            if (!out_file.empty()) io::write_json(out_file, io::to_json(r.field));
            json failures = json::array();
            for (std::size_t i = 0; i < r.failures.size() && i < 32; ++i) failures.push_back(io::to_json(r.failures[i]));
            return Output{json{{"cubes", set.count()},
                               {"solved", r.solved},
                               {"failed", r.failures.size()},
                               {"undefined", r.undefined},
                               {"max_l1", r.field.max_l1()},
                               {"failures", failures}}};
        };
    });

    // extend
    int a_size = 0;
    double coverage = 0.99, min_density = 0.01;
    bool no_eps = false;
    auto* ex = sub("extend", "one random-sumset domain-extension step");
    ex->add_option("-i,--input", in, "partial function file")->required();
    ex->add_option("-s", s, "degree")->required();
    ex->add_option("--shifts", a_size, "size of the random shift set A")->required();
    ex->add_option("--coverage", coverage, "required |X - A| / |H|");
    ex->add_option("--min-density", min_density, "minimum |X| / |H|");
    ex->add_flag("--no-epsilon", no_eps, "skip measuring the auxiliary functions");
    ex->add_option("-o,--output", out_file, "write the extended function");
    ex->callback([&] {
        run = [&] {
            auto f = io::read_function(in);
            ExtendOptions eo{coverage, min_density, !no_eps, g.cap(), g.par()};
            auto r = extend_domain_step(f, s, a_size, g.need_seed("extend"), eo);
            if (!out_file.empty()) io::write_json(out_file, io::to_json(r.extended));
            json rep = io::to_json(r);
            rep.erase("extended");
            rep["extended_defined"] = r.extended.defined_count();
            return Output{json{{"input", input_summary(f, in)}, {"extend", rep}}};
        };
    });

    // nilseq-eval
    std::int64_t lo = 0, hi = 20, period = 0;
    auto* ne = sub("nilseq-eval", "evaluate a nilsequence descriptor");
    ne->add_option("-i,--input", in, "nilsequence descriptor")->required();
    ne->add_option("--from", lo, "first n");
    ne->add_option("--to", hi, "last n");
    ne->add_option("--period", period, "also test N-periodicity over [from, to]");
    ne->callback([&] {
        run = [&] {
            if (hi < lo) throw DomainError("--to must be >= --from");
            auto d = io::nilsequence_from_json(io::read_json(in));
            std::vector<cplx> vals;
            Output o;
            o.csv_header = {"n", "re", "im"};
            for (std::int64_t n = lo; n <= hi; ++n) {
                vals.push_back(d.psi.eval(n));
                o.csv_rows.push_back({std::to_string(n), num(vals.back().real()), num(vals.back().imag())});
            }
            const double kk = d.psi.lipschitz();
            PolyMapOptions po;
            if (g.seed) po.seed = *g.seed;
            o.report = json{{"group", to_string(d.psi.p.group.law())},
                            {"D", d.psi.p.group.dimension()},
                            {"M", d.psi.p.group.complexity()},
                            {"lipschitz", std::isfinite(kk) ? json(kk) : json("inf")},
                            {"lipschitz_within_declared", d.declared_k ? json(kk <= *d.declared_k) : json(nullptr)},
                            {"polynomial_map", io::to_json(check_polynomial_map(d.psi.p, po))},
                            {"from", lo},
                            {"values", values_json(vals)}};
            if (period > 0) o.report["periodicity"] = io::to_json(is_N_periodic(d.psi, period, lo, hi));
            return o;
        };
    });

    // nilpoly-verify
    auto* nv = sub("nilpoly-verify", "check a nilpolynomial descriptor on a box");
    nv->add_option("-i,--input", in, "nilpolynomial descriptor")->required();
    nv->add_option("--lo", lo, "box lower corner");
    nv->add_option("--hi", hi, "box upper corner");
    nv->callback([&] {
        run = [&] {
            auto np = io::nilpolynomial_from_json(io::read_json(in));
            NilpolyOptions no;
            no.lo = lo;
            no.hi = hi;
            no.seed = g.need_seed("nilpoly-verify");
            no.map.seed = no.seed;
            auto r = verify_nilpolynomial(np, no);
            Output o{json{{"pass", r.pass()}, {"report", io::to_json(r)}}};
            if (np.p.vars() == 1) {
                o.csv_header = {"x", "value"};
                for (std::int64_t x = lo; x <= hi; ++x) {
                    std::int64_t xs[1] = {x};
                    o.csv_rows.push_back({std::to_string(x), num(to_double(np.eval(xs)))});
                }
            }
            return o;
        };
    });

    // gen
    std::string kind, coeffs_list, expr, noise_kind = "unimodular", base_kind = "bracketquad";
    std::int64_t n = 0, a = 1, bb = 2, denom = 0;
    double weight = 0.5;
    bool as_phase = false;
    auto* gn = sub("gen", "write a generated function file");
    gn->add_option("--kind", kind,
                   "phase | polyrat | bracketlin | bracketquad | bracketphase | bracket | random | mix")
        ->required();
    gn->add_option("-n", n, "modulus N")->required();
    int gen_deg = 1;
    gn->add_option("--coeffs", coeffs_list, "polynomial coefficients c_0,c_1,... (phase: e(P(x)/N); polyrat: P(x) mod N / N)");
    gn->add_option("-s,--degree", gen_deg, "phase/polyrat without --coeffs: the monomial a x^s");
    gn->add_option("-a", a, "first bracket frequency");
    gn->add_option("-b", bb, "second bracket frequency");
    gn->add_option("--expr", expr, "bracket expression, e.g. (mul (frac (mon 2 x)) (frac (mon 3 x)))");
    gn->add_option("--noise", noise_kind, "random kind: unimodular | signs | bounded | real | rational");
    gn->add_option("--denom", denom, "denominator for rational noise");
    gn->add_option("--weight", weight, "mix: fraction of points agreeing with the base");
    gn->add_option("--base", base_kind, "mix: base kind (any non-random kind)");
    gn->add_flag("--phase", as_phase, "wrap a real/rational result as x -> e(f(x))");
    gn->add_option("-o,--output", out_file, "output file (default: stdout)");
    gn->callback([&] {
        run = [&] {
            auto poly = [&] {
                if (!coeffs_list.empty()) return parse_ints(coeffs_list);
                if (gen_deg < 0) throw DomainError("degree must be >= 0");
                std::vector<std::int64_t> c(static_cast<std::size_t>(gen_deg) + 1, 0);
                c.back() = a;
                return c;
            };
            std::function<GroupFn(const std::string&)> make = [&](const std::string& kd) -> GroupFn {
                if (kd == "phase") return poly_phase(n, poly());
                if (kd == "polyrat") return poly_rational(n, poly());
                if (kd == "bracketlin") return bracket_linear(n, a);
                if (kd == "bracketquad") return bracket_quadratic(n, a, bb);
                if (kd == "bracketphase") return bracket_phase(n, a, bb);
                if (kd == "bracket") {
                    if (expr.empty()) throw DomainError("--kind bracket needs --expr");
                    return materialize(BracketExpr::parse(expr), CyclicDomain(n));
                }
                if (kd == "random") return noise(n, noise_kind_from_string(noise_kind), g.need_seed("gen random"), denom);
                if (kd == "mix") {
                    if (base_kind == "mix" || base_kind == "random") throw DomainError("mix base must be deterministic");
                    return mix(make(base_kind), weight, g.need_seed("gen mix"));
                }
                throw DomainError("unknown generator kind '" + kd + "'");
            };
            GroupFn f = make(kind);
            if (as_phase) f = exp_phase(f);
            const json fj = io::to_json(f);
            if (out_file.empty()) {
                std::cout << fj.dump() << '\n';
                Output o{json{{"kind", kind}}};
                o.exit_code = -1;  // the function itself was the output
                return o;
            }
            io::write_json(out_file, fj);
            return Output{json{{"kind", kind}, {"output", out_file}, {"function", input_summary(f, out_file)}}};
        };
    });

    // pipeline
    auto* pl = sub("pipeline", "summary steps 1-3: norm, character field, epsilon of Phi");
    pl->add_option("-i,--input", in, "complex function file on Z_N")->required();
    pl->add_option("-s", s, "degree (>= 3)")->default_val(3);
    pl->add_option("--samples", samples, "sample the epsilon count (needs --seed)");
    pl->callback([&] {
        run = [&] {
            auto f = io::read_function(in);
            PipelineOptions po{g.cap(), g.par(), samples, samples ? g.need_seed("sampled pipeline") : 0};
            auto r = pipeline_demo(f, s, po);
            Output o{json{{"input", input_summary(f, in)}, {"pipeline", io::to_json(r)}}};
            if (r.budget_exceeded()) o.exit_code = 3;
            if (r.phi) {
                o.csv_header = {"point", "phi", "magnitude"};
                for (std::size_t i = 0; i < r.phi->phi.size(); ++i)
                    o.csv_rows.push_back({std::to_string(i), std::to_string(r.phi->phi[i]), num(r.phi->magnitude[i])});
            }
            return o;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Output o = run();
        if (o.exit_code >= 0) {
            if (g.json_stdout) std::cout << o.report.dump(2) << '\n';
            else render(std::cout, o.report, 0);
        }
        if (!g.json_out.empty()) io::write_json(g.json_out, o.report);
        if (!g.csv.empty()) {
            if (o.csv_header.empty()) throw DomainError("this command has no CSV table");
            write_csv(g.csv, o.csv_header, o.csv_rows);
        }
        return o.exit_code > 0 ? o.exit_code : 0;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
}
