#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hofa/bracket.hpp"
#include "hofa/cocycle.hpp"
#include "hofa/error.hpp"
#include "hofa/fourier.hpp"
#include "hofa/generators.hpp"
#include "hofa/gowers.hpp"
#include "hofa/inverse.hpp"
#include "hofa/io.hpp"
#include "hofa/nil.hpp"
#include "hofa/pipeline.hpp"
#include "hofa/random.hpp"

namespace py = pybind11;
using namespace hofa;
using io::json;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object& o) {
    return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

std::vector<std::uint8_t> mask_of(const std::optional<std::vector<bool>>& m) {
    if (!m) return {};
    return {m->begin(), m->end()};
}

Budget cap(std::optional<double> b) { return b ? Budget{*b} : Budget::standard(); }

py::array values_of(const GroupFn& f) {
    const auto n = static_cast<py::ssize_t>(f.size());
    if (f.mode() == ValueMode::complex) {
        py::array_t<cplx> out(n);
        auto v = f.complex_values();
        std::copy(v.begin(), v.end(), out.mutable_data());
        return std::move(out);
    }
    py::array_t<double> out(n);
    for (std::int64_t i = 0; i < f.size(); ++i) out.mutable_data()[i] = f.real_at(i);
    return std::move(out);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gowers norms, inverse searches, bracket polynomials and nilsequences on Z_N";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", base.ptr());
    py::register_exception<InternalError>(m, "InternalError", base.ptr());

    py::class_<GroupFn>(m, "Function")
        .def_static(
            "complex",
            [](std::int64_t n, std::vector<cplx> values, int d, std::optional<std::vector<bool>> mask) {
                return GroupFn::complex(CyclicDomain(n, d), std::move(values), mask_of(mask));
            },
            py::arg("n"), py::arg("values"), py::arg("d") = 1, py::arg("mask") = py::none())
        .def_static(
            "real",
            [](std::int64_t n, std::vector<double> values, int d, std::optional<std::vector<bool>> mask) {
                return GroupFn::real(CyclicDomain(n, d), std::move(values), mask_of(mask));
            },
            py::arg("n"), py::arg("values"), py::arg("d") = 1, py::arg("mask") = py::none())
        .def_static(
            "rational",
            [](std::int64_t n, std::vector<std::int64_t> nums, std::int64_t denom, int d,
               std::optional<std::vector<bool>> mask) {
                return GroupFn::rational(CyclicDomain(n, d), std::move(nums), denom, mask_of(mask));
            },
            py::arg("n"), py::arg("numerators"), py::arg("denom") = 0, py::arg("d") = 1, py::arg("mask") = py::none())
        .def_static("from_dict", [](const py::object& o) { return io::function_from_json(from_py(o)); })
        .def_static("load", [](const std::string& path) { return io::read_function(path); })
        .def("to_dict", [](const GroupFn& f) { return to_py(io::to_json(f)); })
        .def("save", [](const GroupFn& f, const std::string& path) { io::write_json(path, io::to_json(f)); })
        .def_property_readonly("n", [](const GroupFn& f) { return f.domain().modulus(); })
        .def_property_readonly("d", [](const GroupFn& f) { return f.domain().arity(); })
        .def_property_readonly("mode", [](const GroupFn& f) { return std::string(to_string(f.mode())); })
        .def_property_readonly("denom", &GroupFn::denom)
        .def_property_readonly("defined_count", &GroupFn::defined_count)
        .def("values", &values_of, "values as a numpy array (complex, or real for real/rational mode)")
        .def("__len__", &GroupFn::size)
        .def("__repr__", [](const GroupFn& f) {
            return "<Function n=" + std::to_string(f.domain().modulus()) + " d=" + std::to_string(f.domain().arity()) +
                   " mode=" + to_string(f.mode()) + ">";
        });

    m.def(
        "gowers",
        [](const GroupFn& f, int s, const std::string& method, unsigned jobs, std::optional<double> budget) {
            py::gil_scoped_release release;
            return gowers(f, s, norm_method_from_string(method), {cap(budget), {.jobs = jobs}}).value;
        },
        py::arg("f"), py::arg("s"), py::arg("method") = "fast", py::arg("jobs") = 0, py::arg("budget") = py::none(),
        "||f||_{U^{s+1}}");
    m.def(
        "gowers_report",
        [](const GroupFn& f, int s, const std::string& method, unsigned jobs, std::optional<double> budget) {
            NormReport r;
            {
                py::gil_scoped_release release;
                r = gowers(f, s, norm_method_from_string(method), {cap(budget), {.jobs = jobs}});
            }
            return to_py(io::to_json(r));
        },
        py::arg("f"), py::arg("s"), py::arg("method") = "fast", py::arg("jobs") = 0, py::arg("budget") = py::none());
    m.def("dft", [](const GroupFn& f) {
        auto spec = dft(f);
        py::array_t<cplx> out(static_cast<py::ssize_t>(spec.coeffs.size()));
        std::copy(spec.coeffs.begin(), spec.coeffs.end(), out.mutable_data());
        return out;
    });
    m.def("correlate", &correlate, py::arg("f"), py::arg("g"));
    m.def("u2_inverse", [](const GroupFn& f) { return to_py(io::to_json(u2_inverse(f))); });
    m.def(
        "poly_phase_search",
        [](const GroupFn& f, int s, unsigned jobs, std::optional<double> budget) {
            return to_py(io::to_json(poly_phase_search(f, s, cap(budget), {.jobs = jobs})));
        },
        py::arg("f"), py::arg("s"), py::arg("jobs") = 0, py::arg("budget") = py::none());
    m.def(
        "character_field",
        [](const GroupFn& f, int s, unsigned jobs, std::optional<double> budget) {
            return to_py(io::to_json(character_field(f, s, cap(budget), {.jobs = jobs})));
        },
        py::arg("f"), py::arg("s"), py::arg("jobs") = 0, py::arg("budget") = py::none());
    m.def(
        "approx_epsilon",
        [](const GroupFn& f, int s, std::uint64_t samples, std::uint64_t seed, double eta, unsigned jobs,
           std::optional<double> budget) {
            return to_py(io::to_json(approx_poly_epsilon(f, s, {cap(budget), samples, seed, eta, {.jobs = jobs}})));
        },
        py::arg("f"), py::arg("s"), py::arg("samples") = 0, py::arg("seed") = 0, py::arg("eta") = 1e-9,
        py::arg("jobs") = 0, py::arg("budget") = py::none());
    m.def(
        "pipeline",
        [](const GroupFn& f, int s, unsigned jobs, std::optional<double> budget) {
            PipelineOptions o;
            o.budget = cap(budget);
            o.par = {.jobs = jobs};
            return to_py(io::to_json(pipeline_demo(f, s, o)));
        },
        py::arg("f"), py::arg("s") = 3, py::arg("jobs") = 0, py::arg("budget") = py::none());

    m.def("poly_phase", &poly_phase, py::arg("n"), py::arg("coeffs"), "x -> e(P(x)/N), coefficients low first");
    m.def("poly_rational", &poly_rational, py::arg("n"), py::arg("coeffs"), "x -> (P(x) mod N)/N");
    m.def("bracket_linear", &bracket_linear, py::arg("n"), py::arg("a"));
    m.def("bracket_quadratic", &bracket_quadratic, py::arg("n"), py::arg("a"), py::arg("b"));
    m.def("bracket_phase", &bracket_phase, py::arg("n"), py::arg("a"), py::arg("b"));
    m.def(
        "bracket",
        [](const std::string& expr, std::int64_t n) { return materialize(BracketExpr::parse(expr), CyclicDomain(n)); },
        py::arg("expr"), py::arg("n"));
    m.def(
        "noise",
        [](std::int64_t n, const std::string& kind, std::uint64_t seed, std::int64_t denom) {
            return noise(n, noise_kind_from_string(kind), seed, denom);
        },
        py::arg("n"), py::arg("kind") = "unimodular", py::arg("seed") = 0, py::arg("denom") = 0);
    m.def("mix", &mix, py::arg("base"), py::arg("weight"), py::arg("seed"));
    m.def("exp_phase", &exp_phase, py::arg("f"));

    m.def("zr_transform", &zr_transform, py::arg("b"), py::arg("r"), py::arg("k"));
    m.def(
        "nilsequence",
        [](const py::object& descriptor, std::int64_t lo, std::int64_t hi) {
            if (hi < lo) throw DomainError("hi must be >= lo");
            auto d = io::nilsequence_from_json(from_py(descriptor));
            py::array_t<cplx> out(static_cast<py::ssize_t>(hi - lo + 1));
            for (std::int64_t n = lo; n <= hi; ++n) out.mutable_data()[n - lo] = d.psi.eval(n);
            return out;
        },
        py::arg("descriptor"), py::arg("lo"), py::arg("hi"), "values of a nilsequence descriptor on [lo, hi]");
    m.def(
        "nilsequence_check",
        [](const py::object& descriptor, std::uint64_t seed) {
            auto d = io::nilsequence_from_json(from_py(descriptor));
            PolyMapOptions o;
            o.seed = seed;
            return to_py(io::to_json(check_polynomial_map(d.psi.p, o)));
        },
        py::arg("descriptor"), py::arg("seed") = 1, "polynomial-map check of the descriptor's orbit");
    m.def(
        "nilpolynomial_verify",
        [](const py::object& descriptor, std::int64_t lo, std::int64_t hi, std::uint64_t seed) {
            auto np = io::nilpolynomial_from_json(from_py(descriptor));
            NilpolyOptions o;
            o.lo = lo;
            o.hi = hi;
            o.seed = seed;
            o.map.seed = seed;
            return to_py(io::to_json(verify_nilpolynomial(np, o)));
        },
        py::arg("descriptor"), py::arg("lo") = -20, py::arg("hi") = 20, py::arg("seed") = 1);
}
