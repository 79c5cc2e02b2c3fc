#pragma once

// JSON serialisation of functions, cube sets, coefficient fields, cube functions,
// nil descriptors, hierarchy bundles and reports.
//
// Function file:   {"n", "d", "mode": "complex"|"real"|"rational", "values", "mask"?, "denom"?}
//                  complex values are [re, im]; rational values are numerators over
//                  "denom" (default n).
// Cube-set file:   {"n", "d", "k", "cubes": [[x, h_1, .., h_k], ...]} or a bare array of
//                  tuples (the domain then comes from the caller). Points are flat indices.
// Coefficients:    {"n", "d", "k", "widths", "bound", "entries": [{"cube": [..], "b": [[..] per omega]}]}
// Cube function:   {"n", "d", "k", "denom", "entries": [{"cube": [..], "value": numerator}]}
// Rationals:       integers, "p/q" strings, or JSON numbers (converted exactly).

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hofa/cocycle.hpp"
#include "hofa/coefficients.hpp"
#include "hofa/cubesys.hpp"
#include "hofa/domain.hpp"
#include "hofa/gowers.hpp"
#include "hofa/hierarchy.hpp"
#include "hofa/inverse.hpp"
#include "hofa/nil.hpp"
#include "hofa/pipeline.hpp"

namespace hofa::io {

using json = nlohmann::ordered_json;

json read_json(const std::filesystem::path& p);
void write_json(const std::filesystem::path& p, const json& j);

Rational rational_from_json(const json& j);
json rational_to_json(const Rational& q);

json to_json(const GroupFn& f);
GroupFn function_from_json(const json& j);
GroupFn read_function(const std::filesystem::path& p);

json to_json(const Cube& c);
Cube cube_from_json(const json& j);

json to_json(const CubeSet& s);
/// `dom` is required for a bare array of tuples.
CubeSet cubeset_from_json(const json& j, const std::optional<CyclicDomain>& dom = std::nullopt);

json to_json(const CoefficientField& b);
CoefficientField field_from_json(const json& j);

json to_json(const CubeFunction& rho);
CubeFunction cube_function_from_json(const json& j);

Polynomial polynomial_from_json(const json& j, int vars);
json to_json(const Polynomial& p);
FilteredGroup group_from_json(const json& j);

struct NilsequenceDescriptor {
    Nilsequence psi;
    std::optional<double> declared_k;
    std::optional<std::int64_t> declared_m;
};
/// {"group": "heisenberg" | "abelian", "dims"?, "p": [[c_0, c_1, ..] per coordinate],
///  "F": {"kind": "exp", "weights": [..]} | {"kind": "bump", "k": k}, "K"?, "M"?, "D"?}
NilsequenceDescriptor nilsequence_from_json(const json& j);

/// {"group", "dims"?, "vars"?, "p", "F": polynomial, "degree", "radius",
///  "rho": {"kind": "project"} | {"kind": "project_plus", "period": P, "offsets": [[..] per residue]}
///       | {"kind": "table", "lo": L, "values": [[..] per point]}}
/// A polynomial is a coefficient list (univariate) or {"terms": [{"exps": [..], "coeff": q}]}.
Nilpolynomial nilpolynomial_from_json(const json& j);

struct HierarchyBundle {
    PolynomialHierarchy hierarchy;
    double delta = 0.0;
    std::optional<GroupFn> top;
    std::optional<CoefficientField> top_coeffs;
    std::optional<CubeSet> top_system;
};

/// Directory with manifest.json: {"s", "D", "M", "delta", "levels": [[files] per level],
/// "systems": [files], "coeffs": [[files] per level, [] for level 0], "top"?: {"g", "coeffs", "system"}}.
HierarchyBundle read_bundle(const std::filesystem::path& dir);
void write_bundle(const std::filesystem::path& dir, const HierarchyBundle& b);

json to_json(const NormReport& r);
json to_json(const CorrelationResult& r);
json to_json(const CharacterField& r, std::size_t max_points = 64);
json to_json(const EpsilonReport& r);
json to_json(const LossReport& r);
json to_json(const InversionReport& r);
json to_json(const DerivativesReport& r);
json to_json(const HierarchyReport& r);
json to_json(const TopReport& r);
json to_json(const StrongReport& r);
json to_json(const ExtendResult& r);
json to_json(const PolyMapReport& r);
json to_json(const PeriodicityReport& r);
json to_json(const NilpolyReport& r);
json to_json(const PipelineReport& r);
json to_json(const CubeSystemReport& r);
json to_json(const ClosureReport& r);

}  // namespace hofa::io
