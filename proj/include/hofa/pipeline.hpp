#pragma once

// End-to-end demo of the first three summary steps: the U^{s+1} norm, the
// character field Phi, and the approximate-polynomial measurement of Phi.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hofa/budget.hpp"
#include "hofa/cubesys.hpp"
#include "hofa/gowers.hpp"
#include "hofa/inverse.hpp"
#include "hofa/parallel.hpp"

namespace hofa {

struct PipelineOptions {
    Budget budget = Budget::standard();
    parallel::Options par{};
    std::uint64_t samples = 0;  // 0: exhaustive epsilon count
    std::uint64_t seed = 0;
};

struct StageStatus {
    std::string name;
    bool ok = true;
    bool skipped = false;
    std::string message;
};

struct PipelineReport {
    int s = 0;
    std::vector<StageStatus> stages;
    std::optional<NormReport> norm;
    std::optional<CharacterField> phi;
    std::optional<EpsilonReport> epsilon;
    /// Summary steps 4 onwards, which only have verification checkers.
    std::vector<std::string> out_of_scope;

    bool budget_exceeded() const;
};

/// Stages: norm (U^{s+1}), phi (character field on Z_N^{s-2}), epsilon (Phi as a degree-s
/// approximate polynomial). A stage that exceeds its budget is recorded and later stages
/// that depend on it are skipped. Requires s >= 3.
PipelineReport pipeline_demo(const GroupFn& f, int s, const PipelineOptions& opt = {});

}  // namespace hofa
