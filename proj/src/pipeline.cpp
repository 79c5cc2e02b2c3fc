#include "hofa/pipeline.hpp"

#include "hofa/error.hpp"

namespace hofa {

bool PipelineReport::budget_exceeded() const {
    for (const auto& st : stages)
        if (!st.ok && !st.skipped) return true;
    return false;
}

PipelineReport pipeline_demo(const GroupFn& f, int s, const PipelineOptions& opt) {
    if (s < 3) throw DomainError("pipeline needs s >= 3 (the character field lives on Z_N^{s-2})");
    if (f.domain().arity() != 1) throw DomainError("pipeline input must live on Z_N");
    if (f.mode() != ValueMode::complex) throw DomainError("pipeline input must be complex-valued");

    PipelineReport rep;
    rep.s = s;
    rep.out_of_scope = {
        "4: extract a polynomial hierarchy from Phi (out of scope; hierarchy-check verifies given hierarchies)",
        "5: strong derivatives condition (out of scope; checker available)",
        "6: generalised cocycles to nilpolynomial (out of scope; cocycle checkers available)",
        "7: nilpolynomial to nilsequence (out of scope; nilpoly-verify available)",
        "8: correlation of f with the nilsequence (out of scope)",
    };

    auto stage = [&](const char* name, bool prerequisite, auto&& body) {
        StageStatus st;
        st.name = name;
        if (!prerequisite) {
            st.ok = false;
            st.skipped = true;
            st.message = "skipped: an earlier stage failed";
        } else {
            try {
                body();
            } catch (const BudgetError& e) {
                st.ok = false;
                st.message = e.what();
            }
        }
        rep.stages.push_back(st);
        return st.ok;
    };

    stage("norm", true, [&] { rep.norm = gowers(f, s, NormMethod::fast, {opt.budget, opt.par}); });
    const bool have_phi = stage("phi", true, [&] { rep.phi = character_field(f, s, opt.budget, opt.par); });
    stage("epsilon", have_phi, [&] {
        EpsilonOptions eo;
        eo.budget = opt.budget;
        eo.samples = opt.samples;
        eo.seed = opt.seed;
        eo.par = opt.par;
        rep.epsilon = approx_poly_epsilon(rep.phi->as_function(), s, eo);
    });
    return rep;
}

}  // namespace hofa
