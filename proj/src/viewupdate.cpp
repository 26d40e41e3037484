#include "whyd/viewupdate.hpp"

#include <algorithm>

#include "whyd/causality.hpp"
#include "whyd/error.hpp"
#include "whyd/evaluator.hpp"

namespace whyd {

std::string to_string(DeletionKind kind) {
    switch (kind) {
        case DeletionKind::MinimalSource: return "minimal";
        case DeletionKind::MinimumSource: return "minimum";
        case DeletionKind::ViewSafe: return "view-safe";
    }
    return "unknown";
}

namespace {

Instance deletable_view(const Instance& d, const DeletionOptions& options) {
    return options.endogenous_only ? d : d.all_endogenous();
}

AtomSet residual(const Evaluator& ev, const Instance& d, const AtomSet& removed) {
    std::vector<const GroundAtom*> facts;
    for (const GroundAtom& a : d.endogenous())
        if (!removed.contains(a)) facts.push_back(&a);
    for (const GroundAtom& a : d.exogenous())
        if (!removed.contains(a)) facts.push_back(&a);
    return ev.answers(facts);
}

/// {τ} ∪ Γ over every cause τ and every Γ in its full contingency family.
AtomFamily minimal_family(const Instance& d, const Program& q, const GroundAtom& answer,
                          const DeletionOptions& options) {
    SearchOptions search = options;
    search.max_contingency_sets = 0;
    CausalAnalysis analysis(deletable_view(d, options), q, answer, search);
    AtomFamily out;
    for (const GroundAtom& tau : analysis.causes()) {
        for (AtomSet g : analysis.contingency_sets(tau)) {
            g.insert(tau);
            out.insert(std::move(g));
        }
    }
    return out;
}

std::vector<DeletionSolution> with_views(const Instance& d, const Program& q, const AtomFamily& family,
                                         DeletionKind kind, const SearchOptions& options) {
    Evaluator ev(q);
    std::vector<AtomSet> ordered = canonical_order(family);
    std::vector<DeletionSolution> out(ordered.size());
    parallel_for(ordered.size(), options.jobs, [&](std::size_t i) {
        out[i] = DeletionSolution{ordered[i], kind, residual(ev, d, ordered[i])};
    });
    return out;
}

}  // namespace

std::vector<DeletionSolution> minimal_source_solutions(const Instance& d, const Program& q,
                                                       const GroundAtom& answer,
                                                       const DeletionOptions& options) {
    return with_views(d, q, minimal_family(d, q, answer, options), DeletionKind::MinimalSource, options);
}

std::vector<DeletionSolution> minimum_source_solutions(const Instance& d, const Program& q,
                                                       const GroundAtom& answer,
                                                       const DeletionOptions& options) {
    return with_views(d, q, minimum_members(minimal_family(d, q, answer, options)),
                      DeletionKind::MinimumSource, options);
}

std::vector<DeletionSolution> vsef_solutions(const Instance& d, const Program& q,
                                             const GroundAtom& answer,
                                             const DeletionOptions& options) {
    AtomSet view = answers(q, d);
    view.erase(answer);
    std::vector<DeletionSolution> out;
    for (DeletionSolution& s : minimal_source_solutions(d, q, answer, options)) {
        if (s.residual_view != view) continue;
        s.kind = DeletionKind::ViewSafe;
        out.push_back(std::move(s));
    }
    return out;
}

bool check_source_solution(const Instance& d, const Instance& sub, const Program& q,
                           const GroundAtom& answer, CheckMode mode,
                           const DeletionOptions& options) {
    AtomSet removed;
    for (const GroundAtom& a : sub.atoms())
        if (!d.contains(a)) fail(ErrorKind::NotSubinstance, to_string(a) + " is not in the instance");
    for (const GroundAtom& a : d.atoms())
        if (!sub.contains(a)) removed.insert(a);
    require_answer(d, q, answer);

    if (options.endogenous_only)
        for (const GroundAtom& a : removed)
            if (!d.is_endogenous(a)) return false;

    Evaluator ev(q);
    std::vector<GroundAtom> kept = sub.atoms();
    if (ev.entails(kept, {answer})) return false;

    if (mode == CheckMode::Subset) {
        // Maximal: putting back any single removed tuple restores the answer.
        for (const GroundAtom& a : removed) {
            std::vector<GroundAtom> back = kept;
            back.push_back(a);
            if (!ev.entails(back, {answer})) return false;
        }
        return true;
    }
    std::vector<DeletionSolution> best = minimum_source_solutions(d, q, answer, options);
    return !best.empty() && removed.size() == best.front().removed.size();
}

}  // namespace whyd
