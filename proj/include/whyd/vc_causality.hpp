#pragma once

#include <optional>
#include <vector>

#include "whyd/constraints.hpp"
#include "whyd/model.hpp"
#include "whyd/parallel.hpp"
#include "whyd/ratio.hpp"
#include "whyd/sets.hpp"

namespace whyd {

struct VcCauseReport {
    GroundAtom cause;
    AtomFamily minimal_contingency_sets;
    Ratio vc_responsibility;
    bool truncated = false;

    /// A vcc-cause: the empty set is among its contingency sets.
    bool counterfactual() const { return minimal_contingency_sets.contains(AtomSet{}); }
};

struct VcOptions : SearchOptions {
    /// Answers that must survive the intervention; by default every other answer.
    std::optional<AtomSet> protected_answers;
};

/// View-conditioned causes: the intervention D ∖ (Γ ∪ {τ}) removes the answer
/// and keeps every protected answer. Raises NotAnAnswer.
std::vector<VcCauseReport> vc_causes(const Instance& d, const Program& q, const GroundAtom& answer,
                                     const VcOptions& options = {});
bool vc_cause_exists(const Instance& d, const Program& q, const GroundAtom& answer,
                     const VcOptions& options = {});
/// Raises NotEndogenous for tuples outside D^n.
Ratio vc_responsibility(const Instance& d, const Program& q, const GroundAtom& answer,
                        const GroundAtom& tuple, const VcOptions& options = {});

struct VcEncoding {
    /// d plus one exogenous view fact per other answer.
    Instance instance;
    /// The single tgd from the view predicate to the query body.
    ConstraintSet sigma;
    Predicate view;
};

/// Raises NotConjunctive unless q is one rule without builtins.
VcEncoding encode_vc_as_tgd(const Instance& d, const Program& q, const GroundAtom& answer);

}  // namespace whyd
