#pragma once

#include <vector>

#include "whyd/model.hpp"
#include "whyd/parallel.hpp"
#include "whyd/ratio.hpp"
#include "whyd/sets.hpp"

namespace whyd {

struct CauseReport {
    GroundAtom cause;
    AtomFamily minimal_contingency_sets;
    Ratio responsibility;
    /// Set when the family was cut at SearchOptions::max_contingency_sets.
    bool truncated = false;
};

/// Causal analysis of one answer. The diagnoses of ⟨Π, D^x, D^n, {answer}⟩ are
/// enumerated once; causes, contingency sets and responsibilities derive from them.
class CausalAnalysis {
public:
    /// Raises NotAnAnswer when the atom is not an answer of q over d.
    CausalAnalysis(const Instance& d, const Program& q, const GroundAtom& answer,
                   const SearchOptions& options = {});

    const AtomFamily& diagnoses() const { return diagnoses_; }
    AtomSet causes() const;
    bool is_cause(const GroundAtom& tuple) const;
    /// Every subset-minimal contingency set of the tuple; empty for non-causes.
    AtomFamily contingency_sets(const GroundAtom& tuple) const;
    Ratio responsibility(const GroundAtom& tuple) const;
    /// One report per cause in canonical order; families capped per options.
    std::vector<CauseReport> reports() const;
    AtomSet most_responsible() const;

private:
    Instance d_;
    GroundAtom answer_;
    SearchOptions options_;
    AtomFamily diagnoses_;
};

/// Families are ordered by cardinality, then lexicographically.
std::vector<AtomSet> canonical_order(const AtomFamily& family);

bool is_counterfactual_cause(const Instance& d, const Program& q, const GroundAtom& answer,
                             const GroundAtom& tuple);
AtomSet causes(const Instance& d, const Program& q, const GroundAtom& answer,
               const SearchOptions& options = {});
/// Raises NotACause for tuples that are not causes.
AtomFamily minimal_contingency_sets(const Instance& d, const Program& q, const GroundAtom& answer,
                                    const GroundAtom& tuple, const SearchOptions& options = {});
/// Raises NotEndogenous for tuples outside D^n.
Ratio responsibility(const Instance& d, const Program& q, const GroundAtom& answer,
                     const GroundAtom& tuple, const SearchOptions& options = {});
AtomSet most_responsible_causes(const Instance& d, const Program& q, const GroundAtom& answer,
                                const SearchOptions& options = {});
std::vector<CauseReport> cause_reports(const Instance& d, const Program& q, const GroundAtom& answer,
                                       const SearchOptions& options = {});

/// Raises NotAnAnswer unless the atom is over the answer predicate and holds in d.
void require_answer(const Instance& d, const Program& q, const GroundAtom& answer);

}  // namespace whyd
