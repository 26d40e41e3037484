#pragma once

#include <string>
#include <vector>

#include "whyd/model.hpp"
#include "whyd/parallel.hpp"
#include "whyd/sets.hpp"

namespace whyd {

enum class DeletionKind { MinimalSource, MinimumSource, ViewSafe };

std::string to_string(DeletionKind kind);

struct DeletionSolution {
    AtomSet removed;
    DeletionKind kind = DeletionKind::MinimalSource;
    /// Answers left after removing the tuples.
    AtomSet residual_view;
};

struct DeletionOptions : SearchOptions {
    /// Only endogenous tuples may be deleted. Off by default: every tuple is deletable.
    bool endogenous_only = false;
};

/// Subset-minimal deletions that remove the answer. Raises NotAnAnswer.
std::vector<DeletionSolution> minimal_source_solutions(const Instance& d, const Program& q,
                                                       const GroundAtom& answer,
                                                       const DeletionOptions& options = {});
/// Minimum-cardinality deletions that remove the answer.
std::vector<DeletionSolution> minimum_source_solutions(const Instance& d, const Program& q,
                                                       const GroundAtom& answer,
                                                       const DeletionOptions& options = {});
/// Subset-minimal deletions that remove the answer and no other answer.
std::vector<DeletionSolution> vsef_solutions(const Instance& d, const Program& q,
                                             const GroundAtom& answer,
                                             const DeletionOptions& options = {});

enum class CheckMode {
    Subset,        // the subinstance is subset-maximal among those without the answer
    Cardinality,   // it has maximum cardinality among them
};

/// Raises NotSubinstance when sub is not contained in d.
bool check_source_solution(const Instance& d, const Instance& sub, const Program& q,
                           const GroundAtom& answer, CheckMode mode,
                           const DeletionOptions& options = {});

}  // namespace whyd
