#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "whyd/model.hpp"
#include "whyd/parallel.hpp"
#include "whyd/ratio.hpp"
#include "whyd/sets.hpp"

namespace whyd {

/// body => head-atoms (tgd), body => X = Y (egd), body => false (denial).
struct Constraint {
    enum class Kind { Tgd, Egd, Denial };

    Kind kind = Kind::Denial;
    std::vector<Literal> body;
    std::vector<Atom> head;   // tgd only
    Term lhs;                 // egd only
    Term rhs;                 // egd only

    std::vector<const Atom*> body_atoms() const;
    /// Head variables of a tgd that do not occur in the body.
    std::vector<Variable> existentials() const;
    /// Deleting tuples can never violate an egd or a denial constraint.
    bool deletion_closed() const { return kind != Kind::Tgd; }

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Functional dependency lhs -> rhs on one predicate (0-based positions).
/// A key is the dependency from the key positions to all other positions.
struct FunctionalDependency {
    Predicate predicate;
    std::vector<std::uint32_t> lhs;
    std::vector<std::uint32_t> rhs;
    bool is_key = false;

    std::vector<Constraint> expand() const;

    friend bool operator==(const FunctionalDependency&, const FunctionalDependency&) = default;
};

struct KeyConstraint {
    Predicate predicate;
    std::vector<std::uint32_t> positions;
};

struct ConstraintSet {
    std::vector<Constraint> constraints;
    std::vector<FunctionalDependency> dependencies;

    /// Explicit constraints followed by the egds of every dependency.
    std::vector<Constraint> expanded() const;
    std::vector<KeyConstraint> keys() const;
    bool empty() const { return constraints.empty() && dependencies.empty(); }
    bool deletion_closed() const;

    friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

std::string to_string(const Constraint& c);

struct Violation {
    std::size_t constraint = 0;   // index into the expanded list
    std::string text;             // the constraint
    std::vector<GroundAtom> witness;   // body atoms matched by the violating assignment
};

struct SatisfactionResult {
    bool satisfied = true;
    std::vector<Violation> violations;
};

/// First-order check over the finite instance; tgd existentials must be
/// witnessed by existing facts. Raises SchemaMismatch on arity clashes.
SatisfactionResult check_constraints(const Instance& d, const ConstraintSet& sigma,
                                     std::size_t max_violations = 16);
bool satisfies(const Instance& d, const ConstraintSet& sigma);
bool satisfies(const std::vector<const GroundAtom*>& facts, const std::vector<Constraint>& sigma);

struct ConstrainedCauseReport {
    GroundAtom cause;
    AtomFamily minimal_contingency_sets;
    Ratio responsibility;
    bool truncated = false;
};

struct IcSearchOptions : SearchOptions {
    /// Allows the search to skip Σ checks when every constraint is deletion-closed.
    bool use_deletion_closed_shortcut = true;
};

/// Causes of the answer under Σ, each with its subset-minimal contingency sets.
/// Raises InstanceViolatesSigma when d does not satisfy Σ and NotAnAnswer when
/// the atom is not an answer.
std::vector<ConstrainedCauseReport> causes_under_ics(const Instance& d, const Program& q,
                                                     const GroundAtom& answer,
                                                     const ConstraintSet& sigma,
                                                     const IcSearchOptions& options = {});

Ratio responsibility_under_ics(const Instance& d, const Program& q, const GroundAtom& answer,
                               const GroundAtom& tuple, const ConstraintSet& sigma,
                               const IcSearchOptions& options = {});

/// Every key position of every body atom holds a constant or a head variable
/// that is not shared with another body position. Raises NotConjunctive.
bool is_key_preserving(const Program& q, const std::vector<KeyConstraint>& keys);

/// Maximal subinstances without the answer that still satisfy Σ.
std::vector<Instance> maximal_admissible_subinstances(const Instance& d, const Program& q,
                                                      const GroundAtom& answer,
                                                      const ConstraintSet& sigma,
                                                      const SearchOptions& options = {});

}  // namespace whyd
