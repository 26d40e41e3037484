#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "whyd/model.hpp"
#include "whyd/parallel.hpp"
#include "whyd/ratio.hpp"
#include "whyd/sets.hpp"

namespace whyd {

/// ⟨Π, E, Hyp, Obs⟩. Build through make_abduction_problem to get the checks.
struct AbductionProblem {
    Program program;
    AtomSet extensional;
    AtomSet hypotheses;
    std::vector<GroundAtom> observation;
};

/// Validates and returns the problem. Raises EmptyObservation,
/// ObservationBoundExceeded (when obs_bound is given) and ObservationNotEntailable.
AbductionProblem make_abduction_problem(Program program, AtomSet extensional, AtomSet hypotheses,
                                        std::vector<GroundAtom> observation,
                                        std::optional<std::size_t> obs_bound = std::nullopt);

/// All subset-minimal diagnoses; {∅} when E alone explains Obs.
AtomFamily solve_diagnoses(const AbductionProblem& ap, const SearchOptions& options = {});

/// Hypotheses occurring in some derivation of the observation from Π ∪ E ∪ Hyp.
AtomSet support_set(const AbductionProblem& ap);

AtomSet relevant_hypotheses(const AbductionProblem& ap, const SearchOptions& options = {});
AtomSet necessary_hypotheses(const AbductionProblem& ap, const SearchOptions& options = {});
AtomFamily necessary_hypothesis_sets(const AbductionProblem& ap, const SearchOptions& options = {});
/// Raises UnknownHypothesis when h is not a hypothesis.
Ratio necessity_degree(const AbductionProblem& ap, const GroundAtom& h,
                       const SearchOptions& options = {});

// The same classifications computed from an already enumerated Sol.
AtomSet relevant_from(const AtomFamily& diagnoses);
AtomSet necessary_from(const AtomFamily& diagnoses);
/// Minimal N hitting every diagnosis. Sol = {∅} gives no such N.
AtomFamily necessary_sets_from(const AtomFamily& diagnoses);
Ratio necessity_degree_from(const AtomFamily& necessary_sets, const GroundAtom& h);

/// E := D^x, Hyp := D^n, Obs := {answer}. The Boolean form requires a nullary
/// answer predicate (NotBoolean) that holds in d (NotEntailed).
AbductionProblem to_causal_abduction(const Instance& d, const Program& q);
AbductionProblem to_causal_abduction(const Instance& d, const Program& q, const GroundAtom& answer);

struct CausalSetting {
    Instance instance;
    Program program;
};

/// D^x := E, D^n := Hyp ∖ E, and a fresh nullary answer defined by the observation.
CausalSetting from_abduction_to_causality(const AbductionProblem& ap);

struct HornClause {
    std::string head;
    std::vector<std::string> body;

    friend bool operator==(const HornClause&, const HornClause&) = default;
};

/// Propositional Horn abduction: clauses over variables, hypotheses, observations.
struct PropositionalAbduction {
    std::vector<HornClause> clauses;
    std::set<std::string> hypotheses;
    std::set<std::string> observations;

    std::set<std::string> variables() const;
};

/// Datalog encoding with one ternary rule over a 4-ary R relation: every clause
/// with at most three body atoms becomes an R fact padded with `true`; longer
/// bodies are split through fresh auxiliary variables.
AbductionProblem encode_phca(const PropositionalAbduction& p);

}  // namespace whyd
