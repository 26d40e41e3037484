#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "whyd/model.hpp"

namespace whyd {

/// Least model of a program over a set of facts.
class MinimalModel {
public:
    bool contains(const GroundAtom& atom) const;
    /// Iteration in which the atom first appeared; 0 for input facts and ground rules.
    std::optional<std::size_t> round(const GroundAtom& atom) const;

    const std::map<Predicate, std::set<GroundAtom>>& relations() const { return relations_; }
    std::set<GroundAtom> extension(const Predicate& predicate) const;
    std::set<GroundAtom> atoms() const;
    std::size_t size() const { return rounds_.size(); }

private:
    friend class Evaluator;
    std::map<Predicate, std::set<GroundAtom>> relations_;
    std::map<GroundAtom, std::size_t> rounds_;
};

/// One ground rule instance: the head follows from the body atoms.
struct Derivation {
    std::size_t rule = 0;
    std::uint32_t head = 0;
    std::vector<std::uint32_t> body;
};

/// Every ground derivation performed while computing a model. Atoms are
/// numbered densely; input facts have no derivation unless a rule also yields them.
struct Provenance {
    std::vector<GroundAtom> atoms;
    std::vector<Derivation> derivations;

    std::optional<std::uint32_t> id(const GroundAtom& atom) const;
    /// Atoms used in some derivation of some goal, goals included.
    std::set<GroundAtom> support(const std::vector<GroundAtom>& goals) const;
};

/// A program compiled once and evaluated against many fact sets. All methods
/// are const and safe to call concurrently.
class Evaluator {
public:
    explicit Evaluator(const Program& program);
    ~Evaluator();
    Evaluator(const Evaluator&);
    Evaluator& operator=(const Evaluator&);

    const Program& program() const;

    MinimalModel model(const std::vector<GroundAtom>& facts) const;
    /// True iff every goal is in the least model; stops as soon as all are derived.
    bool entails(const std::vector<const GroundAtom*>& facts, const std::vector<GroundAtom>& goals) const;
    bool entails(const std::vector<GroundAtom>& facts, const std::vector<GroundAtom>& goals) const;
    std::set<GroundAtom> answers(const std::vector<const GroundAtom*>& facts) const;
    std::set<GroundAtom> answers(const std::vector<GroundAtom>& facts) const;
    Provenance provenance(const std::vector<GroundAtom>& facts) const;

    struct Compiled;

private:
    std::shared_ptr<const Compiled> compiled_;
};

MinimalModel evaluate_fixpoint(const Program& program, const Instance& instance);
/// Raises UnknownPredicate when the atom's predicate does not occur in the program.
bool holds(const Program& program, const Instance& instance, const GroundAtom& atom);
std::set<GroundAtom> answers(const Program& program, const Instance& instance);

}  // namespace whyd
