#include "whyd/constraints.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <mutex>
#include <unordered_map>

#include "whyd/causality.hpp"
#include "whyd/error.hpp"
#include "whyd/evaluator.hpp"
#include "whyd/viewupdate.hpp"

namespace whyd {

// ---------------------------------------------------------------------------
// Constraint shapes

std::vector<const Atom*> Constraint::body_atoms() const {
    std::vector<const Atom*> out;
    for (const Literal& lit : body)
        if (const auto* a = std::get_if<Atom>(&lit)) out.push_back(a);
    return out;
}

std::vector<Variable> Constraint::existentials() const {
    std::set<Variable> bound;
    for (const Atom* a : body_atoms())
        for (const Variable& v : a->variables()) bound.insert(v);
    std::vector<Variable> out;
    for (const Atom& h : head)
        for (const Variable& v : h.variables())
            if (!bound.contains(v) && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    return out;
}

std::vector<Constraint> FunctionalDependency::expand() const {
    std::vector<Term> first;
    std::vector<Term> second;
    for (std::uint32_t i = 0; i < predicate.arity; ++i) {
        Variable x("X" + std::to_string(i + 1));
        first.emplace_back(x);
        bool determined = std::binary_search(lhs.begin(), lhs.end(), i);
        second.emplace_back(determined ? x : Variable("Y" + std::to_string(i + 1)));
    }
    std::vector<Constraint> out;
    for (std::uint32_t r : rhs) {
        if (std::binary_search(lhs.begin(), lhs.end(), r)) continue;
        Constraint c;
        c.kind = Constraint::Kind::Egd;
        c.body = {Atom{predicate, first}, Atom{predicate, second}};
        c.lhs = first[r];
        c.rhs = second[r];
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Constraint> ConstraintSet::expanded() const {
    std::vector<Constraint> out = constraints;
    for (const FunctionalDependency& fd : dependencies) {
        std::vector<Constraint> egds = fd.expand();
        out.insert(out.end(), egds.begin(), egds.end());
    }
    return out;
}

std::vector<KeyConstraint> ConstraintSet::keys() const {
    std::vector<KeyConstraint> out;
    for (const FunctionalDependency& fd : dependencies)
        if (fd.is_key) out.push_back(KeyConstraint{fd.predicate, fd.lhs});
    return out;
}

bool ConstraintSet::deletion_closed() const {
    return std::all_of(constraints.begin(), constraints.end(),
                       [](const Constraint& c) { return c.deletion_closed(); });
}

std::string to_string(const Constraint& c) {
    std::string out;
    for (std::size_t i = 0; i < c.body.size(); ++i) {
        if (i) out += ", ";
        std::visit([&](const auto& lit) { out += to_string(lit); }, c.body[i]);
    }
    out += " => ";
    switch (c.kind) {
        case Constraint::Kind::Denial:
            out += "false";
            break;
        case Constraint::Kind::Egd:
            out += to_string(c.lhs) + " = " + to_string(c.rhs);
            break;
        case Constraint::Kind::Tgd:
            for (std::size_t i = 0; i < c.head.size(); ++i) {
                if (i) out += ", ";
                out += to_string(c.head[i]);
            }
            break;
    }
    return out + ".";
}

// ---------------------------------------------------------------------------
// Satisfaction

namespace {

using Binding = std::map<Variable, Constant>;

class FactIndex {
public:
    explicit FactIndex(const std::vector<const GroundAtom*>& facts) {
        for (const GroundAtom* a : facts) by_predicate_[a->predicate].push_back(a);
    }

    const std::vector<const GroundAtom*>& of(const Predicate& p) const {
        static const std::vector<const GroundAtom*> none;
        auto it = by_predicate_.find(p);
        return it == by_predicate_.end() ? none : it->second;
    }

private:
    std::map<Predicate, std::vector<const GroundAtom*>> by_predicate_;
};

std::optional<Constant> value(const Term& t, const Binding& b) {
    if (t.is_constant()) return t.constant();
    if (auto it = b.find(t.variable()); it != b.end()) return it->second;
    return std::nullopt;
}

/// Extends the binding so that the atom matches the fact; false on conflict.
bool unify(const Atom& atom, const GroundAtom& fact, Binding& b) {
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
        const Term& t = atom.args[i];
        if (auto v = value(t, b)) {
            if (!(*v == fact.args[i])) return false;
        } else {
            b.emplace(t.variable(), fact.args[i]);
        }
    }
    return true;
}

bool builtins_hold(const std::vector<Literal>& body, const Binding& b) {
    for (const Literal& lit : body) {
        const auto* bi = std::get_if<Builtin>(&lit);
        if (!bi) continue;
        auto l = value(bi->lhs, b);
        auto r = value(bi->rhs, b);
        if (!l || !r) continue;
        bool eq = *l == *r;
        if ((bi->op == Builtin::Op::Eq) != eq) return false;
    }
    return true;
}

/// Enumerates matches of the atoms; the callback returns false to stop.
template <class F>
bool each_match(const std::vector<const Atom*>& atoms, std::size_t j, const FactIndex& index,
                Binding& b, std::vector<const GroundAtom*>& used, const std::vector<Literal>* builtins,
                F&& callback) {
    if (j == atoms.size()) return callback(b, used);
    for (const GroundAtom* fact : index.of(atoms[j]->predicate)) {
        Binding next = b;
        if (!unify(*atoms[j], *fact, next)) continue;
        if (builtins && !builtins_hold(*builtins, next)) continue;
        used.push_back(fact);
        bool go_on = each_match(atoms, j + 1, index, next, used, builtins, callback);
        used.pop_back();
        if (!go_on) return false;
    }
    return true;
}

bool head_holds(const Constraint& c, const Binding& b, const FactIndex& index) {
    switch (c.kind) {
        case Constraint::Kind::Denial:
            return false;
        case Constraint::Kind::Egd:
            return *value(c.lhs, b) == *value(c.rhs, b);
        case Constraint::Kind::Tgd: {
            std::vector<const Atom*> head;
            for (const Atom& a : c.head) head.push_back(&a);
            Binding start = b;
            std::vector<const GroundAtom*> used;
            bool witnessed = false;
            each_match(head, 0, index, start, used, nullptr, [&](const Binding&, const auto&) {
                witnessed = true;
                return false;
            });
            return witnessed;
        }
    }
    return true;
}

void check_schema(const std::vector<const GroundAtom*>& facts, const std::vector<Constraint>& sigma) {
    std::map<Symbol, std::uint32_t> arities;
    for (const GroundAtom* a : facts) arities.emplace(a->predicate.name, a->predicate.arity);
    auto check = [&](const Atom& a) {
        auto [it, inserted] = arities.emplace(a.predicate.name, a.predicate.arity);
        if (!inserted && it->second != a.predicate.arity)
            fail(ErrorKind::SchemaMismatch, to_string(a) + " against arity " + std::to_string(it->second));
    };
    for (const Constraint& c : sigma) {
        for (const Atom* a : c.body_atoms()) check(*a);
        for (const Atom& a : c.head) check(a);
    }
}

std::vector<const GroundAtom*> pointers(const std::vector<GroundAtom>& atoms) {
    std::vector<const GroundAtom*> out;
    for (const GroundAtom& a : atoms) out.push_back(&a);
    return out;
}

SatisfactionResult check_facts(const std::vector<const GroundAtom*>& facts,
                               const std::vector<Constraint>& sigma, std::size_t max_violations) {
    FactIndex index(facts);
    SatisfactionResult out;
    for (std::size_t ci = 0; ci < sigma.size(); ++ci) {
        const Constraint& c = sigma[ci];
        Binding b;
        std::vector<const GroundAtom*> used;
        each_match(c.body_atoms(), 0, index, b, used, &c.body, [&](const Binding& m, const auto& matched) {
            if (head_holds(c, m, index)) return true;
            out.satisfied = false;
            if (out.violations.size() < max_violations) {
                Violation v{ci, to_string(c), {}};
                for (const GroundAtom* g : matched) v.witness.push_back(*g);
                out.violations.push_back(std::move(v));
            }
            return max_violations > out.violations.size();
        });
        if (!out.satisfied && out.violations.size() >= max_violations) break;
    }
    return out;
}

}  // namespace

SatisfactionResult check_constraints(const Instance& d, const ConstraintSet& sigma,
                                     std::size_t max_violations) {
    std::vector<GroundAtom> atoms = d.atoms();
    std::vector<const GroundAtom*> facts = pointers(atoms);
    std::vector<Constraint> all = sigma.expanded();
    check_schema(facts, all);
    return check_facts(facts, all, std::max<std::size_t>(1, max_violations));
}

bool satisfies(const Instance& d, const ConstraintSet& sigma) {
    return check_constraints(d, sigma, 1).satisfied;
}

bool satisfies(const std::vector<const GroundAtom*>& facts, const std::vector<Constraint>& sigma) {
    return check_facts(facts, sigma, 1).satisfied;
}

// ---------------------------------------------------------------------------
// Causes under constraints

namespace {

/// Query and constraint status of D ∖ removed, memoized on the removed mask.
class StateTable {
public:
    StateTable(const Instance& d, const std::vector<GroundAtom>& endo, const Program& q,
               const GroundAtom& answer, std::vector<Constraint> sigma, bool check_sigma)
        : endo_(endo), ev_(q), answer_(answer), sigma_(std::move(sigma)), check_sigma_(check_sigma) {
        for (const GroundAtom& a : d.exogenous()) exo_.push_back(&a);
    }

    struct State {
        bool answer;
        bool consistent;
    };

    State get(std::uint64_t removed) {
        Shard& shard = shards_[removed % shards_.size()];
        {
            std::lock_guard lock(shard.mutex);
            if (auto it = shard.table.find(removed); it != shard.table.end()) return it->second;
        }
        std::vector<const GroundAtom*> facts = exo_;
        for (std::size_t i = 0; i < endo_.size(); ++i)
            if (!(removed >> i & 1u)) facts.push_back(&endo_[i]);
        State s{ev_.entails(facts, {answer_}), !check_sigma_ || satisfies(facts, sigma_)};
        std::lock_guard lock(shard.mutex);
        shard.table.emplace(removed, s);
        return s;
    }

private:
    struct Shard {
        std::mutex mutex;
        std::unordered_map<std::uint64_t, State> table;
    };

    const std::vector<GroundAtom>& endo_;
    std::vector<const GroundAtom*> exo_;
    Evaluator ev_;
    GroundAtom answer_;
    std::vector<Constraint> sigma_;
    bool check_sigma_;
    std::array<Shard, 16> shards_;
};

std::vector<ConstrainedCauseReport> search_under_ics(const Instance& d, const Program& q,
                                                     const GroundAtom& answer,
                                                     const ConstraintSet& sigma,
                                                     const IcSearchOptions& options) {
    std::vector<GroundAtom> endo(d.endogenous().begin(), d.endogenous().end());
    const std::size_t n = endo.size();
    if (n > 62)
        fail(ErrorKind::SearchLimitExceeded,
             std::to_string(n) + " endogenous tuples; the search supports at most 62");

    // Every cause under Σ is a plain cause, so the candidates come from the bridge.
    SearchOptions plain = options;
    plain.max_contingency_sets = 0;
    CausalAnalysis analysis(d, q, answer, plain);

    StateTable states(d, endo, q, answer, sigma.expanded(), true);
    AtomSet candidates = analysis.causes();
    std::vector<std::size_t> taus;
    for (std::size_t i = 0; i < n; ++i)
        if (candidates.contains(endo[i])) taus.push_back(i);

    std::vector<ConstrainedCauseReport> found(taus.size());
    parallel_for(taus.size(), options.jobs, [&](std::size_t ti) {
        const std::size_t t = taus[ti];
        const std::uint64_t tau_bit = std::uint64_t{1} << t;
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < n; ++i)
            if (i != t) others.push_back(i);
        const std::size_t m = others.size();

        std::vector<std::uint64_t> valid;
        for (std::size_t k = 0; k <= m; ++k) {
            std::vector<std::uint32_t> comb(k);
            for (std::uint32_t i = 0; i < k; ++i) comb[i] = i;
            bool more = true;
            while (more) {
                std::uint64_t gamma = 0;
                for (std::uint32_t c : comb) gamma |= std::uint64_t{1} << others[c];
                bool dominated = std::any_of(valid.begin(), valid.end(),
                                             [&](std::uint64_t v) { return (v & gamma) == v; });
                if (!dominated) {
                    StateTable::State before = states.get(gamma);
                    if (before.answer && before.consistent) {
                        StateTable::State after = states.get(gamma | tau_bit);
                        if (!after.answer && after.consistent) valid.push_back(gamma);
                    }
                }
                // Next k-combination of the m other positions.
                more = false;
                for (std::size_t i = k; i-- > 0;) {
                    if (comb[i] < m - k + i) {
                        ++comb[i];
                        for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
                        more = true;
                        break;
                    }
                }
            }
        }

        ConstrainedCauseReport r;
        r.cause = endo[t];
        for (std::uint64_t v : valid) {
            AtomSet g;
            for (std::size_t i = 0; i < n; ++i)
                if (v >> i & 1u) g.insert(endo[i]);
            r.minimal_contingency_sets.insert(std::move(g));
        }
        found[ti] = std::move(r);
    });

    std::vector<ConstrainedCauseReport> out;
    for (ConstrainedCauseReport& r : found)
        if (!r.minimal_contingency_sets.empty()) out.push_back(std::move(r));
    return out;
}

void cap(ConstrainedCauseReport& r, std::size_t limit) {
    std::size_t best = r.minimal_contingency_sets.begin()->size();
    for (const AtomSet& g : r.minimal_contingency_sets) best = std::min(best, g.size());
    r.responsibility = Ratio::inverse_of(best + 1);
    if (limit != 0 && r.minimal_contingency_sets.size() > limit) {
        std::vector<AtomSet> ordered = canonical_order(r.minimal_contingency_sets);
        ordered.resize(limit);
        r.minimal_contingency_sets = AtomFamily(ordered.begin(), ordered.end());
        r.truncated = true;
    }
}

}  // namespace

std::vector<ConstrainedCauseReport> causes_under_ics(const Instance& d, const Program& q,
                                                     const GroundAtom& answer,
                                                     const ConstraintSet& sigma,
                                                     const IcSearchOptions& options) {
    if (!satisfies(d, sigma))
        fail(ErrorKind::InstanceViolatesSigma, "the instance does not satisfy the constraints");
    require_answer(d, q, answer);

    std::vector<ConstrainedCauseReport> out;
    if (options.use_deletion_closed_shortcut && sigma.deletion_closed()) {
        // Every subinstance of d satisfies Σ, so the clauses on Σ hold trivially.
        SearchOptions plain = options;
        plain.max_contingency_sets = 0;
        for (CauseReport& r : cause_reports(d, q, answer, plain))
            out.push_back(ConstrainedCauseReport{r.cause, std::move(r.minimal_contingency_sets),
                                                 r.responsibility, false});
    } else {
        out = search_under_ics(d, q, answer, sigma, options);
    }
    for (ConstrainedCauseReport& r : out) cap(r, options.max_contingency_sets);
    return out;
}

Ratio responsibility_under_ics(const Instance& d, const Program& q, const GroundAtom& answer,
                               const GroundAtom& tuple, const ConstraintSet& sigma,
                               const IcSearchOptions& options) {
    std::vector<ConstrainedCauseReport> all = causes_under_ics(d, q, answer, sigma, options);
    if (!d.is_endogenous(tuple)) fail(ErrorKind::NotEndogenous, to_string(tuple));
    for (const ConstrainedCauseReport& r : all)
        if (r.cause == tuple) return r.responsibility;
    return Ratio::zero();
}

bool is_key_preserving(const Program& q, const std::vector<KeyConstraint>& keys) {
    if (!q.is_conjunctive()) fail(ErrorKind::NotConjunctive, "key preservation is defined for one-rule queries");
    const Rule& rule = q.rules().front();
    std::set<Variable> head;
    for (const Variable& v : rule.head.variables()) head.insert(v);

    std::map<Variable, std::size_t> occurrences;
    for (const Atom* a : rule.body_atoms())
        for (const Term& t : a->args)
            if (t.is_variable()) ++occurrences[t.variable()];

    for (const Atom* a : rule.body_atoms()) {
        for (const KeyConstraint& k : keys) {
            if (!(k.predicate == a->predicate)) continue;
            for (std::uint32_t pos : k.positions) {
                const Term& t = a->args.at(pos);
                if (t.is_constant()) continue;
                if (!head.contains(t.variable()) || occurrences[t.variable()] > 1) return false;
            }
        }
    }
    return true;
}

std::vector<Instance> maximal_admissible_subinstances(const Instance& d, const Program& q,
                                                      const GroundAtom& answer,
                                                      const ConstraintSet& sigma,
                                                      const SearchOptions& options) {
    if (!satisfies(d, sigma))
        fail(ErrorKind::InstanceViolatesSigma, "the instance does not satisfy the constraints");
    DeletionOptions del;
    del.jobs = options.jobs;
    std::vector<Instance> out;
    for (const DeletionSolution& s : minimal_source_solutions(d, q, answer, del)) {
        Instance e = d.without(s.removed);
        if (satisfies(e, sigma)) out.push_back(std::move(e));
    }
    return out;
}

}  // namespace whyd
