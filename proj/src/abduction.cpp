#include "whyd/abduction.hpp"

#include <algorithm>
#include <stdexcept>

#include "whyd/error.hpp"
#include "whyd/evaluator.hpp"

namespace whyd {

namespace {

std::vector<const GroundAtom*> pointers(const AtomSet& atoms) {
    std::vector<const GroundAtom*> out;
    out.reserve(atoms.size());
    for (const GroundAtom& a : atoms) out.push_back(&a);
    return out;
}

void check_problem(const AbductionProblem& ap, const Evaluator& ev) {
    if (ap.observation.empty()) fail(ErrorKind::EmptyObservation, "the observation has no atoms");
    std::vector<const GroundAtom*> all = pointers(ap.extensional);
    for (const GroundAtom& h : ap.hypotheses) all.push_back(&h);
    if (!ev.entails(all, ap.observation))
        fail(ErrorKind::ObservationNotEntailable,
             "the observation does not follow even with every hypothesis");
}

/// Advances a k-combination of {0..n-1}; false after the last one.
bool next_combination(std::vector<std::uint32_t>& c, std::uint32_t n) {
    std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

AbductionProblem make_abduction_problem(Program program, AtomSet extensional, AtomSet hypotheses,
                                        std::vector<GroundAtom> observation,
                                        std::optional<std::size_t> obs_bound) {
    AbductionProblem ap{std::move(program), std::move(extensional), std::move(hypotheses),
                        std::move(observation)};
    if (ap.observation.empty()) fail(ErrorKind::EmptyObservation, "the observation has no atoms");
    if (obs_bound && ap.observation.size() > *obs_bound)
        fail(ErrorKind::ObservationBoundExceeded,
             std::to_string(ap.observation.size()) + " atoms, bound " + std::to_string(*obs_bound));
    check_problem(ap, Evaluator(ap.program));
    return ap;
}

AtomSet support_set(const AbductionProblem& ap) {
    std::vector<GroundAtom> facts(ap.extensional.begin(), ap.extensional.end());
    facts.insert(facts.end(), ap.hypotheses.begin(), ap.hypotheses.end());
    Provenance prov = Evaluator(ap.program).provenance(facts);
    AtomSet out;
    for (const GroundAtom& a : prov.support(ap.observation))
        if (ap.hypotheses.contains(a) && !ap.extensional.contains(a)) out.insert(a);
    return out;
}

AtomFamily solve_diagnoses(const AbductionProblem& ap, const SearchOptions& options) {
    Evaluator ev(ap.program);
    check_problem(ap, ev);

    std::vector<const GroundAtom*> base = pointers(ap.extensional);
    if (ev.entails(base, ap.observation)) return {AtomSet{}};

    AtomSet support = support_set(ap);
    Universe u(std::vector<GroundAtom>(support.begin(), support.end()));
    const auto n = static_cast<std::uint32_t>(u.size());

    auto explains = [&](const IndexSet& s) {
        std::vector<const GroundAtom*> facts = base;
        for (std::uint32_t i : s) facts.push_back(&u.at(i));
        return ev.entails(facts, ap.observation);
    };

    std::vector<IndexSet> found;
    constexpr std::size_t chunk = 4096;
    for (std::uint32_t k = 1; k <= n; ++k) {
        bool any_candidate = false;
        std::vector<IndexSet> level_hits;
        std::vector<std::uint32_t> comb(k);
        for (std::uint32_t i = 0; i < k; ++i) comb[i] = i;
        bool more = true;
        while (more) {
            std::vector<IndexSet> candidates;
            while (more && candidates.size() < chunk) {
                bool dominated = std::any_of(found.begin(), found.end(),
                                             [&](const IndexSet& f) { return is_subset(f, comb); });
                if (!dominated) candidates.push_back(comb);
                more = next_combination(comb, n);
            }
            if (candidates.empty()) continue;
            any_candidate = true;
            std::vector<char> hit(candidates.size(), 0);
            parallel_for(candidates.size(), options.jobs,
                         [&](std::size_t i) { hit[i] = explains(candidates[i]) ? 1 : 0; });
            for (std::size_t i = 0; i < candidates.size(); ++i)
                if (hit[i]) level_hits.push_back(candidates[i]);
        }
        if (!any_candidate) break;
        found.insert(found.end(), level_hits.begin(), level_hits.end());
    }

    AtomFamily out;
    for (const IndexSet& s : found) {
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            IndexSet smaller = s;
            smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(drop));
            if (explains(smaller)) throw std::logic_error("diagnosis enumeration produced a non-minimal set");
        }
        out.insert(u.decode(s));
    }
    return out;
}

AtomSet relevant_from(const AtomFamily& diagnoses) {
    AtomSet out;
    for (const AtomSet& d : diagnoses) out.insert(d.begin(), d.end());
    return out;
}

AtomSet necessary_from(const AtomFamily& diagnoses) {
    if (diagnoses.empty()) return {};
    AtomSet out = *diagnoses.begin();
    for (const AtomSet& d : diagnoses) {
        AtomSet keep;
        std::set_intersection(out.begin(), out.end(), d.begin(), d.end(), std::inserter(keep, keep.end()));
        out = std::move(keep);
    }
    return out;
}

AtomFamily necessary_sets_from(const AtomFamily& diagnoses) { return minimal_transversals(diagnoses); }

Ratio necessity_degree_from(const AtomFamily& necessary_sets, const GroundAtom& h) {
    std::size_t best = 0;
    for (const AtomSet& n : necessary_sets)
        if (n.contains(h) && (best == 0 || n.size() < best)) best = n.size();
    return best == 0 ? Ratio::zero() : Ratio::inverse_of(best);
}

AtomSet relevant_hypotheses(const AbductionProblem& ap, const SearchOptions& options) {
    return relevant_from(solve_diagnoses(ap, options));
}

AtomSet necessary_hypotheses(const AbductionProblem& ap, const SearchOptions& options) {
    return necessary_from(solve_diagnoses(ap, options));
}

AtomFamily necessary_hypothesis_sets(const AbductionProblem& ap, const SearchOptions& options) {
    return necessary_sets_from(solve_diagnoses(ap, options));
}

Ratio necessity_degree(const AbductionProblem& ap, const GroundAtom& h, const SearchOptions& options) {
    if (!ap.hypotheses.contains(h)) fail(ErrorKind::UnknownHypothesis, to_string(h));
    return necessity_degree_from(necessary_hypothesis_sets(ap, options), h);
}

AbductionProblem to_causal_abduction(const Instance& d, const Program& q) {
    if (!q.is_boolean())
        fail(ErrorKind::NotBoolean, "answer predicate " + to_string(q.answer()) + " is not nullary");
    GroundAtom ans(q.answer(), {});
    std::vector<GroundAtom> facts = d.atoms();
    if (!Evaluator(q).entails(facts, {ans})) fail(ErrorKind::NotEntailed, to_string(ans));
    return AbductionProblem{q, d.exogenous(), d.endogenous(), {ans}};
}

AbductionProblem to_causal_abduction(const Instance& d, const Program& q, const GroundAtom& answer) {
    if (!(answer.predicate == q.answer()) || !Evaluator(q).entails(d.atoms(), {answer}))
        fail(ErrorKind::NotAnAnswer, to_string(answer));
    return AbductionProblem{q, d.exogenous(), d.endogenous(), {answer}};
}

CausalSetting from_abduction_to_causality(const AbductionProblem& ap) {
    std::set<Symbol> used;
    for (const Predicate& p : ap.program.predicates()) used.insert(p.name);
    for (const GroundAtom& a : ap.extensional) used.insert(a.predicate.name);
    for (const GroundAtom& a : ap.hypotheses) used.insert(a.predicate.name);
    std::string name = "ans";
    for (int i = 1; used.contains(Symbol::intern(name)); ++i) name = "ans_" + std::to_string(i);

    Rule rule;
    rule.head = Atom{Predicate{Symbol::intern(name), 0}, {}};
    for (const GroundAtom& o : ap.observation) rule.body.emplace_back(o.to_atom());

    CausalSetting out;
    out.program = ap.program.with_rule(std::move(rule)).with_answer(Predicate{Symbol::intern(name), 0});
    for (const GroundAtom& e : ap.extensional) out.instance.add_exogenous(e);
    for (const GroundAtom& h : ap.hypotheses)
        if (!ap.extensional.contains(h)) out.instance.add_endogenous(h);
    return out;
}

// ---------------------------------------------------------------------------
// Propositional Horn abduction

std::set<std::string> PropositionalAbduction::variables() const {
    std::set<std::string> out(hypotheses.begin(), hypotheses.end());
    out.insert(observations.begin(), observations.end());
    for (const HornClause& c : clauses) {
        out.insert(c.head);
        out.insert(c.body.begin(), c.body.end());
    }
    return out;
}

AbductionProblem encode_phca(const PropositionalAbduction& p) {
    const Predicate t{Symbol::intern("t"), 1};
    const Predicate r{Symbol::intern("r"), 4};
    const std::string truth = "true";
    // Keeps user variables apart from the padding constant and fresh auxiliaries.
    auto constant = [&](const std::string& v) { return v == truth ? Constant("true'") : Constant(v); };

    Rule fact{Atom{t, {Term(Constant(truth))}}, {}};
    Variable x0("X0"), x1("X1"), x2("X2"), x3("X3");
    Rule step{Atom{t, {Term(x0)}},
              {Atom{t, {Term(x1)}}, Atom{t, {Term(x2)}}, Atom{t, {Term(x3)}},
               Atom{r, {Term(x0), Term(x1), Term(x2), Term(x3)}}}};
    Program program({fact, step}, t);

    AbductionProblem ap;
    ap.program = std::move(program);
    std::size_t aux = 0;
    for (const HornClause& c : p.clauses) {
        Constant head = constant(c.head);
        std::vector<Constant> body;
        for (const std::string& b : c.body) body.push_back(constant(b));
        // Each link keeps two body atoms and hands the rest to a fresh variable.
        std::size_t i = 0;
        while (body.size() - i > 3) {
            Constant next("aux#" + std::to_string(++aux));
            ap.extensional.insert(GroundAtom(r, {head, body[i], body[i + 1], next}));
            head = next;
            i += 2;
        }
        std::vector<Constant> args{head};
        for (; i < body.size(); ++i) args.push_back(body[i]);
        while (args.size() < 4) args.emplace_back(truth);
        ap.extensional.insert(GroundAtom(r, std::move(args)));
    }
    for (const std::string& h : p.hypotheses) ap.hypotheses.insert(GroundAtom(t, {constant(h)}));
    for (const std::string& o : p.observations) ap.observation.push_back(GroundAtom(t, {constant(o)}));
    return ap;
}

}  // namespace whyd
