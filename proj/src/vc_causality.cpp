#include "whyd/vc_causality.hpp"

#include <algorithm>

#include "whyd/causality.hpp"
#include "whyd/error.hpp"
#include "whyd/evaluator.hpp"

namespace whyd {

namespace {

AtomSet protected_set(const Instance& d, const Program& q, const GroundAtom& answer,
                      const VcOptions& options) {
    if (options.protected_answers) {
        AtomSet out = *options.protected_answers;
        out.erase(answer);
        return out;
    }
    AtomSet out = answers(q, d);
    out.erase(answer);
    return out;
}

}  // namespace

std::vector<VcCauseReport> vc_causes(const Instance& d, const Program& q, const GroundAtom& answer,
                                     const VcOptions& options) {
    SearchOptions search = options;
    search.max_contingency_sets = 0;
    CausalAnalysis analysis(d, q, answer, search);
    AtomSet keep = protected_set(d, q, answer, options);
    std::vector<GroundAtom> goals(keep.begin(), keep.end());
    Evaluator ev(q);
    std::vector<GroundAtom> all = d.atoms();

    AtomSet candidates = analysis.causes();
    std::vector<GroundAtom> list(candidates.begin(), candidates.end());
    std::vector<VcCauseReport> found(list.size());
    parallel_for(list.size(), options.jobs, [&](std::size_t i) {
        const GroundAtom& tau = list[i];
        VcCauseReport r;
        r.cause = tau;
        for (const AtomSet& g : analysis.contingency_sets(tau)) {
            std::vector<const GroundAtom*> facts;
            for (const GroundAtom& a : all)
                if (!(a == tau) && !g.contains(a)) facts.push_back(&a);
            if (goals.empty() || ev.entails(facts, goals)) r.minimal_contingency_sets.insert(g);
        }
        found[i] = std::move(r);
    });

    std::vector<VcCauseReport> out;
    for (VcCauseReport& r : found) {
        if (r.minimal_contingency_sets.empty()) continue;
        std::size_t best = r.minimal_contingency_sets.begin()->size();
        for (const AtomSet& g : r.minimal_contingency_sets) best = std::min(best, g.size());
        r.vc_responsibility = Ratio::inverse_of(best + 1);
        std::size_t cap = options.max_contingency_sets;
        if (cap != 0 && r.minimal_contingency_sets.size() > cap) {
            std::vector<AtomSet> ordered = canonical_order(r.minimal_contingency_sets);
            ordered.resize(cap);
            r.minimal_contingency_sets = AtomFamily(ordered.begin(), ordered.end());
            r.truncated = true;
        }
        out.push_back(std::move(r));
    }
    return out;
}

bool vc_cause_exists(const Instance& d, const Program& q, const GroundAtom& answer,
                     const VcOptions& options) {
    return !vc_causes(d, q, answer, options).empty();
}

Ratio vc_responsibility(const Instance& d, const Program& q, const GroundAtom& answer,
                        const GroundAtom& tuple, const VcOptions& options) {
    require_answer(d, q, answer);
    if (!d.is_endogenous(tuple)) fail(ErrorKind::NotEndogenous, to_string(tuple));
    for (const VcCauseReport& r : vc_causes(d, q, answer, options))
        if (r.cause == tuple) return r.vc_responsibility;
    return Ratio::zero();
}

VcEncoding encode_vc_as_tgd(const Instance& d, const Program& q, const GroundAtom& answer) {
    if (!q.is_conjunctive() || q.rules().front().has_builtins())
        fail(ErrorKind::NotConjunctive, "the encoding needs a single conjunctive rule without builtins");
    require_answer(d, q, answer);
    const Rule& rule = q.rules().front();

    std::set<Symbol> used;
    for (const Predicate& p : q.predicates()) used.insert(p.name);
    for (const GroundAtom& a : d.atoms()) used.insert(a.predicate.name);
    std::string name = "v";
    for (int i = 1; used.contains(Symbol::intern(name)); ++i) name = "v_" + std::to_string(i);

    VcEncoding out;
    out.view = Predicate{Symbol::intern(name), q.answer().arity};
    out.instance = d;
    for (const GroundAtom& other : answers(q, d)) {
        if (other == answer) continue;
        GroundAtom v(out.view, other.args);
        out.instance.add_exogenous(v);
    }

    Constraint psi;
    psi.kind = Constraint::Kind::Tgd;
    psi.body.emplace_back(Atom{out.view, rule.head.args});
    for (const Atom* a : rule.body_atoms()) psi.head.push_back(*a);
    out.sigma.constraints.push_back(std::move(psi));
    return out;
}

}  // namespace whyd
