#include "whyd/causality.hpp"

#include <algorithm>

#include "whyd/abduction.hpp"
#include "whyd/error.hpp"
#include "whyd/evaluator.hpp"

namespace whyd {

void require_answer(const Instance& d, const Program& q, const GroundAtom& answer) {
    if (!(answer.predicate == q.answer()) || !Evaluator(q).entails(d.atoms(), {answer}))
        fail(ErrorKind::NotAnAnswer, to_string(answer) + " is not an answer");
}

std::vector<AtomSet> canonical_order(const AtomFamily& family) {
    std::vector<AtomSet> out(family.begin(), family.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const AtomSet& a, const AtomSet& b) { return a.size() < b.size(); });
    return out;
}

CausalAnalysis::CausalAnalysis(const Instance& d, const Program& q, const GroundAtom& answer,
                               const SearchOptions& options)
    : d_(d), answer_(answer), options_(options) {
    require_answer(d, q, answer);
    diagnoses_ = solve_diagnoses(AbductionProblem{q, d.exogenous(), d.endogenous(), {answer}}, options);
}

AtomSet CausalAnalysis::causes() const { return relevant_from(diagnoses_); }

bool CausalAnalysis::is_cause(const GroundAtom& tuple) const {
    return std::any_of(diagnoses_.begin(), diagnoses_.end(),
                       [&](const AtomSet& s) { return s.contains(tuple); });
}

AtomFamily CausalAnalysis::contingency_sets(const GroundAtom& tuple) const {
    if (!is_cause(tuple)) return {};
    // Γ must hit every diagnosis without the tuple (so that removing the tuple
    // kills the answer) and miss some diagnosis with it (so the answer survives Γ).
    AtomFamily without;
    std::vector<const AtomSet*> with;
    for (const AtomSet& s : diagnoses_) {
        if (s.contains(tuple)) with.push_back(&s);
        else without.insert(s);
    }
    AtomFamily out;
    for (const AtomSet& g : minimal_transversals(without)) {
        bool misses_one = std::any_of(with.begin(), with.end(), [&](const AtomSet* s) {
            return std::none_of(g.begin(), g.end(), [&](const GroundAtom& x) { return s->contains(x); });
        });
        if (misses_one) out.insert(g);
    }
    return out;
}

Ratio CausalAnalysis::responsibility(const GroundAtom& tuple) const {
    AtomFamily family = contingency_sets(tuple);
    if (family.empty()) return Ratio::zero();
    std::size_t best = family.begin()->size();
    for (const AtomSet& g : family) best = std::min(best, g.size());
    return Ratio::inverse_of(best + 1);
}

std::vector<CauseReport> CausalAnalysis::reports() const {
    AtomSet all = causes();
    std::vector<GroundAtom> list(all.begin(), all.end());
    std::vector<CauseReport> out(list.size());
    parallel_for(list.size(), options_.jobs, [&](std::size_t i) {
        AtomFamily family = contingency_sets(list[i]);
        CauseReport r;
        r.cause = list[i];
        std::size_t best = family.empty() ? 0 : family.begin()->size();
        for (const AtomSet& g : family) best = std::min(best, g.size());
        r.responsibility = family.empty() ? Ratio::zero() : Ratio::inverse_of(best + 1);
        std::size_t cap = options_.max_contingency_sets;
        if (cap != 0 && family.size() > cap) {
            std::vector<AtomSet> ordered = canonical_order(family);
            ordered.resize(cap);
            r.minimal_contingency_sets = AtomFamily(ordered.begin(), ordered.end());
            r.truncated = true;
        } else {
            r.minimal_contingency_sets = std::move(family);
        }
        out[i] = std::move(r);
    });
    return out;
}

AtomSet CausalAnalysis::most_responsible() const {
    std::vector<CauseReport> all = reports();
    Ratio best = Ratio::zero();
    for (const CauseReport& r : all) best = std::max(best, r.responsibility);
    AtomSet out;
    if (best.is_zero()) return out;
    for (const CauseReport& r : all)
        if (r.responsibility == best) out.insert(r.cause);
    return out;
}

bool is_counterfactual_cause(const Instance& d, const Program& q, const GroundAtom& answer,
                             const GroundAtom& tuple) {
    if (!d.is_endogenous(tuple)) fail(ErrorKind::NotEndogenous, to_string(tuple));
    require_answer(d, q, answer);
    std::vector<GroundAtom> facts;
    for (const GroundAtom& a : d.atoms())
        if (!(a == tuple)) facts.push_back(a);
    return !Evaluator(q).entails(facts, {answer});
}

AtomSet causes(const Instance& d, const Program& q, const GroundAtom& answer,
               const SearchOptions& options) {
    return CausalAnalysis(d, q, answer, options).causes();
}

AtomFamily minimal_contingency_sets(const Instance& d, const Program& q, const GroundAtom& answer,
                                    const GroundAtom& tuple, const SearchOptions& options) {
    CausalAnalysis analysis(d, q, answer, options);
    if (!analysis.is_cause(tuple)) fail(ErrorKind::NotACause, to_string(tuple));
    return analysis.contingency_sets(tuple);
}

Ratio responsibility(const Instance& d, const Program& q, const GroundAtom& answer,
                     const GroundAtom& tuple, const SearchOptions& options) {
    CausalAnalysis analysis(d, q, answer, options);
    if (!d.is_endogenous(tuple)) fail(ErrorKind::NotEndogenous, to_string(tuple));
    return analysis.responsibility(tuple);
}

AtomSet most_responsible_causes(const Instance& d, const Program& q, const GroundAtom& answer,
                                const SearchOptions& options) {
    return CausalAnalysis(d, q, answer, options).most_responsible();
}

std::vector<CauseReport> cause_reports(const Instance& d, const Program& q, const GroundAtom& answer,
                                       const SearchOptions& options) {
    return CausalAnalysis(d, q, answer, options).reports();
}

}  // namespace whyd
