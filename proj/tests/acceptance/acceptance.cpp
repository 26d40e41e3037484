// Acceptance suite: one [PASS]/[FAIL] line per criterion.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "fixtures.hpp"
#include "generators.hpp"
#include "naive.hpp"
#include "oracle.hpp"
#include "whyd/abduction.hpp"
#include "whyd/causality.hpp"
#include "whyd/constraints.hpp"
#include "whyd/error.hpp"
#include "whyd/evaluator.hpp"
#include "whyd/frontend.hpp"
#include "whyd/vc_causality.hpp"
#include "whyd/viewupdate.hpp"

using namespace whyd;
using namespace whyd::testing;

namespace {

/// Collects failed expectations of one criterion; keeps the first few messages.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (notes_.size() < 3) notes_.push_back(what);
    }
    std::size_t failures() const { return failures_; }
    const std::vector<std::string>& notes() const { return notes_; }

private:
    std::size_t failures_ = 0;
    std::vector<std::string> notes_;
};

std::string show(const AtomSet& s) {
    std::string out = "{";
    for (const GroundAtom& a : s) out += (out.size() > 1 ? ", " : "") + to_string(a);
    return out + "}";
}

std::string show(const AtomFamily& f) {
    std::string out = "{";
    for (const AtomSet& s : f) out += (out.size() > 1 ? ", " : "") + show(s);
    return out + "}";
}

AtomFamily removed(const std::vector<DeletionSolution>& sols) {
    AtomFamily out;
    for (const DeletionSolution& s : sols) out.insert(s.removed);
    return out;
}

template <class Report>
std::map<GroundAtom, AtomFamily> by_cause(const std::vector<Report>& reports) {
    std::map<GroundAtom, AtomFamily> out;
    for (const Report& r : reports) out[r.cause] = r.minimal_contingency_sets;
    return out;
}

bool run(int id, const std::string& title, const std::function<void(Check&)>& body) {
    Check c;
    auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = c.failures() == 0;
    std::ostringstream line;
    line.precision(2);
    line << std::fixed << (ok ? "[PASS] " : "[FAIL] ") << "AC" << id << " " << title << " (" << secs << "s)";
    if (!ok) line << ": " << c.failures() << " mismatches";
    std::cout << line.str() << "\n";
    for (const std::string& n : c.notes()) std::cout << "       " << n << "\n";
    return ok;
}

/// The shared random corpus of the reduction and oracle criteria; every
/// second case is a single conjunctive rule so that the tgd encoding applies.
std::vector<RandomCase> corpus() {
    Rng rng(20240601);
    std::vector<RandomCase> out;
    for (int i = 0; i < 200; ++i) {
        CaseOptions opts;
        opts.conjunctive = i % 2 == 1;
        out.push_back(random_case(rng, opts));
    }
    return out;
}

void ac1(Check& c) {
    Program q = load_program("aj.dl");
    GroundAtom a = atom("ans(john,xml)");
    Instance d = load_instance("aj.facts").instance;
    AtomSet four = atoms({"author(john,tods)", "author(john,tkde)", "journal(tkde,xml,30)", "journal(tods,xml,32)"});
    AtomSet got = causes(d, q, a);
    c.expect(got == four, "causes " + show(got));
    for (const CauseReport& r : cause_reports(d, q, a))
        c.expect(r.responsibility == Ratio::inverse_of(2), to_string(r.cause) + " rho " + r.responsibility.str());
    Instance x = load_instance("aj_author_endogenous.facts").instance;
    AtomSet authors = causes(x, q, a);
    c.expect(authors == atoms({"author(john,tkde)", "author(john,tods)"}), "journal exogenous: " + show(authors));
}

void ac2(Check& c) {
    Program q = load_program("graph.dl");
    Instance d = load_instance("graph.facts").instance;
    GroundAtom a = atom("ans(c,e)");
    c.expect(causes(d, q, a) == labelled(d, {"t1", "t2", "t4", "t5", "t6", "t7"}), "causes " + show(causes(d, q, a)));
    c.expect(responsibility(d, q, a, labelled(d, "t2")) == Ratio::one(), "rho(t2)");
    c.expect(responsibility(d, q, a, labelled(d, "t3")) == Ratio::zero(), "rho(t3)");
}

void ac3(Check& c) {
    ParsedInstance p = load_instance("circuit.facts");
    AbductionProblem ap = make_abduction_problem(load_program("circuit.dl"), p.instance.exogenous(),
                                                 p.instance.endogenous(), p.observations);
    AtomFamily sol = solve_diagnoses(ap);
    c.expect(sol == AtomFamily{atoms({"faulty(or)"})}, "Sol " + show(sol));
    CausalSetting s = from_abduction_to_causality(ap);
    GroundAtom ans(s.program.answer(), {});
    AtomSet cs = causes(s.instance, s.program, ans);
    c.expect(cs == atoms({"faulty(or)"}), "causes " + show(cs));
    c.expect(responsibility(s.instance, s.program, ans, atom("faulty(or)")) == Ratio::one(), "rho(faulty(or))");
}

void ac4(Check& c) {
    Program q = load_program("rs.dl");
    AbductionProblem rs = to_causal_abduction(load_instance("rs.facts").instance, q);
    AtomFamily sol = solve_diagnoses(rs);
    c.expect(sol == AtomFamily{atoms({"s(a1)", "r(a2,a1)"}), atoms({"s(a3)", "r(a3,a3)"})}, "Sol " + show(sol));
    c.expect(relevant_hypotheses(rs) == atoms({"s(a1)", "r(a2,a1)", "s(a3)", "r(a3,a3)"}), "Rel");
    AbductionProblem nes = to_causal_abduction(load_instance("rs_nes.facts").instance, q);
    c.expect(necessary_hypotheses(nes) == atoms({"s(a3)"}), "Ness " + show(necessary_hypotheses(nes)));
    AtomFamily sets = necessary_hypothesis_sets(nes);
    c.expect(sets == AtomFamily{atoms({"s(a3)"}), atoms({"r(a1,a3)", "r(a2,a3)"})}, "N sets " + show(sets));
    c.expect(necessity_degree(nes, atom("s(a3)")) == Ratio::one(), "eta(s(a3))");
    c.expect(necessity_degree(nes, atom("r(a1,a3)")) == Ratio::inverse_of(2), "eta(r(a1,a3))");
    c.expect(necessity_degree(nes, atom("r(a2,a3)")) == Ratio::inverse_of(2), "eta(r(a2,a3))");
}

void ac5(Check& c, const std::vector<RandomCase>& cases) {
    std::size_t encoded = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const RandomCase& k = cases[i];
        std::string tag = "case " + std::to_string(i) + ": ";
        CausalAnalysis analysis(k.instance, k.program, k.answer);
        AbductionProblem ap = to_causal_abduction(k.instance, k.program, k.answer);
        AtomFamily sol = solve_diagnoses(ap);
        c.expect(analysis.causes() == relevant_from(sol), tag + "causes != Rel");
        AtomSet ness = necessary_from(sol);
        AtomFamily nsets = necessary_sets_from(sol);
        for (const GroundAtom& t : k.instance.endogenous()) {
            c.expect(ness.contains(t) == is_counterfactual_cause(k.instance, k.program, k.answer, t),
                     tag + "counterfactual vs Ness at " + to_string(t));
            c.expect(necessity_degree_from(nsets, t) == analysis.responsibility(t), tag + "eta != rho at " + to_string(t));
        }
        DeletionOptions endo;
        endo.endogenous_only = true;
        AtomFamily pairs;
        for (const GroundAtom& t : analysis.causes())
            for (AtomSet g : analysis.contingency_sets(t)) {
                g.insert(t);
                pairs.insert(g);
            }
        c.expect(removed(minimal_source_solutions(k.instance, k.program, k.answer, endo)) == pairs,
                 tag + "minimal source != tau+Gamma");
        std::vector<VcCauseReport> vc = vc_causes(k.instance, k.program, k.answer);
        c.expect(vsef_solutions(k.instance, k.program, k.answer, endo).empty() == vc.empty(), tag + "vsef vs vc existence");
        if (k.program.is_conjunctive() && !k.program.rules().front().has_builtins()) {
            ++encoded;
            VcEncoding enc = encode_vc_as_tgd(k.instance, k.program, k.answer);
            c.expect(by_cause(causes_under_ics(enc.instance, k.program, k.answer, enc.sigma)) == by_cause(vc),
                     tag + "vc != causes under the tgd encoding");
        }
    }
    c.expect(encoded >= 50, "only " + std::to_string(encoded) + " cases exercised the tgd encoding");
}

void ac6(Check& c, const std::vector<RandomCase>& cases) {
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const RandomCase& k = cases[i];
        std::string tag = "case " + std::to_string(i) + ": ";
        Oracle oracle(k.instance, k.program, k.answer);
        CausalAnalysis analysis(k.instance, k.program, k.answer);
        c.expect(analysis.causes() == oracle.causes(), tag + "causes");
        for (const GroundAtom& t : k.instance.endogenous()) {
            c.expect(analysis.contingency_sets(t) == oracle.contingency_sets(t), tag + "Cont of " + to_string(t));
            c.expect(analysis.responsibility(t) == oracle.responsibility(t), tag + "rho of " + to_string(t));
        }
        c.expect(analysis.diagnoses() == oracle.diagnoses(), tag + "diagnoses");
        for (bool endo : {false, true}) {
            DeletionOptions opts;
            opts.endogenous_only = endo;
            c.expect(removed(minimal_source_solutions(k.instance, k.program, k.answer, opts)) == oracle.minimal_source(endo),
                     tag + "minimal source");
            c.expect(removed(minimum_source_solutions(k.instance, k.program, k.answer, opts)) == oracle.minimum_source(endo),
                     tag + "minimum source");
            c.expect(removed(vsef_solutions(k.instance, k.program, k.answer, opts)) == oracle.view_safe(endo),
                     tag + "view-safe");
        }
    }
}

void ac7(Check& c) {
    Program q = load_program("access.dl");
    Instance d = load_instance("access.facts").instance;
    Instance dp = load_instance("access_prime.facts").instance;
    GroundAtom tom = atom("access(tom,f3)");
    GroundAtom joe = atom("access(joe,f1)");
    c.expect(vsef_solutions(d, q, tom).empty(), "Tom,f3 has a view-safe solution");
    c.expect(vc_causes(d, q, tom).empty(), "Tom,f3 has a vc-cause");
    AtomSet vc;
    for (const VcCauseReport& r : vc_causes(d, q, joe)) vc.insert(r.cause);
    c.expect(vc == atoms({"group_user(joe,g1)"}), "vc-causes of Joe,f1 = " + show(vc));
    AtomFamily vsef = removed(vsef_solutions(d, q, joe));
    c.expect(vsef == AtomFamily{atoms({"group_user(joe,g1)"})}, "view-safe solutions of Joe,f1 = " + show(vsef));
    std::map<GroundAtom, AtomFamily> prime = by_cause(vc_causes(dp, q, joe));
    GroundAtom gu = atom("group_user(joe,g1)");
    c.expect(vc_responsibility(dp, q, joe, gu) == Ratio::inverse_of(2), "vc-rho on D'");
    c.expect(prime[gu] == AtomFamily{atoms({"group_user(joe,g0)"}), atoms({"group_file(f1,g0)"})},
             "contingency sets on D' = " + show(prime[gu]));
}

void ac8(Check& c) {
    Instance d = load_instance("dept.facts").instance;
    ConstraintSet psi = load_constraints("dept.ics");
    GroundAtom john = atom("ans(john)");
    Program q = load_program("dept_q.dl");
    Program q1 = load_program("dept_q1.dl");
    AtomSet cq;
    for (const ConstrainedCauseReport& r : causes_under_ics(d, q, john, psi)) cq.insert(r.cause);
    c.expect(cq == labelled(d, {"t1"}), "Q causes " + show(cq));
    std::map<GroundAtom, AtomFamily> c1 = by_cause(causes_under_ics(d, q1, john, psi));
    AtomSet c1_causes;
    for (const auto& [t, f] : c1) c1_causes.insert(t);
    c.expect(c1_causes == labelled(d, {"t4", "t8"}), "Q1 causes " + show(c1_causes));
    GroundAtom t4 = labelled(d, "t4"), t8 = labelled(d, "t8"), t1 = labelled(d, "t1");
    c.expect(responsibility_under_ics(d, q1, john, t4, psi) == Ratio::inverse_of(3), "rho(t4)");
    c.expect(responsibility_under_ics(d, q1, john, t8, psi) == Ratio::inverse_of(3), "rho(t8)");
    c.expect(minimum_members(c1[t4]) == AtomFamily{labelled(d, {"t8", "t1"})}, "smallest Gamma for t4");
    c.expect(minimum_members(c1[t8]) == AtomFamily{labelled(d, {"t4", "t1"})}, "smallest Gamma for t8");
    c.expect(responsibility_under_ics(d, q1, john, t1, psi) == Ratio::zero(), "t1 is a cause for Q1");
    std::vector<Instance> subs = maximal_admissible_subinstances(d, q, john, psi);
    c.expect(subs.size() == 1 && subs[0] == d.without(labelled(d, {"t1"})), "admissible subinstances");
}

void ac9(Check& c) {
    Rng rng(777);
    for (int i = 0; i < 500; ++i) {
        RandomCase k = random_case(rng);
        Instance bigger = k.instance;
        for (int j = 0; j < 2; ++j) {
            GroundAtom f = random_fact(rng);
            if (!bigger.contains(f)) bigger.add_endogenous(f);
        }
        c.expect(is_subset(causes(k.instance, k.program, k.answer), causes(bigger, k.program, k.answer)),
                 "monotonicity trial " + std::to_string(i));
    }
    for (int i = 0; i < 500; ++i) {
        RandomCase k = random_case(rng);
        ConstraintSet sigma = random_constraints(rng, k.instance, 1 + i % 3, false);
        CausalAnalysis plain(k.instance, k.program, k.answer);
        for (const ConstrainedCauseReport& r : causes_under_ics(k.instance, k.program, k.answer, sigma)) {
            c.expect(plain.is_cause(r.cause), "causes under ICs not a cause, trial " + std::to_string(i));
            c.expect(r.responsibility <= plain.responsibility(r.cause), "rho under ICs too big, trial " + std::to_string(i));
        }
    }
    for (int i = 0; i < 500; ++i) {
        RandomCase k = random_case(rng);
        ConstraintSet dcs = random_constraints(rng, k.instance, 1 + i % 3, true);
        IcSearchOptions full;
        full.use_deletion_closed_shortcut = false;
        c.expect(by_cause(causes_under_ics(k.instance, k.program, k.answer, dcs, full)) ==
                     by_cause(cause_reports(k.instance, k.program, k.answer)),
                 "DC invariance trial " + std::to_string(i));
    }
    for (int i = 0; i < 500; ++i) {
        RandomCase k = random_case(rng);
        IcSearchOptions full;
        full.use_deletion_closed_shortcut = false;
        c.expect(by_cause(causes_under_ics(k.instance, k.program, k.answer, ConstraintSet{}, full)) ==
                     by_cause(cause_reports(k.instance, k.program, k.answer)),
                 "empty sigma trial " + std::to_string(i));
    }
    CaseOptions wide;
    wide.max_rules = 6;
    for (int i = 0; i < 500; ++i) {
        Program q = random_program(rng, wide);
        Instance d = random_instance(rng, i % 13, 0);
        c.expect(evaluate_fixpoint(q, d).atoms() == naive_model(q, d.atoms()), "semi-naive trial " + std::to_string(i));
    }
    for (int i = 0; i < 500; ++i) {
        Program q = random_program(rng, CaseOptions{});
        c.expect(parse_program(to_text(q)) == q, "program round trip " + std::to_string(i));
        Instance d = random_instance(rng, i % 9, i % 3, i % 2 == 0);
        c.expect(parse_instance(to_text(d)).instance == d, "instance round trip " + std::to_string(i));
        ConstraintSet s = random_constraints(rng, d, 3, false);
        c.expect(parse_constraints(to_text(s)) == s, "constraint round trip " + std::to_string(i));
    }
}

void ac10(Check& c) {
    Rng rng(4242);
    int solved = 0;
    for (int i = 0; i < 100; ++i) {
        PropositionalAbduction p = random_phca(rng, 8);
        auto expected = phca_diagnoses(p);
        AbductionProblem ap = encode_phca(p);
        if (!expected) {
            bool raised = false;
            try {
                solve_diagnoses(ap);
            } catch (const Error& e) {
                raised = e.kind() == ErrorKind::ObservationNotEntailable;
            }
            c.expect(raised, "unexplainable instance " + std::to_string(i) + " not rejected");
            continue;
        }
        ++solved;
        AtomSet want;
        for (const auto& s : *expected)
            for (const std::string& v : s) want.insert(GroundAtom(Predicate{Symbol::intern("t"), 1}, {Constant(v)}));
        c.expect(relevant_hypotheses(ap) == want, "relevance mismatch on instance " + std::to_string(i));
    }
    c.expect(solved >= 30, "only " + std::to_string(solved) + " explainable instances");
    PropositionalAbduction paper = parse_phca(read_file(fixture_path("phca_example.phca")));
    c.expect(solve_diagnoses(encode_phca(paper)) == AtomFamily{atoms({"t(c)"})}, "worked example");
}

}  // namespace

int main() {
    std::vector<RandomCase> cases = corpus();
    bool ok = true;
    ok &= run(1, "author/journal causes and responsibilities", ac1);
    ok &= run(2, "graph causes and responsibilities", ac2);
    ok &= run(3, "circuit diagnosis and causal counterpart", ac3);
    ok &= run(4, "R/S diagnoses, relevance, necessity, degrees", ac4);
    ok &= run(5, "reduction identities on 200 random instances", [&](Check& c) { ac5(c, cases); });
    ok &= run(6, "brute-force oracle equivalence on 200 random instances", [&](Check& c) { ac6(c, cases); });
    ok &= run(7, "access view: view-safe deletions and vc-causes", ac7);
    ok &= run(8, "department causes under the inclusion dependency", ac8);
    ok &= run(9, "property suite, 500 trials each", ac9);
    ok &= run(10, "PHCA encoder relevance on 100 random instances", ac10);
    return ok ? 0 : 1;
}
