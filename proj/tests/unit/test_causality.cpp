#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracle.hpp"
#include "whyd/causality.hpp"
#include "whyd/error.hpp"
#include "whyd/evaluator.hpp"

using namespace whyd;
using namespace whyd::testing;

namespace {

struct Fixture {
    Program q;
    Instance d;
};

Fixture aj() { return {load_program("aj.dl"), load_instance("aj.facts").instance}; }
Fixture aj_authors() { return {load_program("aj.dl"), load_instance("aj_author_endogenous.facts").instance}; }
Fixture graph() { return {load_program("graph.dl"), load_instance("graph.facts").instance}; }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::SyntaxError;
}

}  // namespace

TEST(Causes, AuthorJournalAllEndogenous) {
    Fixture f = aj();
    GroundAtom a = atom("ans(john,xml)");
    EXPECT_EQ(causes(f.d, f.q, a), atoms({"author(john,tods)", "author(john,tkde)", "journal(tkde,xml,30)",
                                          "journal(tods,xml,32)"}));
    for (const CauseReport& r : cause_reports(f.d, f.q, a)) EXPECT_EQ(r.responsibility, Ratio::inverse_of(2));
    EXPECT_EQ(most_responsible_causes(f.d, f.q, a), causes(f.d, f.q, a));
}

TEST(Causes, AuthorJournalJournalExogenous) {
    Fixture f = aj_authors();
    EXPECT_EQ(causes(f.d, f.q, atom("ans(john,xml)")), atoms({"author(john,tkde)", "author(john,tods)"}));
}

TEST(Causes, Graph) {
    Fixture f = graph();
    GroundAtom a = atom("ans(c,e)");
    EXPECT_EQ(causes(f.d, f.q, a), labelled(f.d, {"t1", "t2", "t4", "t5", "t6", "t7"}));
    EXPECT_EQ(responsibility(f.d, f.q, a, labelled(f.d, "t2")), Ratio::one());
    EXPECT_EQ(responsibility(f.d, f.q, a, labelled(f.d, "t3")), Ratio::zero());
    EXPECT_EQ(most_responsible_causes(f.d, f.q, a), labelled(f.d, {"t2"}));
}

TEST(Causes, Counterfactual) {
    Fixture g = graph();
    EXPECT_TRUE(is_counterfactual_cause(g.d, g.q, atom("ans(c,e)"), labelled(g.d, "t2")));
    EXPECT_FALSE(is_counterfactual_cause(g.d, g.q, atom("ans(c,e)"), labelled(g.d, "t1")));
    Fixture f = aj();
    EXPECT_FALSE(is_counterfactual_cause(f.d, f.q, atom("ans(john,xml)"), atom("author(john,tods)")));
}

TEST(ContingencySets, PaperFamilies) {
    Fixture f = aj();
    EXPECT_EQ(minimal_contingency_sets(f.d, f.q, atom("ans(john,xml)"), atom("author(john,tods)")),
              (AtomFamily{atoms({"author(john,tkde)"}), atoms({"journal(tkde,xml,30)"})}));
    EXPECT_EQ(responsibility(f.d, f.q, atom("ans(john,xml)"), atom("author(john,tods)")), Ratio::inverse_of(2));
    Fixture g = graph();
    EXPECT_EQ(minimal_contingency_sets(g.d, g.q, atom("ans(c,e)"), labelled(g.d, "t2")), AtomFamily{AtomSet{}});
}

TEST(ContingencySets, RepairViewMatchesOracle) {
    Program q = load_program("repair.dl");
    Instance d = load_instance("repair.facts").instance;
    GroundAtom a = atom("v(a1)");
    GroundAtom tau = atom("r(a2,a1)");
    AtomFamily family = minimal_contingency_sets(d, q, a, tau);
    EXPECT_EQ(family, Oracle(d, q, a).contingency_sets(tau));
    EXPECT_EQ(family, AtomFamily{atoms({"r(a3,a1)"})});
    EXPECT_EQ(responsibility(d, q, a, tau), Ratio::inverse_of(2));
    EXPECT_EQ(responsibility(d, q, a, atom("s(a1)")), Ratio::one());
}

TEST(Causes, Errors) {
    Fixture f = aj_authors();
    EXPECT_EQ(kind_of([&] { causes(f.d, f.q, atom("ans(nobody,xml)")); }), ErrorKind::NotAnAnswer);
    EXPECT_EQ(kind_of([&] { responsibility(f.d, f.q, atom("ans(john,xml)"), atom("journal(tods,xml,32)")); }),
              ErrorKind::NotEndogenous);
    EXPECT_EQ(kind_of([&] { is_counterfactual_cause(f.d, f.q, atom("ans(john,xml)"), atom("journal(tods,xml,32)")); }),
              ErrorKind::NotEndogenous);
    EXPECT_EQ(kind_of([&] { minimal_contingency_sets(f.d, f.q, atom("ans(john,xml)"), atom("author(joe,tkde)")); }),
              ErrorKind::NotACause);
}

TEST(Causes, ExogenousSupportLeavesNoCause) {
    Program q = load_program("aj.dl");
    Instance d = load_instance("aj.facts").instance.all_endogenous();
    Instance x;
    for (const GroundAtom& a : d.atoms()) x.add_exogenous(a);
    x.erase(atom("author(john,tods)"));
    x.add_endogenous(atom("author(john,tods)"));
    EXPECT_TRUE(causes(x, q, atom("ans(john,xml)")).empty());
    EXPECT_TRUE(most_responsible_causes(x, q, atom("ans(john,xml)")).empty());
}

TEST(Reports, CanonicalOrderAndCap) {
    Fixture f = aj();
    SearchOptions opts;
    opts.max_contingency_sets = 1;
    std::vector<CauseReport> reports = cause_reports(f.d, f.q, atom("ans(john,xml)"), opts);
    ASSERT_EQ(reports.size(), 4u);
    for (const CauseReport& r : reports) {
        EXPECT_TRUE(r.truncated);
        EXPECT_EQ(r.minimal_contingency_sets.size(), 1u);
        EXPECT_EQ(r.responsibility, Ratio::inverse_of(2));
    }
    std::vector<AtomSet> order = canonical_order({atoms({"s(a)", "s(b)"}), atoms({"s(c)"}), AtomSet{}});
    EXPECT_EQ(order, (std::vector<AtomSet>{AtomSet{}, atoms({"s(c)"}), atoms({"s(a)", "s(b)"})}));
}

TEST(CausalityProperties, AgreesWithOracle) {
    Rng rng(41);
    for (int trial = 0; trial < 150; ++trial) {
        RandomCase c = random_case(rng);
        Oracle oracle(c.instance, c.program, c.answer);
        CausalAnalysis analysis(c.instance, c.program, c.answer);
        ASSERT_EQ(analysis.causes(), oracle.causes()) << "trial " << trial;
        for (const GroundAtom& t : c.instance.endogenous()) {
            EXPECT_EQ(analysis.contingency_sets(t), oracle.contingency_sets(t));
            EXPECT_EQ(analysis.responsibility(t), oracle.responsibility(t));
        }
        EXPECT_EQ(analysis.most_responsible(), oracle.most_responsible());
    }
}

TEST(CausalityProperties, CounterfactualCharacterisations) {
    Rng rng(42);
    for (int trial = 0; trial < 150; ++trial) {
        RandomCase c = random_case(rng);
        CausalAnalysis analysis(c.instance, c.program, c.answer);
        for (const GroundAtom& t : c.instance.endogenous()) {
            bool cf = is_counterfactual_cause(c.instance, c.program, c.answer, t);
            EXPECT_EQ(cf, analysis.responsibility(t) == Ratio::one());
            EXPECT_EQ(cf, analysis.contingency_sets(t).contains(AtomSet{}));
        }
    }
}

TEST(CausalityProperties, NonEmptyIffExogenousPartFails) {
    Rng rng(43);
    for (int trial = 0; trial < 150; ++trial) {
        RandomCase c = random_case(rng);
        Instance exo = c.instance.without(c.instance.endogenous());
        EXPECT_EQ(causes(c.instance, c.program, c.answer).empty(), holds(c.program, exo, c.answer));
    }
}

TEST(CausalityProperties, EveryContingencySetIsMinimal) {
    Rng rng(44);
    for (int trial = 0; trial < 150; ++trial) {
        RandomCase c = random_case(rng);
        for (const CauseReport& r : cause_reports(c.instance, c.program, c.answer)) {
            for (const AtomSet& g : r.minimal_contingency_sets) {
                AtomSet with_tau = g;
                with_tau.insert(r.cause);
                EXPECT_TRUE(holds(c.program, c.instance.without(g), c.answer));
                EXPECT_FALSE(holds(c.program, c.instance.without(with_tau), c.answer));
                for (const GroundAtom& x : g) {
                    AtomSet smaller = g;
                    smaller.erase(x);
                    AtomSet smaller_tau = smaller;
                    smaller_tau.insert(r.cause);
                    bool still_valid = holds(c.program, c.instance.without(smaller), c.answer) &&
                                       !holds(c.program, c.instance.without(smaller_tau), c.answer);
                    EXPECT_FALSE(still_valid);
                }
            }
        }
    }
}

TEST(CausalityProperties, MonotoneUnderEndogenousInsertion) {
    Rng rng(45);
    for (int trial = 0; trial < 150; ++trial) {
        RandomCase c = random_case(rng);
        Instance bigger = c.instance;
        for (int k = 0; k < 2; ++k) {
            GroundAtom f = random_fact(rng);
            if (!bigger.contains(f)) bigger.add_endogenous(f);
        }
        AtomSet before = causes(c.instance, c.program, c.answer);
        AtomSet after = causes(bigger, c.program, c.answer);
        EXPECT_TRUE(is_subset(before, after));
    }
}

TEST(CausalityProperties, ResultsIndependentOfJobs) {
    Rng rng(46);
    for (int trial = 0; trial < 40; ++trial) {
        RandomCase c = random_case(rng);
        SearchOptions one, four;
        four.jobs = 4;
        std::vector<CauseReport> a = cause_reports(c.instance, c.program, c.answer, one);
        std::vector<CauseReport> b = cause_reports(c.instance, c.program, c.answer, four);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].cause, b[i].cause);
            EXPECT_EQ(a[i].minimal_contingency_sets, b[i].minimal_contingency_sets);
        }
    }
}
