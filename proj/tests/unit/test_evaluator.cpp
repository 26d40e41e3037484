#include <gtest/gtest.h>

#include <thread>

#include "fixtures.hpp"
#include "generators.hpp"
#include "naive.hpp"
#include "whyd/error.hpp"
#include "whyd/evaluator.hpp"

using namespace whyd;
using namespace whyd::testing;

TEST(Fixpoint, TransitiveClosure) {
    Program q = load_program("graph.dl");
    Instance d = load_instance("graph.facts").instance;
    MinimalModel m = evaluate_fixpoint(q, d);
    EXPECT_TRUE(m.contains(atom("p(c,e)")));
    EXPECT_TRUE(m.contains(atom("ans(c,e)")));
    EXPECT_FALSE(m.contains(atom("p(e,c)")));
    EXPECT_EQ(m.round(atom("e(a,b)")), 0u);
    EXPECT_EQ(m.round(atom("p(a,b)")), 1u);
    EXPECT_GT(*m.round(atom("p(c,e)")), 1u);
    std::set<GroundAtom> closure = m.extension(Predicate{Symbol::intern("p"), 2});
    EXPECT_EQ(closure.size(),
              naive_answers(q.with_answer(Predicate{Symbol::intern("p"), 2}), d.atoms()).size());
}

TEST(Fixpoint, NoRulesGivesTheInstance) {
    Program q({}, Predicate{Symbol::intern("ans"), 0});
    Instance d = load_instance("rs.facts").instance;
    MinimalModel m = evaluate_fixpoint(q, d);
    std::vector<GroundAtom> all = d.atoms();
    EXPECT_EQ(m.atoms(), std::set<GroundAtom>(all.begin(), all.end()));
}

TEST(Fixpoint, CircuitWithFaultyOr) {
    Program q = load_program("circuit.dl");
    Instance d = load_instance("circuit.facts").instance;
    Instance with_or = d.without(atoms({"faulty(and)"}));
    EXPECT_TRUE(evaluate_fixpoint(q, with_or).contains(atom("zero(d)")));
    Instance healthy = d.without(atoms({"faulty(and)", "faulty(or)"}));
    EXPECT_FALSE(evaluate_fixpoint(q, healthy).contains(atom("zero(d)")));
    EXPECT_TRUE(evaluate_fixpoint(q, healthy).contains(atom("one(d)")));
}

TEST(Holds, GraphAnswers) {
    Program q = load_program("graph.dl");
    Instance d = load_instance("graph.facts").instance;
    EXPECT_TRUE(holds(q, d, atom("ans(c,e)")));
    EXPECT_FALSE(holds(q, d.without(labelled(d, {"t2"})), atom("ans(c,e)")));
    EXPECT_THROW(holds(q, d, atom("zzz(c)")), Error);
}

TEST(Holds, GroundRuleFactsOverEmptyInstance) {
    Program q = parse_program("p(a).\nans(X) :- p(X).");
    EXPECT_TRUE(holds(q, Instance{}, atom("ans(a)")));
    EXPECT_FALSE(holds(q, Instance{}, atom("ans(b)")));
}

TEST(Answers, FixtureViews) {
    std::set<GroundAtom> aj = answers(load_program("aj.dl"), load_instance("aj.facts").instance);
    EXPECT_EQ(aj.size(), 6u);
    EXPECT_TRUE(aj.contains(atom("ans(john,xml)")));
    std::set<GroundAtom> acc = answers(load_program("access.dl"), load_instance("access.facts").instance);
    EXPECT_EQ(acc.size(), 7u);
    EXPECT_TRUE(acc.contains(atom("access(tom,f3)")));
    Program boolean = parse_program("ans :- r(X, Y), s(Y).");
    Instance d;
    d.add_endogenous(atom("r(a,b)"));
    EXPECT_TRUE(answers(boolean, d).empty());
}

TEST(Answers, BuiltinsFilter) {
    Program q = parse_program("ans(X, Y) :- e(X, Y), X != Y.\nans(X, X) :- s(X), X = a.");
    Instance d;
    for (const char* f : {"e(a,a)", "e(a,b)", "s(a)", "s(b)"}) d.add_endogenous(atom(f));
    EXPECT_EQ(answers(q, d), atoms({"ans(a,b)", "ans(a,a)"}));
}

TEST(Evaluator, SemiNaiveEqualsNaive) {
    Rng rng(31);
    CaseOptions opts;
    opts.max_rules = 6;
    for (int trial = 0; trial < 500; ++trial) {
        Program q = random_program(rng, opts);
        Instance d = random_instance(rng, trial % 13, 0);
        std::vector<GroundAtom> facts = d.atoms();
        EXPECT_EQ(evaluate_fixpoint(q, d).atoms(), naive_model(q, facts)) << to_string(q.rules().front());
    }
}

TEST(Evaluator, Monotone) {
    Rng rng(32);
    for (int trial = 0; trial < 500; ++trial) {
        Program q = random_program(rng, CaseOptions{});
        Instance d1 = random_instance(rng, trial % 8, 0);
        Instance d2 = d1;
        for (int k = 0; k < 3; ++k) {
            GroundAtom f = random_fact(rng);
            if (!d2.contains(f)) d2.add_endogenous(f);
        }
        std::set<GroundAtom> a1 = answers(q, d1), a2 = answers(q, d2);
        EXPECT_TRUE(std::includes(a2.begin(), a2.end(), a1.begin(), a1.end()));
    }
}

TEST(Evaluator, Idempotent) {
    Rng rng(33);
    for (int trial = 0; trial < 300; ++trial) {
        Program q = random_program(rng, CaseOptions{});
        Instance d = random_instance(rng, trial % 10, 0);
        MinimalModel m = evaluate_fixpoint(q, d);
        Evaluator ev(q);
        std::set<GroundAtom> all = m.atoms();
        EXPECT_EQ(ev.model(std::vector<GroundAtom>(all.begin(), all.end())).atoms(), all);
    }
}

TEST(Evaluator, EntailsMatchesModel) {
    Rng rng(34);
    for (int trial = 0; trial < 300; ++trial) {
        RandomCase c = random_case(rng);
        Evaluator ev(c.program);
        std::vector<GroundAtom> facts = c.instance.atoms();
        EXPECT_TRUE(ev.entails(facts, {c.answer}));
        facts.resize(facts.size() / 2);
        EXPECT_EQ(ev.entails(facts, {c.answer}), ev.model(facts).contains(c.answer));
    }
}

TEST(Evaluator, ProvenanceSupportIsInsideTheModel) {
    Rng rng(35);
    for (int trial = 0; trial < 200; ++trial) {
        RandomCase c = random_case(rng);
        Evaluator ev(c.program);
        std::vector<GroundAtom> facts = c.instance.atoms();
        Provenance prov = ev.provenance(facts);
        std::set<GroundAtom> model = ev.model(facts).atoms();
        std::set<GroundAtom> support = prov.support({c.answer});
        EXPECT_TRUE(support.contains(c.answer));
        EXPECT_TRUE(std::includes(model.begin(), model.end(), support.begin(), support.end()));
        for (const Derivation& der : prov.derivations)
            EXPECT_TRUE(model.contains(prov.atoms[der.head]));
    }
}

TEST(Evaluator, ConcurrentUse) {
    Program q = load_program("graph.dl");
    Instance d = load_instance("graph.facts").instance;
    Evaluator ev(q);
    std::vector<GroundAtom> facts = d.atoms();
    std::set<GroundAtom> expected = ev.answers(facts);
    std::vector<std::thread> threads;
    std::atomic<int> mismatches{0};
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&] {
            for (int i = 0; i < 50; ++i)
                if (ev.answers(facts) != expected) ++mismatches;
        });
    for (std::thread& t : threads) t.join();
    EXPECT_EQ(mismatches.load(), 0);
}
