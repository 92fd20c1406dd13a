#include <doctest.h>

#include "modalk/automata.hpp"
#include "modalk/verify.hpp"
#include "tree_enum.hpp"

using namespace modalk;
using modalk::testing::enumerate_trees;
using modalk::testing::shape_to_model;

namespace {

SignatureSet sigset(std::initializer_list<const char*> letters) {
    SignatureSet out;
    for (const char* ell : letters) out.insert(ell);
    return out;
}

// every leaf-ending path must reach p: two states, q1 accepting,
// transitions (q0, {}, {q0}), (q0, {p}, {}) and (q0, {p}, {q1})
ModalAutomaton leaf_paths_reach_p() {
    ModalAutomaton a;
    a.signature = sigset({"p"});
    int q0 = a.add_state("q0");
    int q1 = a.add_state("q1");
    a.initial = q0;
    a.accepting.insert(q1);
    a.add_transition(q0, 0, {q0});
    a.add_transition(q0, 1, {});
    a.add_transition(q0, 1, {q1});
    return a;
}

PointedModel chain_with_p() {
    // w0 -> w1 -> {w2 -> w4(p), w3(p) -> w5}
    KripkeModel m;
    for (const char* w : {"w0", "w1", "w2", "w3", "w4", "w5"}) m.add_world(w);
    m.add_edge("w0", "w1");
    m.add_edge("w1", "w2");
    m.add_edge("w1", "w3");
    m.add_edge("w2", "w4");
    m.add_edge("w3", "w5");
    m.set_true("p", "w4");
    m.set_true("p", "w3");
    return PointedModel{std::move(m), "w0"};
}

}  // namespace

TEST_CASE("accepts: the leaf-paths-reach-p automaton") {
    ModalAutomaton a = leaf_paths_reach_p();
    CHECK(accepts(a, chain_with_p()));

    // a leaf-ending path with no p is rejected
    KripkeModel bare;
    bare.add_world("w0");
    bare.add_world("w1");
    bare.add_edge("w0", "w1");
    bare.declare_letter("p");
    CHECK(!accepts(a, PointedModel{bare, "w0"}));

    // initial state accepting: any single leaf is accepted
    ModalAutomaton trivial;
    trivial.signature = sigset({"p"});
    trivial.initial = trivial.add_state("q0");
    trivial.accepting.insert(0);
    KripkeModel leaf;
    leaf.add_world("w");
    leaf.declare_letter("p");
    CHECK(accepts(trivial, PointedModel{leaf, "w"}));

    // non-trees are rejected outright
    KripkeModel diamond_shape;
    for (const char* w : {"a", "b", "c", "d"}) diamond_shape.add_world(w);
    diamond_shape.add_edge("a", "b");
    diamond_shape.add_edge("a", "c");
    diamond_shape.add_edge("b", "d");
    diamond_shape.add_edge("c", "d");
    CHECK_THROWS_AS(accepts(a, PointedModel{diamond_shape, "a"}), Error);
}

TEST_CASE("is_acyclic") {
    CHECK(!is_acyclic(leaf_paths_reach_p()).has_value());  // q0 self-loop

    ModalAutomaton empty;
    empty.signature = sigset({"p"});
    empty.initial = empty.add_state("q0");
    empty.add_state("q1");
    auto w = is_acyclic(empty);
    REQUIRE(w.has_value());
    CHECK(w->rank.at("q0") == 0);
    CHECK(w->rank.at("q1") == 0);

    ModalAutomaton dd = formula_to_automaton(parse("<><>p"), sigset({"p"}));
    auto w2 = is_acyclic(dd);
    REQUIRE(w2.has_value());
    CHECK(w2->rank.at(dd.states.at(dd.initial)) == 3);
}

TEST_CASE("formula_to_automaton matches eval on hand cases") {
    SignatureSet sp = sigset({"p"});
    ModalAutomaton a = formula_to_automaton(parse("<>p"), sp);
    CHECK(is_acyclic(a).has_value());

    KripkeModel m;
    m.add_world("w");
    m.add_world("v");
    m.add_edge("w", "v");
    m.set_true("p", "v");
    CHECK(accepts(a, PointedModel{m, "w"}));

    // box-false: a single leaf is accepted, any child breaks it
    ModalAutomaton bf = formula_to_automaton(parse("[]false"), sp);
    KripkeModel leaf;
    leaf.add_world("w");
    leaf.declare_letter("p");
    CHECK(accepts(bf, PointedModel{leaf, "w"}));
    KripkeModel with_child;
    with_child.add_world("w");
    with_child.add_world("v");
    with_child.add_edge("w", "v");
    with_child.declare_letter("p");
    CHECK(!accepts(bf, PointedModel{with_child, "w"}));

    // a contradiction rejects every tree
    ModalAutomaton contra = formula_to_automaton(parse("p & ~p"), sp);
    for (const auto& shape : enumerate_trees({"p"}, 1, 2))
        CHECK(!accepts(contra, shape_to_model(shape, {"p"})));
}

TEST_CASE("acceptance equals eval on every small tree") {
    const char* formulas[] = {
        "<>p", "[]p", "p & <>(q & []false)", "[](p | q) & <>~p", "<>p & <>q & [](p | q)",
        "<><>p | []q",
    };
    std::vector<std::string> letters{"p", "q"};
    auto shapes = enumerate_trees(letters, 2, 2);
    SignatureSet spq = sigset({"p", "q"});
    for (const char* s : formulas) {
        Formula f = parse(s);
        ModalAutomaton a = formula_to_automaton(f, spq);
        for (const auto& shape : shapes) {
            PointedModel t = shape_to_model(shape, letters);
            CHECK(accepts(a, t) == eval(t.model, t.point, f));
        }
    }
}

TEST_CASE("full state space is acceptance-equivalent") {
    std::vector<std::string> letters{"p"};
    auto shapes = enumerate_trees(letters, 2, 2);
    SignatureSet sp = sigset({"p"});
    Formula f = parse("<>p & []~p | <>~p");
    ModalAutomaton lean = formula_to_automaton(f, sp);
    ModalAutomaton full = formula_to_automaton(f, sp, /*full_state_space=*/true);
    CHECK(full.states.size() > lean.states.size());
    for (const auto& shape : shapes) {
        PointedModel t = shape_to_model(shape, letters);
        CHECK(accepts(lean, t) == accepts(full, t));
    }
}

TEST_CASE("matching and brute-force assignment agree") {
    std::vector<std::string> letters{"p", "q"};
    auto shapes = enumerate_trees(letters, 1, 4);
    SignatureSet spq = sigset({"p", "q"});
    ModalAutomaton a = formula_to_automaton(parse("<>p & <>q & <>(p & q)"), spq);
    for (const auto& shape : shapes) {
        if (shape.kids.size() < 2) continue;
        PointedModel t = shape_to_model(shape, letters);
        CHECK(accepts(a, t, MatchStrategy::BruteForce) ==
              accepts(a, t, MatchStrategy::Matching));
    }
}

TEST_CASE("project keeps states and trims letters") {
    SignatureSet spq = sigset({"p", "q"});
    ModalAutomaton a = formula_to_automaton(parse("p & q"), spq);

    // identity projection leaves the transition set unchanged
    ModalAutomaton same = project(a, spq);
    CHECK(same.transitions == a.transitions);

    // projecting p&q to {p} is equivalent to p
    ModalAutomaton proj = project(a, sigset({"p"}));
    CHECK(is_acyclic(proj).has_value());
    Formula back = expand_nabla(automaton_to_formula(proj));
    CHECK(equivalent(back, parse("p")));
}

TEST_CASE("projection accepts exactly the reducts of accepted trees") {
    // exhaustive over {p}-trees: Proj_p(A) accepts t iff some expansion of t
    // with a q-valuation is accepted by A
    const char* formulas[] = {"p & q", "<>q & [](p | q)", "[](q -> p) & <>q"};
    SignatureSet spq = sigset({"p", "q"});
    SignatureSet sp = sigset({"p"});
    auto reduct_shapes = enumerate_trees({"p"}, 2, 2);
    for (const char* s : formulas) {
        ModalAutomaton a = formula_to_automaton(parse(s), spq);
        ModalAutomaton proj = project(a, sp);
        for (const auto& shape : reduct_shapes) {
            PointedModel t = shape_to_model(shape, {"p"});
            bool projected_accepts = accepts(proj, t);

            // enumerate every q-expansion of t
            bool some_expansion = false;
            std::size_t n = t.model.world_count();
            for (std::uint32_t mask = 0; mask < (1u << n) && !some_expansion; ++mask) {
                KripkeModel expanded = KripkeModel::from_json(t.model.to_json());
                expanded.declare_letter("q");
                for (std::size_t w = 0; w < n; ++w)
                    if ((mask >> w) & 1u) expanded.set_true("q", expanded.worlds()[w]);
                some_expansion = accepts(a, PointedModel{expanded, t.point});
            }
            CHECK(projected_accepts == some_expansion);
        }
    }
}

TEST_CASE("automaton_to_formula") {
    // a lone accepting initial state denotes truth
    ModalAutomaton trivial;
    trivial.signature = sigset({"p"});
    trivial.initial = trivial.add_state("q0");
    trivial.accepting.insert(0);
    CHECK(automaton_to_formula(trivial) == top());

    // no transitions and not accepting: the empty disjunction
    ModalAutomaton dead;
    dead.signature = sigset({"p"});
    dead.initial = dead.add_state("q0");
    CHECK(automaton_to_formula(dead) == bot());

    // round trip for <>p
    ModalAutomaton a = formula_to_automaton(parse("<>p"), sigset({"p"}));
    Formula back = expand_nabla(automaton_to_formula(a));
    CHECK(equivalent(back, parse("<>p")));

    CHECK_THROWS_AS(automaton_to_formula(leaf_paths_reach_p()), Error);
}

TEST_CASE("round trip is an equivalence on a corpus sample") {
    for (Formula f : corpus_formulas(31, 12)) {
        if (contains_nabla(f)) continue;
        if (sig(f).size() > 3) continue;
        ModalAutomaton a = formula_to_automaton(f, sig(f));
        Formula back = expand_nabla(automaton_to_formula(a));
        CHECK(equivalent(back, f));
    }
}

TEST_CASE("craig_via_automata") {
    Formula theta = craig_via_automata(parse("<>(p & q)"), parse("<>(p | r)"));
    CHECK(equivalent(theta, parse("<>p")));
    CHECK(check_craig(theta, parse("<>(p & q)"), parse("<>(p | r)")).craig_ok());

    // false antecedent projects to false
    CHECK(equivalent(craig_via_automata(parse("false"), parse("p")), bot()));

    CHECK_THROWS_AS(craig_via_automata(parse("<>p"), parse("[]p")), Error);
}

TEST_CASE("automaton JSON export") {
    ModalAutomaton a = leaf_paths_reach_p();
    std::string j = a.to_json();
    CHECK(j.find("\"states\"") != std::string::npos);
    CHECK(j.find("\"transitions\"") != std::string::npos);
    CHECK(j.find("q0") != std::string::npos);
}
