#include <doctest.h>

#include <cmath>

#include "modalk/nabla.hpp"
#include "modalk/verify.hpp"
#include "tree_enum.hpp"

using namespace modalk;

TEST_CASE("is_nabla_form accepts the grammar and nothing else") {
    CHECK(is_nabla_form(parse("true")));
    CHECK(is_nabla_form(parse("p & ~q")));
    CHECK(is_nabla_form(parse("nabla{p, q & r}")));
    CHECK(is_nabla_form(parse("p & nabla{q}")));
    CHECK(is_nabla_form(parse("p | q & nabla{true}")));

    CHECK(!is_nabla_form(parse("<>p")));
    CHECK(!is_nabla_form(parse("p & p")));          // duplicate letter in pi
    CHECK(!is_nabla_form(parse("p & ~p")));         // clash in pi
    CHECK(!is_nabla_form(parse("nabla{<>p}")));     // member not normal
    CHECK(!is_nabla_form(parse("nabla{p} & p")));   // wrong conjunct order
}

TEST_CASE("to_nabla_nf follows the normalization cases") {
    // the worked example: <>p & [](p|q) is equivalent to nabla{p} | nabla{p,q}
    Formula nf = to_nabla_nf(parse("<>p & [](p|q)"));
    CHECK(is_nabla_form(nf));
    CHECK(equivalent(nf, parse("nabla{p} | nabla{p, q}")));

    // a bare box becomes nabla{nf(body)} | nabla{}
    Formula boxed = to_nabla_nf(parse("[]p"));
    CHECK(boxed == disj(nabla({prop("p")}), nabla({})));

    // clashing literal blocks collapse to false
    CHECK(to_nabla_nf(parse("p & ~p")) == bot());

    // diamonds pair the body with an unconstrained sibling
    CHECK(to_nabla_nf(parse("<>p")) == nabla({prop("p"), top()}));

    CHECK_THROWS_AS(to_nabla_nf(parse("nabla{p}")), Error);
}

TEST_CASE("to_nabla_nf is equivalence-preserving on a corpus sample") {
    auto corpus = corpus_formulas(11, 30);
    for (Formula f : corpus) {
        if (contains_nabla(f)) continue;
        Formula nf = to_nabla_nf(f);
        CHECK(is_nabla_form(nf));
        CHECK(equivalent(nf, f));
        // conversion never introduces polarities
        PolarityReport before = polarity(f), after = polarity(nf);
        CHECK(after.positive.subset_of(before.positive));
        CHECK(after.negative.subset_of(before.negative));
    }
}

TEST_CASE("to_nabla_nf stays within the quadratic-exponent size bound") {
    auto corpus = corpus_formulas(13, 25);
    for (Formula f : corpus) {
        if (contains_nabla(f)) continue;
        double n = static_cast<double>(size_dag(f));
        double bound = std::pow(2.0, 2.0 * n * n);
        CHECK(static_cast<double>(size_dag(to_nabla_nf(f))) <= bound);
    }
}

TEST_CASE("remove_props drops letters from literal blocks") {
    // drop q from p&q & nabla{q}: the block keeps p, the member becomes true
    SignatureSet drop_q;
    drop_q.insert("q");
    Formula f = parse("p & q & nabla{q}");
    REQUIRE(is_nabla_form(f));
    Formula out = remove_props(f, drop_q);
    CHECK(out == parse("p & nabla{true}"));

    // empty drop set is the identity
    CHECK(remove_props(f, SignatureSet{}) == f);

    // dropping p across a disjunction of nablas
    SignatureSet drop_p;
    drop_p.insert("p");
    Formula g = parse("nabla{p} | nabla{p, q}");
    Formula out2 = remove_props(g, drop_p);
    CHECK(out2 == parse("nabla{true} | nabla{true, q}"));
    CHECK(is_nabla_form(out2));

    // a block that loses everything becomes true
    Formula h = parse("p & nabla{q}");
    CHECK(remove_props(h, drop_p) == parse("nabla{q}"));
    CHECK(remove_props(parse("p"), drop_p) == top());

    CHECK_THROWS_AS(remove_props(parse("<>p"), drop_p), Error);
}

TEST_CASE("remove_props preserves the grammar") {
    auto corpus = corpus_formulas(17, 25);
    SignatureSet drop;
    drop.insert("q");
    for (Formula f : corpus) {
        if (contains_nabla(f)) continue;
        Formula nf = to_nabla_nf(f);
        CHECK(is_nabla_form(remove_props(nf, drop)));
    }
}

TEST_CASE("uniform_interpolant") {
    SignatureSet keep_p;
    keep_p.insert("p");
    Formula u = uniform_interpolant(parse("<>(p & q)"), keep_p);
    CHECK(sig(u).letters() == std::vector<std::string>{"p"});
    CHECK(equivalent(u, parse("<>p")));

    // keeping the whole signature preserves equivalence
    Formula f = parse("<>p & [](p | q)");
    CHECK(equivalent(uniform_interpolant(f, sig(f)), f));

    // a contradiction projects to false
    CHECK(equivalent(uniform_interpolant(parse("p & ~p"), SignatureSet{}), bot()));
}

TEST_CASE("uniform_interpolant is uniform over corpus consequents") {
    Formula f = parse("<>(p & q) & [](p | r)");
    SignatureSet keep;
    keep.insert("p");
    Formula u = uniform_interpolant(f, keep);
    CHECK(valid_implication(f, u));
    for (Formula psi : corpus_formulas(23, 25)) {
        if (!set_difference(set_intersection(sig(psi), sig(f)), keep).empty()) continue;
        if (!valid_implication(f, psi)) continue;
        CHECK(valid_implication(u, psi));
    }
}

TEST_CASE("craig_via_nabla") {
    Formula theta = craig_via_nabla(parse("<>(p & q)"), parse("<>(p | r)"));
    CHECK(equivalent(theta, parse("<>p")));
    CHECK(check_craig(theta, parse("<>(p & q)"), parse("<>(p | r)")).craig_ok());

    // self-implication drops nothing
    Formula self = craig_via_nabla(parse("<>p"), parse("<>p"));
    CHECK(equivalent(self, parse("<>p")));

    CHECK_THROWS_AS(craig_via_nabla(parse("<>p"), parse("[]p")), Error);
}

TEST_CASE("removal operator matches its bisimulation semantics") {
    // Over depth-1 trees the bisimulation class is (root valuation, set of
    // child valuations), so a branch-4 pool over two letters realizes every
    // class: eval(m, w, remove_props(nf(f), P)) must hold exactly when some
    // pool tree satisfies f and is bisimilar to (m, w) over sig(f) \ P.
    const char* formulas[] = {"<>(p & q)", "q & [](p | q)", "<>q & <>~q", "[]~q | p"};
    SignatureSet drop;
    drop.insert("q");

    auto model_shapes = modalk::testing::enumerate_trees({"p", "q"}, 1, 2);
    auto pool_shapes = modalk::testing::enumerate_trees({"p", "q"}, 1, 4);
    std::vector<PointedModel> pool;
    for (const auto& shape : pool_shapes)
        pool.push_back(modalk::testing::shape_to_model(shape, {"p", "q"}));

    for (const char* s : formulas) {
        Formula f = parse(s);
        Formula removed = expand_nabla(remove_props(to_nabla_nf(f), drop));
        SignatureSet kept = set_difference(sig(f), drop);
        for (const auto& shape : model_shapes) {
            PointedModel m = modalk::testing::shape_to_model(shape, {"p", "q"});
            bool removed_holds = eval(m.model, m.point, removed);
            bool witness_exists = false;
            for (const auto& t : pool) {
                if (!eval(t.model, t.point, f)) continue;
                if (largest_bisimulation(m.model, t.model, kept).contains(m.point, t.point)) {
                    witness_exists = true;
                    break;
                }
            }
            CHECK(removed_holds == witness_exists);
        }
    }
}
