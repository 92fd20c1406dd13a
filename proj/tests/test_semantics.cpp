#include <doctest.h>

#include <algorithm>

#include "modalk/formula.hpp"
#include "modalk/semantics.hpp"

using namespace modalk;

namespace {

// M is w0 -> w1 with a loop on w1 and p at w1; N is the stretched variant
// v0 -> v1 -> v2 with a loop on v2 and p at v1, v2.  The two points are
// bisimilar.
KripkeModel stretched_loop_m() {
    KripkeModel m;
    m.add_world("w0");
    m.add_world("w1");
    m.add_edge("w0", "w1");
    m.add_edge("w1", "w1");
    m.set_true("p", "w1");
    return m;
}

KripkeModel stretched_loop_n() {
    KripkeModel n;
    n.add_world("v0");
    n.add_world("v1");
    n.add_world("v2");
    n.add_edge("v0", "v1");
    n.add_edge("v1", "v2");
    n.add_edge("v2", "v2");
    n.set_true("p", "v1");
    n.set_true("p", "v2");
    return n;
}

// product factors over {q}: M forks after one step, N forks immediately and
// rejoins on a single final world
KripkeModel fork_late_m() {
    KripkeModel m;
    for (const char* w : {"w1", "w2", "w3a", "w3b"}) m.add_world(w);
    m.add_edge("w1", "w2");
    m.add_edge("w2", "w3a");
    m.add_edge("w2", "w3b");
    m.set_true("q", "w1");
    m.set_true("q", "w3a");
    m.set_true("q", "w3b");
    return m;
}

KripkeModel fork_early_n() {
    KripkeModel n;
    for (const char* v : {"v1", "v2a", "v2b", "v3"}) n.add_world(v);
    n.add_edge("v1", "v2a");
    n.add_edge("v1", "v2b");
    n.add_edge("v2a", "v3");
    n.add_edge("v2b", "v3");
    n.set_true("q", "v1");
    n.set_true("q", "v3");
    return n;
}

BisimRelation fork_bisim() {
    BisimRelation z;
    z.signature.insert("q");
    z.pairs = {{"w1", "v1"}, {"w2", "v2a"}, {"w2", "v2b"}, {"w3a", "v3"}, {"w3b", "v3"}};
    return z;
}

}  // namespace

TEST_CASE("eval follows the truth-table clauses") {
    KripkeModel m = stretched_loop_m();
    CHECK(eval(m, "w0", parse("<>p")));
    CHECK(!eval(m, "w0", parse("p")));
    CHECK(eval(m, "w0", parse("true")));
    CHECK(eval(m, "w1", parse("[]p")));
    CHECK(!eval(m, "w0", parse("[]<>~p")));

    // a world with no successors satisfies []false
    KripkeModel leaf;
    leaf.add_world("w");
    CHECK(eval(leaf, "w", parse("[]false")));
    CHECK(!eval(leaf, "w", parse("<>true")));

    // unknown letters are false everywhere
    CHECK(!eval(m, "w0", parse("zz")));
    CHECK_THROWS_AS(eval(m, "nope", parse("p")), Error);
}

TEST_CASE("eval handles nabla directly") {
    KripkeModel m;
    m.add_world("w");
    m.add_world("a");
    m.add_world("b");
    m.add_edge("w", "a");
    m.add_edge("w", "b");
    m.set_true("p", "a");
    m.set_true("q", "b");
    // every member witnessed, every successor covered
    CHECK(eval(m, "w", parse("nabla{p, q}")));
    CHECK(!eval(m, "w", parse("nabla{p}")));      // b covered by nothing
    CHECK(!eval(m, "w", parse("nabla{p, q, p & q}")));  // p&q unwitnessed
    // nabla{} holds exactly at leaves
    CHECK(!eval(m, "w", parse("nabla{}")));
    CHECK(eval(m, "a", parse("nabla{}")));
}

TEST_CASE("check_bisimulation on the stretched loop") {
    KripkeModel m = stretched_loop_m(), n = stretched_loop_n();
    BisimRelation z;
    z.signature.insert("p");
    z.pairs = {{"w0", "v0"}, {"w1", "v1"}, {"w1", "v2"}};
    CHECK(check_bisimulation(m, n, z));

    BisimRelation empty;
    empty.signature.insert("p");
    CHECK(check_bisimulation(m, n, empty));

    BisimRelation bad;
    bad.signature.insert("p");
    bad.pairs = {{"w0", "v1"}};  // atomic harmony fails
    CHECK(!check_bisimulation(m, n, bad));
}

TEST_CASE("largest_bisimulation relates the stretched-loop points") {
    KripkeModel m = stretched_loop_m(), n = stretched_loop_n();
    SignatureSet tau;
    tau.insert("p");
    BisimRelation z = largest_bisimulation(m, n, tau);
    CHECK(check_bisimulation(m, n, z));
    CHECK(z.contains("w0", "v0"));
    CHECK(z.contains("w1", "v1"));
    CHECK(z.contains("w1", "v2"));
    CHECK(!z.contains("w0", "v1"));

    // m against itself contains the identity
    BisimRelation self = largest_bisimulation(m, m, tau);
    for (const auto& w : m.worlds()) CHECK(self.contains(w, w));

    // refining a fixed point changes nothing
    BisimRelation again = largest_bisimulation(m, n, tau);
    CHECK(again.pairs == z.pairs);
}

TEST_CASE("bisimulation invariance of modal formulas") {
    KripkeModel m = stretched_loop_m(), n = stretched_loop_n();
    SignatureSet tau;
    tau.insert("p");
    BisimRelation z = largest_bisimulation(m, n, tau);
    const char* formulas[] = {"p", "<>p", "[]p", "<>(p & <>p)", "[](p | <>~p)", "<>[]p"};
    for (const auto& [w, v] : z.pairs)
        for (const char* s : formulas) CHECK(eval(m, w, parse(s)) == eval(n, v, parse(s)));
}

TEST_CASE("bisimulation_product of the fork models") {
    KripkeModel m = fork_late_m(), n = fork_early_n();
    BisimRelation z = fork_bisim();
    CHECK(check_bisimulation(m, n, z));

    KripkeModel prod = bisimulation_product(m, n, z);
    CHECK(prod.world_count() == 5);

    int edges = 0;
    for (const auto& a : prod.worlds())
        for (const auto& b : prod.worlds())
            if (prod.has_edge(a, b)) ++edges;
    CHECK(edges == 6);

    CHECK(prod.letter_true("q", "(w1,v1)"));
    CHECK(prod.letter_true("q", "(w3a,v3)"));
    CHECK(prod.letter_true("q", "(w3b,v3)"));
    CHECK(!prod.letter_true("q", "(w2,v2a)"));

    // the two projection relations are bisimulations
    BisimRelation z1, z2;
    z1.signature = z.signature;
    z2.signature = z.signature;
    for (const auto& [a, b] : z.pairs) {
        z1.pairs.emplace_back("(" + a + "," + b + ")", a);
        z2.pairs.emplace_back("(" + a + "," + b + ")", b);
    }
    CHECK(check_bisimulation(prod, m, z1));
    CHECK(check_bisimulation(prod, n, z2));

    // diagonal product of a model with itself is isomorphic to it
    SignatureSet sp = m.signature();
    BisimRelation diag;
    diag.signature = sp;
    for (const auto& w : m.worlds()) diag.pairs.emplace_back(w, w);
    KripkeModel dp = bisimulation_product(m, m, diag);
    CHECK(dp.world_count() == m.world_count());

    BisimRelation empty;
    empty.signature = sp;
    CHECK(bisimulation_product(m, n, empty).world_count() == 0);

    BisimRelation notbisim;
    notbisim.signature = sp;
    notbisim.pairs = {{"w1", "v2a"}};
    CHECK_THROWS_AS(bisimulation_product(m, n, notbisim), Error);
}

TEST_CASE("amalgamate expands the product with private letters") {
    // the fork factors with private letters: p at w3a in M (sig {p,q}),
    // r at v2b in N (sig {q,r})
    KripkeModel m = fork_late_m();
    m.set_true("p", "w3a");
    KripkeModel n = fork_early_n();
    n.set_true("r", "v2b");

    PointedModel pm{m, "w1"}, pn{n, "v1"};
    BisimRelation z = fork_bisim();

    PointedModel amalgam = amalgamate(pm, pn, z);
    CHECK(amalgam.point == "(w1,v1)");
    CHECK(amalgam.model.world_count() == 5);

    // private letters land on the side they came from
    CHECK(amalgam.model.letter_true("p", "(w3a,v3)"));
    CHECK(!amalgam.model.letter_true("p", "(w3b,v3)"));
    CHECK(amalgam.model.letter_true("r", "(w2,v2b)"));
    CHECK(!amalgam.model.letter_true("r", "(w2,v2a)"));
    CHECK(amalgam.model.letter_true("q", "(w1,v1)"));

    // bisimilar to M over sigma and to N over tau
    SignatureSet sigma = m.signature(), tau = n.signature();
    BisimRelation to_m = largest_bisimulation(amalgam.model, m, sigma);
    CHECK(to_m.contains("(w1,v1)", "w1"));
    BisimRelation to_n = largest_bisimulation(amalgam.model, n, tau);
    CHECK(to_n.contains("(w1,v1)", "v1"));

    // trivial self-amalgamation
    KripkeModel single;
    single.add_world("u");
    single.set_true("p", "u");
    PointedModel ps{single, "u"};
    BisimRelation ident;
    ident.signature.insert("p");
    ident.pairs = {{"u", "u"}};
    PointedModel self = amalgamate(ps, ps, ident);
    CHECK(self.model.world_count() == 1);
    CHECK(self.model.letter_true("p", "(u,u)"));

    BisimRelation missing_point = ident;
    missing_point.pairs.clear();
    CHECK_THROWS_AS(amalgamate(ps, ps, missing_point), Error);
}

TEST_CASE("unravel produces bounded fat trees") {
    // a diamond shape: w0 -> w1 -> w3, w0 -> w2 -> w3, p at w3
    KripkeModel m1;
    for (const char* w : {"w0", "w1", "w2", "w3"}) m1.add_world(w);
    m1.add_edge("w0", "w1");
    m1.add_edge("w0", "w2");
    m1.add_edge("w1", "w3");
    m1.add_edge("w2", "w3");
    m1.set_true("p", "w3");
    PointedModel pm{m1, "w0"};

    PointedModel m2 = unravel(pm, 2, 1);
    CHECK(m2.model.world_count() == 5);  // the final world is duplicated per path
    CHECK(is_tree(m2.model, m2.point));
    SignatureSet tau;
    tau.insert("p");
    CHECK(largest_bisimulation(m2.model, m1, tau).contains(m2.point, "w0"));

    PointedModel zero = unravel(pm, 0, 1);
    CHECK(zero.model.world_count() == 1);

    // fatness duplicates children while staying bisimilar
    PointedModel fat = unravel(pm, 2, 2);
    CHECK(fat.model.world_count() == 1 + 4 + 8);
    CHECK(largest_bisimulation(fat.model, m1, tau).contains(fat.point, "w0"));

    // eval agreement up to the unraveling depth
    const char* formulas[] = {"<><>p", "[][]p", "<>(~p & <>p)", "[]<>p"};
    for (const char* s : formulas) {
        CHECK(eval(m1, "w0", parse(s)) == eval(m2.model, m2.point, parse(s)));
        CHECK(eval(m1, "w0", parse(s)) == eval(fat.model, fat.point, parse(s)));
    }
}

TEST_CASE("is_tree") {
    KripkeModel m = stretched_loop_m();
    CHECK(!is_tree(m, "w0"));  // loop at w1
    KripkeModel chain;
    chain.add_world("a");
    chain.add_world("b");
    chain.add_edge("a", "b");
    CHECK(is_tree(chain, "a"));
    CHECK(!is_tree(chain, "b"));  // unreachable world
}

TEST_CASE("model JSON round trip") {
    KripkeModel m = stretched_loop_m();
    KripkeModel back = KripkeModel::from_json(m.to_json());
    CHECK(back.worlds() == m.worlds());
    CHECK(back.has_edge("w0", "w1"));
    CHECK(back.letter_true("p", "w1"));

    PointedModel pm = PointedModel::from_json(
        R"({"worlds":["w0","w1"],"edges":[["w0","w1"]],"valuation":{"p":["w1"]},"point":"w0"})");
    CHECK(pm.point == "w0");
    CHECK(eval(pm.model, pm.point, parse("<>p")));
}
