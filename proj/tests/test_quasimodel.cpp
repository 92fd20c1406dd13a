#include <doctest.h>

#include <algorithm>
#include <set>

#include "modalk/quasimodel.hpp"

using namespace modalk;

namespace {

bool has_left(const CombinedType& t, Formula f) {
    return std::find(t.left.begin(), t.left.end(), f) != t.left.end();
}

// canonical encoding of a set of types for cross-run comparison
std::set<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> type_set(
    const std::vector<CombinedType>& ts) {
    std::set<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> out;
    for (const auto& t : ts) {
        std::vector<std::uint32_t> l, r;
        for (Formula f : t.left) l.push_back(f.id());
        for (Formula f : t.right) r.push_back(f.id());
        std::sort(l.begin(), l.end());
        std::sort(r.begin(), r.end());
        out.emplace(std::move(l), std::move(r));
    }
    return out;
}

}  // namespace

TEST_CASE("all_types enumerates locally consistent subsets") {
    // subf(p) = {p}: L-types are {} and {p}
    auto types = all_types(parse("p"), parse("p"));
    std::set<std::size_t> left_sizes;
    for (const auto& t : types) left_sizes.insert(t.left.size());
    CHECK(left_sizes == std::set<std::size_t>{0, 1});
    // 2 L-types x 2 R-types (subf(~p) = {~p})
    CHECK(types.size() == 4);

    // no L-type contains p & ~p
    for (const auto& t : all_types(parse("p & ~p"), parse("false")))
        CHECK(!has_left(t, nnf(parse("p & ~p"))));

    // every L-type containing p|q contains p or q
    Formula porq = parse("p | q");
    for (const auto& t : all_types(porq, parse("false")))
        if (has_left(t, porq)) CHECK((has_left(t, prop("p")) || has_left(t, prop("q"))));
}

TEST_CASE("all_types respects the table guard") {
    TypeOptions small;
    small.max_table_per_side = 2;
    CHECK_THROWS_AS(all_types(parse("p & q & r"), parse("p"), small), GuardError);
}

TEST_CASE("eliminate records overlap clashes") {
    EliminationTrace trace = eliminate(parse("p"), parse("p"));
    // the pair ({p}, {~p}) is eliminated with a clash on p
    bool found = false;
    for (const auto& step : trace.steps) {
        if (step.type.left == std::vector<Formula>{prop("p")} &&
            step.type.right == std::vector<Formula>{neg(prop("p"))}) {
            found = true;
            const auto* clash = std::get_if<OverlapClash>(&step.reason);
            REQUIRE(clash != nullptr);
            CHECK(clash->letter == "p");
            CHECK(clash->positive_side == Side::Left);
        }
    }
    CHECK(found);
    CHECK(trace.steps.size() == 1);  // only that pair clashes
    CHECK(trace.final_set.size() == 3);
}

TEST_CASE("eliminate witnesses diamonds in the final set") {
    // sat check for <>p: the final set contains a type with <>p and a viable
    // successor type carrying p
    EliminationTrace trace = eliminate(parse("<>p"), parse("false"));
    CHECK(!trace.final_set.empty());
    Formula diap = parse("<>p");
    bool witnessed = false;
    for (const auto& t : trace.final_set) {
        if (!has_left(t, diap)) continue;
        for (const auto& t2 : trace.final_set)
            if (has_left(t2, prop("p"))) witnessed = true;
    }
    CHECK(witnessed);

    // every type containing <>p & []~p goes away with a diamond reason
    Formula contradiction = parse("<>p & []~p");
    EliminationTrace trace2 = eliminate(contradiction, parse("false"));
    for (const auto& t : trace2.final_set) CHECK(!has_left(t, contradiction));
    bool diamond_reason = false;
    for (const auto& step : trace2.steps)
        if (has_left(step.type, contradiction)) {
            if (std::holds_alternative<DiamondUnwitnessed>(step.reason)) diamond_reason = true;
        }
    CHECK(diamond_reason);
}

TEST_CASE("elimination trace JSON has the expected shape") {
    EliminationTrace trace = eliminate(parse("p"), parse("p"));
    std::string j = trace.to_json();
    CHECK(j.find("\"steps\"") != std::string::npos);
    CHECK(j.find("overlap-clash") != std::string::npos);
    CHECK(j.find("\"final\"") != std::string::npos);
}

TEST_CASE("satisfiable: basic verdicts and witnesses") {
    CHECK(!satisfiable(parse("false")).satisfiable);
    CHECK(!satisfiable(parse("<>p & []~p")).satisfiable);
    CHECK(!satisfiable(parse("p & ~p")).satisfiable);

    SatResult r = satisfiable(parse("<>(p & q)"));
    CHECK(r.satisfiable);
    REQUIRE(r.witness.has_value());
    CHECK(eval(r.witness->model, r.witness->point, parse("<>(p & q)")));

    SatResult deep = satisfiable(parse("<>(p & <>(q & ~p)) & []~r"));
    CHECK(deep.satisfiable);
    REQUIRE(deep.witness.has_value());
    CHECK(eval(deep.witness->model, deep.witness->point, parse("<>(p & <>(q & ~p)) & []~r")));
}

TEST_CASE("witness model satisfies the truth lemma") {
    SatResult r = satisfiable(parse("<>p & <>~p & [](p | q)"));
    REQUIRE(r.satisfiable);
    REQUIRE(r.witness.has_value());
    // world t_i realizes the i-th surviving type
    const auto& final_set = r.trace.final_set;
    REQUIRE(final_set.size() == r.witness->model.world_count());
    for (std::size_t i = 0; i < final_set.size(); ++i) {
        std::string w = "t" + std::to_string(i);
        for (Formula f : final_set[i].left) CHECK(eval(r.witness->model, w, f));
        for (Formula f : final_set[i].right) CHECK(eval(r.witness->model, w, f));
    }
}

TEST_CASE("is_valid_implication") {
    CHECK(is_valid_implication(parse("[]p & []q"), parse("[](p & q)")));
    CHECK(!is_valid_implication(parse("<>p"), parse("[]p")));
    const char* selfs[] = {"p", "<>p | []q", "a & ~x | <>(y & z)"};
    for (const char* s : selfs) CHECK(is_valid_implication(parse(s), parse(s)));

    CHECK(is_valid_implication(parse("<>(p & q)"), parse("<>(p | r)")));
    CHECK(!is_valid_implication(parse("<>(p | q)"), parse("<>p")));
}

TEST_CASE("saturated space decides the same questions") {
    TypeOptions sat_opts;
    sat_opts.space = TypeSpace::Saturated;
    const char* formulas[] = {
        "<>p & []~p", "<>(p & q)", "p & ~p", "[](p | q) & <>~p", "<>p & [](p -> q) & []~q",
    };
    for (const char* s : formulas)
        CHECK(satisfiable(parse(s)).satisfiable == satisfiable(parse(s), sat_opts).satisfiable);

    CHECK(is_valid_implication(parse("[]p & []q"), parse("[](p & q)"), sat_opts));
    CHECK(!is_valid_implication(parse("<>p"), parse("[]p"), sat_opts));
}

TEST_CASE("confluence: elimination order does not change the final set") {
    const char* pairs[][2] = {
        {"<>p & [](p -> q)", "<>q | r"},
        {"p & (q | <>r)", "p"},
        {"[](p & q)", "[]p & []q"},
    };
    for (auto& [a, b] : pairs) {
        EliminationTrace base = eliminate(parse(a), parse(b));
        auto base_set = type_set(base.final_set);
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            TypeOptions opts;
            opts.order_seed = seed;
            EliminationTrace shuffled = eliminate(parse(a), parse(b), opts);
            CHECK(type_set(shuffled.final_set) == base_set);
        }
    }
}

TEST_CASE("lyndon_interpolant on the worked examples") {
    // phi = p, psi = p | q: the interpolant is equivalent to p
    Formula theta = lyndon_interpolant(parse("p"), parse("p | q"));
    CHECK(is_valid_implication(theta, parse("p")));
    CHECK(is_valid_implication(parse("p"), theta));
    CHECK(sig(theta).letters() == std::vector<std::string>{"p"});

    // phi = <>(p & q), psi = <>(p | r): over {p}, positively, equivalent to <>p
    Formula theta2 = lyndon_interpolant(parse("<>(p & q)"), parse("<>(p | r)"));
    CHECK(sig(theta2).letters() == std::vector<std::string>{"p"});
    PolarityReport pol = polarity(theta2);
    CHECK(pol.positive.contains("p"));
    CHECK(!pol.negative.contains("p"));
    CHECK(is_valid_implication(theta2, parse("<>p")));
    CHECK(is_valid_implication(parse("<>p"), theta2));

    // interpolant contract on both sides
    CHECK(is_valid_implication(parse("<>(p & q)"), theta2));
    CHECK(is_valid_implication(theta2, parse("<>(p | r)")));

    CHECK_THROWS_AS(lyndon_interpolant(parse("<>p"), parse("[]p")), Error);
}

TEST_CASE("lyndon_interpolant in the saturated space agrees semantically") {
    TypeOptions sat_opts;
    sat_opts.space = TypeSpace::Saturated;
    Formula a = lyndon_interpolant(parse("<>(p & q)"), parse("<>(p | r)"));
    Formula b = lyndon_interpolant(parse("<>(p & q)"), parse("<>(p | r)"), sat_opts);
    CHECK(is_valid_implication(a, b));
    CHECK(is_valid_implication(b, a));
}
