// ============================================================================
// verify.cpp — interpolant reports, tableau decider, tree oracle, corpus
// ============================================================================

#include "modalk/verify.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <set>

#include <json.hpp>

#include "modalk/quasimodel.hpp"

namespace modalk {

namespace {

Formula strip_nabla(Formula f) { return contains_nabla(f) ? expand_nabla(f) : f; }

// ── Tableau ─────────────────────────────────────────────────────────────────
// Backtracking tableau over NNF formulas.  Disjunctions are simplified
// against asserted formulas before branching; branching is semantic (the
// second branch also asserts the negation of the first disjunct).  Saturated
// states recurse per diamond on {body} + box bodies, which strictly lowers
// the modal depth, so the search terminates.

struct WitnessTree {
    std::vector<std::string> letters;
    std::vector<std::shared_ptr<WitnessTree>> kids;
};
using WitnessPtr = std::shared_ptr<WitnessTree>;

struct Tableau {
    std::map<std::vector<std::uint32_t>, std::optional<WitnessPtr>> memo;
    std::size_t budget = 5'000'000;

    static std::vector<std::uint32_t> canon(const std::vector<Formula>& fs) {
        std::vector<std::uint32_t> ids;
        ids.reserve(fs.size());
        for (Formula f : fs) ids.push_back(f.id());
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    }

    std::optional<WitnessPtr> sat(std::vector<Formula> input) {
        auto key = canon(input);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        if (budget-- == 0) throw GuardError("tableau state budget exhausted");

        std::set<Formula> asserted;
        std::set<Formula> lits;
        std::set<Formula> boxes, dias;  // bodies
        std::vector<Formula> todo(input.begin(), input.end());
        std::set<Formula> pending;  // unresolved disjunctions

        auto push = [&](Formula f) {
            if (asserted.insert(f).second) todo.push_back(f);
        };
        for (Formula f : input) asserted.insert(f);

        auto finish = [&](std::optional<WitnessPtr> r) {
            memo[key] = r;
            return r;
        };

        while (!todo.empty() || !pending.empty()) {
            if (!todo.empty()) {
                Formula f = todo.back();
                todo.pop_back();
                switch (kind(f)) {
                    case Kind::Top: break;
                    case Kind::Bot: return finish(std::nullopt);
                    case Kind::Prop:
                        if (lits.count(neg(f))) return finish(std::nullopt);
                        lits.insert(f);
                        break;
                    case Kind::Neg: {
                        if (lits.count(child(f))) return finish(std::nullopt);
                        lits.insert(f);
                        break;
                    }
                    case Kind::And:
                        push(lhs(f));
                        push(rhs(f));
                        break;
                    case Kind::Or: pending.insert(f); break;
                    case Kind::Box: boxes.insert(child(f)); break;
                    case Kind::Diamond: dias.insert(child(f)); break;
                    case Kind::Nabla: throw Error("tableau: nabla must be expanded first");
                }
                continue;
            }

            // simplify pending disjunctions against asserted formulas
            bool changed = false;
            for (auto it = pending.begin(); it != pending.end();) {
                Formula a = lhs(*it), b = rhs(*it);
                auto falsified = [&](Formula g) {
                    if (kind(g) == Kind::Prop) return lits.count(neg(g)) > 0;
                    if (kind(g) == Kind::Neg && kind(child(g)) == Kind::Prop)
                        return lits.count(child(g)) > 0;
                    return asserted.count(nnf(neg(g))) > 0;
                };
                if (asserted.count(a) || asserted.count(b)) {
                    it = pending.erase(it);
                    changed = true;
                } else if (falsified(a)) {
                    push(b);
                    it = pending.erase(it);
                    changed = true;
                } else if (falsified(b)) {
                    push(a);
                    it = pending.erase(it);
                    changed = true;
                } else {
                    ++it;
                }
            }
            if (changed || !todo.empty()) continue;

            // branch on the lowest unresolved disjunction, semantically
            Formula pivot = *pending.begin();
            std::vector<Formula> base(asserted.begin(), asserted.end());
            {
                std::vector<Formula> left = base;
                left.push_back(lhs(pivot));
                if (auto r = sat(std::move(left))) return finish(r);
            }
            std::vector<Formula> right = base;
            right.push_back(nnf(neg(lhs(pivot))));
            right.push_back(rhs(pivot));
            return finish(sat(std::move(right)));
        }

        // saturated: recurse per diamond
        std::vector<WitnessPtr> kids;
        for (Formula d : dias) {
            std::vector<Formula> next{d};
            next.insert(next.end(), boxes.begin(), boxes.end());
            auto r = sat(std::move(next));
            if (!r) return finish(std::nullopt);
            kids.push_back(*r);
        }
        auto node = std::make_shared<WitnessTree>();
        for (Formula l : lits)
            if (kind(l) == Kind::Prop) node->letters.emplace_back(prop_name(l));
        node->kids = std::move(kids);
        return finish(node);
    }
};

PointedModel model_from_witness(const WitnessPtr& root, const SignatureSet& sig_hint) {
    KripkeModel m;
    for (const auto& ell : sig_hint) m.declare_letter(ell);
    int counter = 0;
    std::function<std::string(const WitnessPtr&)> emit = [&](const WitnessPtr& node) {
        std::string id = "n" + std::to_string(counter++);
        m.add_world(id);
        for (const auto& ell : node->letters) m.set_true(ell, id);
        for (const auto& kid : node->kids) {
            std::string kid_id = emit(kid);
            m.add_edge(id, kid_id);
        }
        return id;
    };
    std::string root_id = emit(root);
    return PointedModel{std::move(m), root_id};
}

}  // namespace

std::optional<PointedModel> tableau_sat(Formula f) {
    Formula g = nnf(strip_nabla(f));
    Tableau tab;
    auto r = tab.sat({g});
    if (!r) return std::nullopt;
    PointedModel pm = model_from_witness(*r, sig(g));
    return pm;
}

// ── Validity dispatch ───────────────────────────────────────────────────────

namespace {

constexpr std::size_t kEliminationTableLimit = 20;

bool tables_small(Formula a, Formula b) {
    return subf(nnf(a)).size() <= kEliminationTableLimit &&
           subf(nnf(neg(b))).size() <= kEliminationTableLimit;
}

}  // namespace

bool valid_implication(Formula phi, Formula psi) {
    Formula a = strip_nabla(phi), b = strip_nabla(psi);
    if (tables_small(a, b)) return is_valid_implication(a, b);
    return !tableau_sat(conj(a, nnf(neg(b)))).has_value();
}

std::optional<PointedModel> countermodel(Formula phi, Formula psi) {
    Formula a = strip_nabla(phi), b = strip_nabla(psi);
    if (tables_small(a, b)) {
        // the conjoined table spans both sides, so the guard needs headroom
        TypeOptions opts;
        opts.max_table_per_side = 2 * kEliminationTableLimit + 2;
        SatResult r = satisfiable(conj(a, nnf(neg(b))), opts);
        if (!r.satisfiable) return std::nullopt;
        return r.witness;
    }
    return tableau_sat(conj(a, nnf(neg(b))));
}

bool equivalent(Formula a, Formula b) {
    return valid_implication(a, b) && valid_implication(b, a);
}

// ── Interpolant reports ─────────────────────────────────────────────────────

InterpolantReport check_craig(Formula theta, Formula phi, Formula psi) {
    InterpolantReport report;
    Formula theta_flat = strip_nabla(theta);
    report.theta_size_string = size_string(theta_flat);
    report.theta_size_dag = size_dag(theta_flat);
    report.signature_ok =
        sig(theta).subset_of(set_intersection(sig(phi), sig(psi)));

    report.left_valid = valid_implication(phi, theta);
    if (!report.left_valid) report.countermodel = countermodel(phi, theta);
    report.right_valid = valid_implication(theta, psi);
    if (report.left_valid && !report.right_valid)
        report.countermodel = countermodel(theta, psi);
    return report;
}

InterpolantReport check_lyndon(Formula theta, Formula phi, Formula psi) {
    InterpolantReport report = check_craig(theta, phi, psi);
    PolarityReport pt = polarity(theta), pp = polarity(phi), ps = polarity(psi);
    bool pos_ok = pt.positive.subset_of(set_intersection(pp.positive, ps.positive));
    bool neg_ok = pt.negative.subset_of(set_intersection(pp.negative, ps.negative));
    report.lyndon_ok = pos_ok && neg_ok;
    return report;
}

std::string InterpolantReport::to_json() const {
    nlohmann::json j;
    j["left_valid"] = left_valid;
    j["right_valid"] = right_valid;
    j["signature_ok"] = signature_ok;
    if (lyndon_ok) j["lyndon_ok"] = *lyndon_ok;
    j["size_string"] = theta_size_string;
    j["size_dag"] = theta_size_dag;
    if (countermodel) j["countermodel"] = nlohmann::json::parse(countermodel->to_json());
    return j.dump();
}

// ── Exhaustive tree oracle ──────────────────────────────────────────────────
// Bounded tree models are enumerated bottom-up, quotiented by what they can
// contribute to a parent: a node matters only through the bit-vector of
// modal bodies it satisfies, and a child multiset only through the union and
// intersection of those vectors.  Representative trees are kept so a
// concrete eval-checked witness can be rebuilt.

namespace {

struct OracleTree {
    std::uint32_t valuation = 0;
    std::vector<std::shared_ptr<OracleTree>> kids;
};
using OracleTreePtr = std::shared_ptr<OracleTree>;

struct Oracle {
    std::vector<Formula> closure;          // subterm closure of the target
    std::vector<Formula> bodies;           // bodies of modal subterms
    std::vector<std::string> letters;
    Formula target;

    // precomputed per closure element
    std::vector<int> kid_a, kid_b;     // child positions, -1 when unused
    std::vector<int> letter_idx;       // -1 when not a letter
    std::vector<int> body_idx;         // for Diamond/Box: the body bit
    std::vector<std::size_t> body_pos; // closure position of each body

    void finish_setup() {
        std::map<Formula, std::size_t> pos;
        for (std::size_t i = 0; i < closure.size(); ++i) pos[closure[i]] = i;
        kid_a.assign(closure.size(), -1);
        kid_b.assign(closure.size(), -1);
        letter_idx.assign(closure.size(), -1);
        body_idx.assign(closure.size(), -1);
        for (std::size_t i = 0; i < closure.size(); ++i) {
            Formula g = closure[i];
            switch (kind(g)) {
                case Kind::Prop: {
                    auto it = std::find(letters.begin(), letters.end(),
                                        std::string(prop_name(g)));
                    if (it != letters.end())
                        letter_idx[i] = static_cast<int>(it - letters.begin());
                    break;
                }
                case Kind::Neg: kid_a[i] = static_cast<int>(pos.at(child(g))); break;
                case Kind::And:
                case Kind::Or:
                    kid_a[i] = static_cast<int>(pos.at(lhs(g)));
                    kid_b[i] = static_cast<int>(pos.at(rhs(g)));
                    break;
                case Kind::Diamond:
                case Kind::Box: {
                    kid_a[i] = static_cast<int>(pos.at(child(g)));
                    auto it = std::find(bodies.begin(), bodies.end(), child(g));
                    body_idx[i] = static_cast<int>(it - bodies.begin());
                    break;
                }
                case Kind::Nabla: throw Error("oracle_sat: nabla must be expanded first");
                default: break;
            }
        }
        body_pos.clear();
        for (Formula b : bodies) body_pos.push_back(pos.at(b));
    }

    // closure truth at a node from its valuation and the union/intersection
    // body masks of its children
    std::vector<bool> truths(std::uint32_t valuation, std::uint64_t walked,
                             std::uint64_t all) const {
        std::vector<bool> val(closure.size(), false);
        for (std::size_t i = 0; i < closure.size(); ++i) {
            bool v = false;
            switch (kind(closure[i])) {
                case Kind::Prop: v = letter_idx[i] >= 0 && ((valuation >> letter_idx[i]) & 1u); break;
                case Kind::Top: v = true; break;
                case Kind::Bot: v = false; break;
                case Kind::Neg: v = !val[kid_a[i]]; break;
                case Kind::And: v = val[kid_a[i]] && val[kid_b[i]]; break;
                case Kind::Or: v = val[kid_a[i]] || val[kid_b[i]]; break;
                case Kind::Diamond: v = (walked >> body_idx[i]) & 1u; break;
                case Kind::Box: v = (all >> body_idx[i]) & 1u; break;
                case Kind::Nabla: break;
            }
            val[i] = v;
        }
        return val;
    }

    std::uint64_t body_vector(const std::vector<bool>& val) const {
        std::uint64_t out = 0;
        for (std::size_t b = 0; b < bodies.size(); ++b)
            if (val[body_pos[b]]) out |= 1ull << b;
        return out;
    }
};

void oracle_closure(Formula f, std::vector<Formula>& out, std::set<Formula>& seen) {
    if (!seen.insert(f).second) return;
    switch (kind(f)) {
        case Kind::Neg:
        case Kind::Diamond:
        case Kind::Box: oracle_closure(child(f), out, seen); break;
        case Kind::And:
        case Kind::Or:
            oracle_closure(lhs(f), out, seen);
            oracle_closure(rhs(f), out, seen);
            break;
        default: break;
    }
    out.push_back(f);
}

}  // namespace

std::optional<PointedModel> oracle_sat(Formula f, int max_depth, int max_branch) {
    if (max_depth < 0 || max_branch < 1) throw Error("oracle_sat: bounds must be positive");
    Formula g = strip_nabla(f);
    SignatureSet letters_set = sig(g);

    Oracle oracle;
    oracle.target = g;
    oracle.letters.assign(letters_set.begin(), letters_set.end());
    {
        std::set<Formula> seen;
        oracle_closure(g, oracle.closure, seen);
    }
    for (Formula h : oracle.closure)
        if (kind(h) == Kind::Diamond || kind(h) == Kind::Box) {
            Formula b = child(h);
            if (std::find(oracle.bodies.begin(), oracle.bodies.end(), b) ==
                oracle.bodies.end())
                oracle.bodies.push_back(b);
        }
    if (oracle.letters.size() > 4 || max_depth > 3 || oracle.bodies.size() > 14 ||
        max_branch > 64)
        throw GuardError("oracle_sat: bounds exceed the exhaustive-search guard");
    oracle.finish_setup();

    std::uint32_t nvals = 1u << oracle.letters.size();
    std::size_t target_idx = oracle.closure.size() - 1;  // closure ends at the target

    // realized body-vectors with a representative tree, by level
    std::map<std::uint64_t, OracleTreePtr> realized;
    std::optional<OracleTreePtr> hit;

    auto consider = [&](std::uint32_t v, std::uint64_t walked, std::uint64_t all,
                        const std::vector<OracleTreePtr>& kids) {
        auto val = oracle.truths(v, walked, all);
        if (!hit && val[target_idx]) {
            auto t = std::make_shared<OracleTree>();
            t->valuation = v;
            t->kids = kids;
            hit = t;
        }
        std::uint64_t vec = oracle.body_vector(val);
        if (!realized.count(vec)) {
            auto t = std::make_shared<OracleTree>();
            t->valuation = v;
            t->kids = kids;
            realized.emplace(vec, t);
        }
    };

    std::uint64_t full = oracle.bodies.empty() ? 0 : (~0ull >> (64 - oracle.bodies.size()));

    // height 0: leaves (no children: nothing walked, everything boxed)
    for (std::uint32_t v = 0; v < nvals && !hit; ++v) consider(v, 0, full, {});

    for (int depth = 1; depth <= max_depth && !hit; ++depth) {
        // child combinations up to max_branch, quotiented to (union,
        // intersection) pairs over the realized vectors
        std::vector<std::uint64_t> pool_vecs;
        std::vector<OracleTreePtr> pool_reps;
        for (const auto& [vec, rep] : realized) {
            pool_vecs.push_back(vec);
            pool_reps.push_back(rep);
        }
        std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<OracleTreePtr>> combos;
        std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<OracleTreePtr>> frontier;
        for (std::size_t i = 0; i < pool_vecs.size(); ++i)
            frontier.try_emplace({pool_vecs[i], pool_vecs[i]}, std::vector<OracleTreePtr>{pool_reps[i]});
        combos = frontier;
        for (int width = 2; width <= max_branch; ++width) {
            std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<OracleTreePtr>> next;
            for (const auto& [wa, kids] : frontier)
                for (std::size_t i = 0; i < pool_vecs.size(); ++i) {
                    std::pair<std::uint64_t, std::uint64_t> key{wa.first | pool_vecs[i],
                                                                wa.second & pool_vecs[i]};
                    if (combos.count(key) || next.count(key)) continue;
                    std::vector<OracleTreePtr> extended = kids;
                    extended.push_back(pool_reps[i]);
                    next.emplace(key, std::move(extended));
                }
            if (next.empty()) break;
            combos.insert(next.begin(), next.end());
            frontier = std::move(next);
        }

        std::map<std::uint64_t, OracleTreePtr> before = realized;
        for (std::uint32_t v = 0; v < nvals && !hit; ++v) {
            consider(v, 0, full, {});  // leaves exist at every level
            for (const auto& [wa, kids] : combos) {
                if (hit) break;
                consider(v, wa.first, wa.second, kids);
            }
        }
        if (realized.size() == before.size() && !hit) break;  // fixpoint
    }

    if (!hit) return std::nullopt;

    // rebuild and eval-verify the witness
    KripkeModel m;
    for (const auto& ell : oracle.letters) m.declare_letter(ell);
    int counter = 0;
    std::function<std::string(const OracleTreePtr&)> emit = [&](const OracleTreePtr& t) {
        std::string id = "o" + std::to_string(counter++);
        m.add_world(id);
        for (std::size_t i = 0; i < oracle.letters.size(); ++i)
            if ((t->valuation >> i) & 1u) m.set_true(oracle.letters[i], id);
        for (const auto& kid : t->kids) m.add_edge(id, emit(kid));
        return id;
    };
    std::string root = emit(*hit);
    PointedModel pm{std::move(m), root};
    if (!eval(pm.model, pm.point, g))
        throw Error("oracle_sat: internal witness failed evaluation");
    return pm;
}

// ── Corpus ──────────────────────────────────────────────────────────────────

namespace {

Formula random_formula(std::mt19937_64& rng, int depth_budget, int node_budget) {
    static const char* names[] = {"p", "q", "r"};
    std::uniform_int_distribution<int> pick(0, 99);
    int roll = pick(rng);
    if (node_budget <= 2 || roll < 30) {
        int n = pick(rng) % 3;
        Formula p = prop(names[n]);
        return (pick(rng) % 2) ? p : neg(p);
    }
    if (roll < 38) return pick(rng) % 2 ? top() : bot();
    if (roll < 58 && depth_budget > 0) {
        Formula c = random_formula(rng, depth_budget - 1, node_budget - 1);
        return (pick(rng) % 2) ? diamond(c) : box(c);
    }
    Formula a = random_formula(rng, depth_budget, node_budget / 2);
    Formula b = random_formula(rng, depth_budget, node_budget / 2);
    return (pick(rng) % 2) ? conj(a, b) : disj(a, b);
}

const std::vector<std::string>& handpicked_formulas() {
    static const std::vector<std::string> fs = {
        "<>p & [](p | q)",
        "~<>p",
        "p -> q",
        "[]p | []~p",
        "<>(p & q)",
        "<>p & []~p",
        "nabla{p, q}",
        "nabla{}",
        "[](p -> q) & <>p",
        "<>s & (p -> [](s -> p)) & (~p -> [](s -> ~p))",
        "<>true",
        "[]false",
        "p & ~p",
        "<>(p & <>q)",
        "[][]p",
    };
    return fs;
}

const std::vector<std::pair<std::string, std::string>>& handpicked_implications() {
    static const std::vector<std::pair<std::string, std::string>> ps = {
        {"[]p & []q", "[](p & q)"},
        {"[](p & q)", "[]p & []q"},
        {"<>(p & q)", "<>(p | r)"},
        {"<>(p & q)", "<>p"},
        {"p & q", "p | r"},
        {"p", "p | q"},
        {"p & ~p", "q"},
        {"p", "true"},
        {"false", "p"},
        {"<>p & [](p -> q)", "<>q"},
        {"[]p", "[](p | q)"},
        {"<>s & (p -> [](s -> p)) & (~p -> [](s -> ~p))",
         "((p -> []q) & (~p -> []~q)) -> <>((p -> q) & (q -> p))"},
        {"[](p -> q) & []p", "[]q"},
        {"<>[]p & []([]p -> q)", "<>q | []r"},
    };
    return ps;
}

}  // namespace

std::vector<Formula> corpus_formulas(std::uint64_t seed, std::size_t count) {
    std::vector<Formula> out;
    std::set<Formula> seen;
    auto add = [&](Formula f) {
        if (seen.insert(f).second) out.push_back(f);
    };
    for (const auto& s : handpicked_formulas()) add(parse(s));
    std::mt19937_64 rng(seed);
    while (out.size() < count) {
        Formula f = random_formula(rng, 2, 12);
        if (modal_depth(f) > 2 || size_dag(f) > 12) continue;
        add(f);
    }
    return out;
}

std::vector<std::pair<Formula, Formula>> corpus_implications(std::uint64_t seed,
                                                             std::size_t min_count) {
    std::vector<std::pair<Formula, Formula>> out;
    std::set<std::pair<Formula, Formula>> seen;
    auto add = [&](Formula a, Formula b) {
        if (sig(a).empty() || sig(b).empty()) return;
        if (set_intersection(sig(a), sig(b)).empty()) return;
        if (seen.emplace(a, b).second) out.emplace_back(a, b);
    };
    for (const auto& [a, b] : handpicked_implications()) add(parse(a), parse(b));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, 5);
    while (out.size() < min_count) {
        Formula f = random_formula(rng, 1, 8);
        Formula g = random_formula(rng, 1, 6);
        if (modal_depth(f) > 2 || modal_depth(g) > 2) continue;
        switch (pick(rng)) {
            case 0: add(conj(f, g), f); break;                       // weakening
            case 1: add(f, disj(f, g)); break;                      // weakening
            case 2: add(conj(box(f), box(g)), box(conj(f, g))); break;
            case 3: add(diamond(conj(f, g)), diamond(disj(f, g))); break;
            case 4: add(conj(f, g), disj(g, f)); break;
            case 5: {
                // random pair kept only when actually valid
                if (subf(nnf(f)).size() <= 14 && subf(nnf(neg(g))).size() <= 14 &&
                    is_valid_implication(f, g))
                    add(f, g);
                break;
            }
        }
    }
    return out;
}

}  // namespace modalk
