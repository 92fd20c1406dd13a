// ============================================================================
// modalk/semantics.hpp — Finite Kripke models, model checking, bisimulations
// ============================================================================

#ifndef MODALK_SEMANTICS_HPP
#define MODALK_SEMANTICS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "modalk/formula.hpp"

namespace modalk {

// ── KripkeModel ─────────────────────────────────────────────────────────────
// Worlds are string ids kept in insertion order.  Edges and valuation refer
// to declared worlds only; the valuation keys are the model's signature.

class KripkeModel {
public:
    void add_world(const std::string& w);
    void add_edge(const std::string& from, const std::string& to);
    void set_true(const std::string& letter, const std::string& world);
    void declare_letter(const std::string& letter);  // letter with empty extension

    bool has_world(const std::string& w) const;
    bool has_edge(const std::string& from, const std::string& to) const;
    bool letter_true(const std::string& letter, const std::string& world) const;

    const std::vector<std::string>& worlds() const noexcept { return worlds_; }
    std::vector<std::string> successors(const std::string& w) const;
    SignatureSet signature() const;

    std::size_t world_count() const noexcept { return worlds_.size(); }

    // JSON shape: {"worlds":[...], "edges":[[a,b],...], "valuation":{"p":[...]}}
    static KripkeModel from_json(const std::string& text);
    std::string to_json() const;

    // index-based access used by the algorithms
    int index_of(const std::string& w) const;  // -1 if unknown
    const std::vector<std::vector<int>>& adjacency() const noexcept { return succ_; }
    const std::map<std::string, std::set<int>>& valuation() const noexcept { return valuation_; }

private:
    std::vector<std::string> worlds_;
    std::map<std::string, int> index_;
    std::vector<std::vector<int>> succ_;
    std::map<std::string, std::set<int>> valuation_;
};

struct PointedModel {
    KripkeModel model;
    std::string point;

    static PointedModel from_json(const std::string& text);  // requires "point"
    std::string to_json() const;
};

// Relation between worlds of two (possibly distinct) models, together with
// the signature the bisimulation clauses are checked against.
struct BisimRelation {
    std::vector<std::pair<std::string, std::string>> pairs;
    SignatureSet signature;

    bool contains(const std::string& a, const std::string& b) const;
};

// ── Operations ──────────────────────────────────────────────────────────────

// Table-1 truth at a world.  Letters outside the model's valuation are false
// everywhere.  Nabla is evaluated directly: every member true at some
// successor, every successor satisfies some member.
bool eval(const KripkeModel& m, const std::string& world, Formula f);

// Atomic harmony + forth + back over z.signature.
bool check_bisimulation(const KripkeModel& m, const KripkeModel& n, const BisimRelation& z);

// Greatest bisimulation between m and n over sig, by iterated refinement of
// the atomic-harmony-consistent full relation.
BisimRelation largest_bisimulation(const KripkeModel& m, const KripkeModel& n,
                                   const SignatureSet& sig);

// Subdirect product with domain z.pairs; worlds are named "(a,b)".  The
// valuation covers the letters common to both factors (true at a pair iff
// true at both components).  Rejects z that is not a bisimulation.
KripkeModel bisimulation_product(const KripkeModel& m, const KripkeModel& n,
                                 const BisimRelation& z);

// The amalgamation construction: bisimulation product over the common
// signature, expanded with each factor's private letters by projection.
// Requires (m1.point, m2.point) in z.
PointedModel amalgamate(const PointedModel& m1, const PointedModel& m2, const BisimRelation& z);

// Finite tree of paths of length <= depth with each child duplicated
// `fatness` times; bisimilar to pm up to modal depth `depth`.
PointedModel unravel(const PointedModel& pm, int depth, int fatness);

// True when every world is reachable from root by exactly one directed path.
bool is_tree(const KripkeModel& m, const std::string& root);

}  // namespace modalk

#endif  // MODALK_SEMANTICS_HPP
