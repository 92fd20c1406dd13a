// ============================================================================
// modalk/verify.hpp — interpolant verification, equivalence, oracles, corpus
// ============================================================================
//
// Validity questions route through two independent deciders that guard each
// other: the type-elimination engine (small subformula tables) and a
// backtracking tableau with semantic branching (any size).  The exhaustive
// tree-model oracle is a third, brute-force route used for spot checks.
//
// ============================================================================

#ifndef MODALK_VERIFY_HPP
#define MODALK_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modalk/formula.hpp"
#include "modalk/semantics.hpp"

namespace modalk {

struct InterpolantReport {
    bool left_valid = false;     // phi -> theta
    bool right_valid = false;    // theta -> psi
    bool signature_ok = false;   // sig(theta) within the shared signature
    std::optional<bool> lyndon_ok;
    std::size_t theta_size_string = 0;  // of the nabla-expanded form
    std::size_t theta_size_dag = 0;
    std::optional<PointedModel> countermodel;  // for the first failed validity

    bool craig_ok() const { return left_valid && right_valid && signature_ok; }
    bool all_ok() const { return craig_ok() && lyndon_ok.value_or(true); }
    std::string to_json() const;
};

// The three interpolant conditions; failures carry an eval-verified
// countermodel.
InterpolantReport check_craig(Formula theta, Formula phi, Formula psi);

// check_craig plus polarity containment on both sides.
InterpolantReport check_lyndon(Formula theta, Formula phi, Formula psi);

// Validity dispatcher: type elimination for small tables, tableau beyond.
// Nabla nodes are expanded up front.
bool valid_implication(Formula phi, Formula psi);

// Model of phi & ~psi, when one exists.
std::optional<PointedModel> countermodel(Formula phi, Formula psi);

bool equivalent(Formula a, Formula b);

// Complete satisfiability via backtracking tableau; returns a tree witness.
// Throws GuardError when the search exceeds its state budget.
std::optional<PointedModel> tableau_sat(Formula f);

// Exhaustive search over tree models of bounded depth and branching with
// valuations over sig(f).  Complete once max_depth >= modal depth and
// max_branch >= the number of modal subformulas.
std::optional<PointedModel> oracle_sat(Formula f, int max_depth, int max_branch);

// ── Corpus ──────────────────────────────────────────────────────────────────
// Hand-picked formulas plus seeded pseudo-random ones with at most
// 3 letters, modal depth <= 2 and <= 12 nodes.

std::vector<Formula> corpus_formulas(std::uint64_t seed, std::size_t count);

// Valid implications with nontrivial shared signatures; at least min_count.
std::vector<std::pair<Formula, Formula>> corpus_implications(std::uint64_t seed,
                                                             std::size_t min_count);

}  // namespace modalk

#endif  // MODALK_VERIFY_HPP
