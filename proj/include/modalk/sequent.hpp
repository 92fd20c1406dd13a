// ============================================================================
// modalk/sequent.hpp — G3K backward proof search and split interpolation
// ============================================================================
//
// Sequents are multiset pairs of diamond-free, nabla-free formulas (the
// diamond is treated as ~[]~ at this module's boundary).  Proof search
// saturates with the invertible propositional rules, then branches over each
// boxed succedent formula, taking all boxed antecedent bodies into the
// premise.  A split of the conclusion drives the interpolant recursion: each
// rule's delta-function combines the premise interpolants according to which
// part of the split holds the principal formula.
//
// ============================================================================

#ifndef MODALK_SEQUENT_HPP
#define MODALK_SEQUENT_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modalk/formula.hpp"

namespace modalk {

// multisets as sorted handle vectors
struct Sequent {
    std::vector<Formula> antecedent;
    std::vector<Formula> succedent;

    static Sequent make(std::vector<Formula> ant, std::vector<Formula> suc);
    friend bool operator==(const Sequent&, const Sequent&) = default;
};

enum class RuleTag { AxId, AxBot, AxTop, NegL, NegR, AndL, AndR, OrL, OrR, BoxR };

const char* rule_name(RuleTag tag);

struct ProofTree {
    Sequent conclusion;
    RuleTag rule;
    Formula principal;
    std::vector<std::shared_ptr<const ProofTree>> premises;
};
using ProofPtr = std::shared_ptr<const ProofTree>;

// Proof search; empty result means the sequent is not provable.
std::optional<ProofPtr> prove(const Sequent& s);

// Indented text rendering with the calculus' rule labels.
std::string render_proof(const ProofTree& pt);

struct SplitSequent {
    std::vector<Formula> left_ant, left_suc;    // part 1
    std::vector<Formula> right_ant, right_suc;  // part 2

    Sequent merged() const;
};

// Split interpolant for a proof of the split's underlying sequent.
Formula maehara(const ProofPtr& pt, const SplitSequent& split);

// Interpolation pipeline over the split (phi ; => ; psi), with diamonds
// desugared on the way in and restored on the way out.
Formula craig_via_sequent(Formula phi, Formula psi);

Formula desugar_diamonds(Formula f);  // <>x becomes ~[]~x
Formula resugar_diamonds(Formula f);  // ~[]~x becomes <>x

}  // namespace modalk

#endif  // MODALK_SEQUENT_HPP
