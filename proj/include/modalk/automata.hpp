// ============================================================================
// modalk/automata.hpp — modal automata over unranked trees
// ============================================================================
//
// A modal automaton reads finite tree-shaped pointed models.  A run labels
// every world with a state; a state is fine at a world when it is accepting
// or some transition over the world's letter set maps the children exactly
// onto the transition's target set.  Acyclic automata translate back to
// formulas (in nabla form), and projection of the alphabet realizes uniform
// interpolation on the automaton side.
//
// ============================================================================

#ifndef MODALK_AUTOMATA_HPP
#define MODALK_AUTOMATA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "modalk/formula.hpp"
#include "modalk/semantics.hpp"

namespace modalk {

struct ModalAutomaton {
    SignatureSet signature;  // alphabet is the powerset of this
    std::vector<std::string> states;
    int initial = -1;
    std::set<int> accepting;

    struct Transition {
        int from;
        std::uint32_t letter;      // bitmask over signature, in letter order
        std::vector<int> targets;  // sorted, unique
        friend auto operator<=>(const Transition&, const Transition&) = default;
    };
    std::vector<Transition> transitions;

    int add_state(const std::string& name);
    int state_index(const std::string& name) const;  // -1 when unknown
    void add_transition(int from, std::uint32_t letter, std::vector<int> targets);
    void dedupe_transitions();

    std::uint32_t letter_mask(const std::vector<std::string>& letters) const;
    std::vector<std::string> letter_names(std::uint32_t mask) const;

    std::string to_json() const;
};

struct AcyclicityWitness {
    std::map<std::string, int> rank;
};

enum class MatchStrategy { Auto, Matching, BruteForce };

// Automaton accepting exactly the sigma-trees satisfying chi.  States are
// subformula sets; by default only consistent states reachable from the
// initial one are kept, `full_state_space` restores the whole powerset.
ModalAutomaton formula_to_automaton(Formula chi, const SignatureSet& sigma,
                                    bool full_state_space = false);

// Accepting-run existence on a finite tree.  The exact-image condition per
// node is decided by bipartite matching of the target set into the children
// (brute-force assignment enumeration below fanout 5, or on request).
bool accepts(const ModalAutomaton& a, const PointedModel& t,
             MatchStrategy strategy = MatchStrategy::Auto);

// Minimal rank assignment via longest-path layering, or nothing on a cycle.
std::optional<AcyclicityWitness> is_acyclic(const ModalAutomaton& a);

// Restriction of every transition letter to `keep`; states are untouched.
ModalAutomaton project(const ModalAutomaton& a, const SignatureSet& keep);

// State formulas by rank induction: accepting states yield true, any other
// state the disjunction over its transitions of letter-description combined
// with nabla of the target formulas.  Rejects cyclic automata.
Formula automaton_to_formula(const ModalAutomaton& a);

// Interpolation pipeline: build the antecedent automaton, project to the
// shared signature, translate back, expand nabla.
Formula craig_via_automata(Formula phi, Formula psi);

}  // namespace modalk

#endif  // MODALK_AUTOMATA_HPP
