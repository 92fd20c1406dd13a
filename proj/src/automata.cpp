// ============================================================================
// automata.cpp — construction, acceptance, projection, back-translation
// ============================================================================

#include "modalk/automata.hpp"

#include <algorithm>
#include <functional>

#include <json.hpp>

#include "modalk/verify.hpp"

namespace modalk {

// ── ModalAutomaton plumbing ─────────────────────────────────────────────────

int ModalAutomaton::add_state(const std::string& name) {
    states.push_back(name);
    return static_cast<int>(states.size()) - 1;
}

int ModalAutomaton::state_index(const std::string& name) const {
    auto it = std::find(states.begin(), states.end(), name);
    return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

void ModalAutomaton::add_transition(int from, std::uint32_t letter, std::vector<int> targets) {
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    transitions.push_back({from, letter, std::move(targets)});
}

void ModalAutomaton::dedupe_transitions() {
    std::sort(transitions.begin(), transitions.end());
    transitions.erase(std::unique(transitions.begin(), transitions.end()), transitions.end());
}

std::uint32_t ModalAutomaton::letter_mask(const std::vector<std::string>& letters) const {
    std::uint32_t mask = 0;
    const auto& sig_letters = signature.letters();
    for (const auto& ell : letters) {
        auto it = std::find(sig_letters.begin(), sig_letters.end(), ell);
        if (it == sig_letters.end()) throw Error("letter_mask: letter outside the alphabet");
        mask |= 1u << (it - sig_letters.begin());
    }
    return mask;
}

std::vector<std::string> ModalAutomaton::letter_names(std::uint32_t mask) const {
    std::vector<std::string> out;
    const auto& sig_letters = signature.letters();
    for (std::size_t i = 0; i < sig_letters.size(); ++i)
        if ((mask >> i) & 1u) out.push_back(sig_letters[i]);
    return out;
}

std::string ModalAutomaton::to_json() const {
    nlohmann::json j;
    j["signature"] = signature.letters();
    j["states"] = states;
    j["initial"] = states.at(initial);
    std::vector<std::string> acc;
    for (int q : accepting) acc.push_back(states.at(q));
    j["accepting"] = acc;
    auto ts = nlohmann::json::array();
    for (const auto& t : transitions) {
        std::vector<std::string> targets;
        for (int q : t.targets) targets.push_back(states.at(q));
        ts.push_back({states.at(t.from), letter_names(t.letter), targets});
    }
    j["transitions"] = ts;
    return j.dump();
}

// ── Construction from a formula ─────────────────────────────────────────────

namespace {

using StateSet = std::set<Formula>;

int max_modal_depth(const StateSet& s) {
    int d = 0;
    for (Formula f : s) d = std::max(d, modal_depth(f));
    return d;
}

int state_rank(const StateSet& s) { return s.empty() ? 0 : 1 + max_modal_depth(s); }

// no falsum, no literal clash (such states never admit a run)
bool state_consistent(const StateSet& s) {
    std::set<std::string> pos, negs;
    for (Formula f : s) {
        switch (kind(f)) {
            case Kind::Bot: return false;
            case Kind::Prop: pos.insert(std::string(prop_name(f))); break;
            case Kind::Neg: negs.insert(std::string(prop_name(child(f)))); break;
            default: break;
        }
    }
    for (const auto& ell : pos)
        if (negs.count(ell)) return false;
    return true;
}

// minimal decisive refinements: close conjunctions, branch on disjunctions
void decisive_refinements(const StateSet& base, std::vector<StateSet>& out) {
    std::set<StateSet> seen;
    std::function<void(StateSet, std::vector<Formula>)> go = [&](StateSet cur,
                                                                 std::vector<Formula> todo) {
        while (!todo.empty()) {
            Formula f = todo.back();
            todo.pop_back();
            switch (kind(f)) {
                case Kind::Bot: return;  // clause: falsum never joins a refinement
                case Kind::And:
                    for (Formula g : {lhs(f), rhs(f)})
                        if (cur.insert(g).second) todo.push_back(g);
                    break;
                case Kind::Or: {
                    if (cur.count(lhs(f)) || cur.count(rhs(f))) break;
                    for (Formula g : {lhs(f), rhs(f)}) {
                        StateSet next = cur;
                        next.insert(g);
                        std::vector<Formula> next_todo = todo;
                        next_todo.push_back(g);
                        go(std::move(next), std::move(next_todo));
                    }
                    return;
                }
                default: break;
            }
        }
        if (state_consistent(cur) && seen.insert(cur).second) out.push_back(cur);
    };
    go(base, std::vector<Formula>(base.begin(), base.end()));
}

// set partitions of the diamond bodies (each block shares one child)
void set_partitions(const std::vector<Formula>& items,
                    std::vector<std::vector<StateSet>>& out) {
    std::vector<StateSet> current;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == items.size()) {
            out.push_back(current);
            return;
        }
        // index-based: the recursion below resizes `current`
        for (std::size_t b = 0; b < current.size(); ++b) {
            current[b].insert(items[i]);
            go(i + 1);
            current[b].erase(items[i]);
        }
        current.push_back({items[i]});
        go(i + 1);
        current.pop_back();
    };
    go(0);
}

}  // namespace

ModalAutomaton formula_to_automaton(Formula chi, const SignatureSet& sigma,
                                    bool full_state_space) {
    if (!sig(chi).subset_of(sigma))
        throw Error("formula_to_automaton: sig(chi) must be within sigma");
    if (sigma.size() > 10) throw GuardError("formula_to_automaton: alphabet too large");
    Formula root = nnf(chi);
    std::vector<Formula> closure = subf(root);

    ModalAutomaton a;
    a.signature = sigma;
    const auto& sig_letters = sigma.letters();
    std::uint32_t nletters = static_cast<std::uint32_t>(sig_letters.size());

    std::map<StateSet, int> state_id;
    std::vector<StateSet> state_sets;
    auto state_name = [](const StateSet& s) {
        std::string name = "q{";
        bool first = true;
        for (Formula f : s) {
            if (!first) name += ", ";
            first = false;
            name += print(f);
        }
        return name + "}";
    };
    auto intern_state = [&](const StateSet& s) {
        auto it = state_id.find(s);
        if (it != state_id.end()) return it->second;
        int id = a.add_state(state_name(s));
        state_id.emplace(s, id);
        state_sets.push_back(s);
        return id;
    };

    a.initial = intern_state({root});
    int empty_state = intern_state({});
    a.accepting.insert(empty_state);

    if (full_state_space) {
        if (closure.size() > 16)
            throw GuardError("formula_to_automaton: full state space too large");
        for (std::uint32_t mask = 0; mask < (1u << closure.size()); ++mask) {
            StateSet s;
            for (std::size_t i = 0; i < closure.size(); ++i)
                if ((mask >> i) & 1u) s.insert(closure[i]);
            intern_state(s);
        }
    }

    std::vector<int> worklist;
    for (std::size_t i = 0; i < state_sets.size(); ++i) worklist.push_back(static_cast<int>(i));
    std::set<int> processed;

    while (!worklist.empty()) {
        int q = worklist.back();
        worklist.pop_back();
        if (!processed.insert(q).second) continue;
        StateSet base = state_sets[q];
        int rank = state_rank(base);

        std::vector<StateSet> refinements;
        decisive_refinements(base, refinements);

        for (const StateSet& ref : refinements) {
            std::uint32_t pos = 0, negm = 0;
            std::vector<Formula> dias;
            StateSet box_bodies;
            for (Formula f : ref) {
                switch (kind(f)) {
                    case Kind::Prop: {
                        auto it = std::find(sig_letters.begin(), sig_letters.end(),
                                            std::string(prop_name(f)));
                        pos |= 1u << (it - sig_letters.begin());
                        break;
                    }
                    case Kind::Neg: {
                        auto it = std::find(sig_letters.begin(), sig_letters.end(),
                                            std::string(prop_name(child(f))));
                        negm |= 1u << (it - sig_letters.begin());
                        break;
                    }
                    case Kind::Diamond: dias.push_back(child(f)); break;
                    case Kind::Box: box_bodies.insert(child(f)); break;
                    default: break;
                }
            }
            std::sort(dias.begin(), dias.end());
            dias.erase(std::unique(dias.begin(), dias.end()), dias.end());
            if (dias.size() > 8)
                throw GuardError("formula_to_automaton: too many diamonds per state");

            // candidate target sets: diamond partitions, optionally padded
            // with the plain box-closure state for surplus children
            std::vector<std::vector<StateSet>> partitions;
            if (dias.empty()) partitions.push_back({});
            else set_partitions(dias, partitions);

            bool filler_ok = state_consistent(box_bodies) && state_rank(box_bodies) < rank;

            std::vector<std::vector<int>> target_sets;
            for (const auto& blocks : partitions) {
                std::vector<int> targets;
                bool viable = true;
                for (const auto& block : blocks) {
                    StateSet target = box_bodies;
                    target.insert(block.begin(), block.end());
                    if (!state_consistent(target) || state_rank(target) >= rank) {
                        viable = false;
                        break;
                    }
                    targets.push_back(intern_state(target));
                }
                if (!viable) continue;
                target_sets.push_back(targets);
                if (filler_ok) {
                    std::vector<int> padded = targets;
                    padded.push_back(intern_state(box_bodies));
                    target_sets.push_back(padded);
                }
            }

            for (std::uint32_t letter = 0; letter < (1u << nletters); ++letter) {
                if ((letter & pos) != pos || (letter & negm) != 0) continue;
                for (const auto& targets : target_sets)
                    a.add_transition(q, letter, targets);
            }
        }

        for (std::size_t i = 0; i < state_sets.size(); ++i)
            if (!processed.count(static_cast<int>(i))) worklist.push_back(static_cast<int>(i));
    }

    a.dedupe_transitions();
    return a;
}

// ── Acceptance ──────────────────────────────────────────────────────────────

namespace {

// exact-image assignment via brute-force enumeration
bool assign_bruteforce(const std::vector<std::vector<bool>>& admissible_for,
                       const std::vector<int>& targets) {
    std::size_t nchildren = admissible_for.size();
    std::size_t ntargets = targets.size();
    if (ntargets == 0) return nchildren == 0;
    if (nchildren == 0) return false;
    std::vector<std::size_t> choice(nchildren, 0);
    while (true) {
        bool ok = true;
        std::vector<bool> used(ntargets, false);
        for (std::size_t c = 0; c < nchildren && ok; ++c) {
            if (!admissible_for[c][choice[c]]) ok = false;
            else used[choice[c]] = true;
        }
        if (ok && std::find(used.begin(), used.end(), false) == used.end()) return true;
        std::size_t i = 0;
        while (i < nchildren && ++choice[i] == ntargets) choice[i++] = 0;
        if (i == nchildren) return false;
    }
}

// Kuhn-style matching saturating the target side
bool assign_matching(const std::vector<std::vector<bool>>& admissible_for,
                     const std::vector<int>& targets) {
    std::size_t nchildren = admissible_for.size();
    std::size_t ntargets = targets.size();
    if (ntargets == 0) return nchildren == 0;
    if (nchildren == 0) return false;
    // every child must fit somewhere
    for (std::size_t c = 0; c < nchildren; ++c)
        if (std::find(admissible_for[c].begin(), admissible_for[c].end(), true) ==
            admissible_for[c].end())
            return false;

    std::vector<int> matched_child(ntargets, -1);
    std::function<bool(std::size_t, std::vector<bool>&)> augment =
        [&](std::size_t t, std::vector<bool>& visited) {
            for (std::size_t c = 0; c < nchildren; ++c) {
                if (visited[c] || !admissible_for[c][t]) continue;
                visited[c] = true;
                // find the slot this child currently fills, if any
                int cur = -1;
                for (std::size_t t2 = 0; t2 < ntargets; ++t2)
                    if (matched_child[t2] == static_cast<int>(c)) cur = static_cast<int>(t2);
                if (cur < 0 || augment(static_cast<std::size_t>(cur), visited)) {
                    matched_child[t] = static_cast<int>(c);
                    return true;
                }
            }
            return false;
        };
    for (std::size_t t = 0; t < ntargets; ++t) {
        std::vector<bool> visited(nchildren, false);
        if (!augment(t, visited)) return false;
    }
    return true;
}

}  // namespace

bool accepts(const ModalAutomaton& a, const PointedModel& t, MatchStrategy strategy) {
    if (!is_tree(t.model, t.point)) throw Error("accepts: input is not a tree");
    if (!t.model.signature().subset_of(a.signature))
        throw Error("accepts: tree signature outside the automaton alphabet");

    // bottom-up order: children before parents
    std::vector<int> order;
    {
        std::vector<int> stack{t.model.index_of(t.point)};
        while (!stack.empty()) {
            int w = stack.back();
            stack.pop_back();
            order.push_back(w);
            for (int v : t.model.adjacency()[w]) stack.push_back(v);
        }
        std::reverse(order.begin(), order.end());
    }

    std::size_t nstates = a.states.size();
    std::vector<std::vector<bool>> admissible(t.model.world_count(),
                                              std::vector<bool>(nstates, false));

    // transitions grouped by source
    std::vector<std::vector<const ModalAutomaton::Transition*>> by_state(nstates);
    for (const auto& tr : a.transitions) by_state[tr.from].push_back(&tr);

    const auto& sig_letters = a.signature.letters();
    auto label_of = [&](int w) {
        std::uint32_t mask = 0;
        for (std::size_t i = 0; i < sig_letters.size(); ++i)
            if (t.model.letter_true(sig_letters[i], t.model.worlds()[w])) mask |= 1u << i;
        return mask;
    };

    for (int w : order) {
        std::uint32_t label = label_of(w);
        const auto& children = t.model.adjacency()[w];
        for (std::size_t q = 0; q < nstates; ++q) {
            if (a.accepting.count(static_cast<int>(q))) {
                admissible[w][q] = true;
                continue;
            }
            for (const auto* tr : by_state[q]) {
                if (tr->letter != label) continue;
                std::vector<std::vector<bool>> fits(children.size(),
                                                    std::vector<bool>(tr->targets.size()));
                for (std::size_t c = 0; c < children.size(); ++c)
                    for (std::size_t s = 0; s < tr->targets.size(); ++s)
                        fits[c][s] = admissible[children[c]][tr->targets[s]];
                bool ok;
                MatchStrategy effective = strategy;
                if (effective == MatchStrategy::Auto)
                    effective = children.size() < 5 ? MatchStrategy::BruteForce
                                                    : MatchStrategy::Matching;
                if (effective == MatchStrategy::BruteForce)
                    ok = assign_bruteforce(fits, tr->targets);
                else
                    ok = assign_matching(fits, tr->targets);
                if (ok) {
                    admissible[w][q] = true;
                    break;
                }
            }
        }
    }
    return admissible[t.model.index_of(t.point)][a.initial];
}

// ── Acyclicity ──────────────────────────────────────────────────────────────

std::optional<AcyclicityWitness> is_acyclic(const ModalAutomaton& a) {
    std::size_t n = a.states.size();
    std::vector<std::set<int>> succ(n);
    for (const auto& tr : a.transitions)
        for (int q : tr.targets) succ[tr.from].insert(q);

    std::vector<int> rank(n, -1);
    std::vector<int> color(n, 0);  // 0 unvisited, 1 on stack, 2 done
    bool cyclic = false;
    std::function<int(int)> longest = [&](int q) {
        if (color[q] == 1) {
            cyclic = true;
            return 0;
        }
        if (color[q] == 2) return rank[q];
        color[q] = 1;
        int best = 0;
        for (int s : succ[q]) {
            if (cyclic) break;
            best = std::max(best, 1 + longest(s));
        }
        color[q] = 2;
        rank[q] = best;
        return best;
    };
    for (std::size_t q = 0; q < n && !cyclic; ++q) longest(static_cast<int>(q));
    if (cyclic) return std::nullopt;

    AcyclicityWitness w;
    for (std::size_t q = 0; q < n; ++q) w.rank[a.states[q]] = rank[q];
    return w;
}

// ── Projection ──────────────────────────────────────────────────────────────

ModalAutomaton project(const ModalAutomaton& a, const SignatureSet& keep) {
    if (!keep.subset_of(a.signature)) throw Error("project: keep must be within the alphabet");
    ModalAutomaton out;
    out.signature = keep;
    out.states = a.states;
    out.initial = a.initial;
    out.accepting = a.accepting;
    const auto& old_letters = a.signature.letters();
    for (const auto& tr : a.transitions) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < old_letters.size(); ++i)
            if (((tr.letter >> i) & 1u) && keep.contains(old_letters[i]))
                names.push_back(old_letters[i]);
        out.transitions.push_back({tr.from, out.letter_mask(names), tr.targets});
    }
    out.dedupe_transitions();
    return out;
}

// ── Back-translation ────────────────────────────────────────────────────────

Formula automaton_to_formula(const ModalAutomaton& a) {
    auto witness = is_acyclic(a);
    if (!witness) throw Error("automaton_to_formula: the automaton is not acyclic");

    std::vector<std::vector<const ModalAutomaton::Transition*>> by_state(a.states.size());
    for (const auto& tr : a.transitions) by_state[tr.from].push_back(&tr);

    // states in ascending rank order so targets are always translated first
    std::vector<int> order(a.states.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return witness->rank[a.states[x]] < witness->rank[a.states[y]];
    });

    const auto& sig_letters = a.signature.letters();
    std::vector<Formula> chi(a.states.size());
    for (int q : order) {
        if (a.accepting.count(q)) {
            chi[q] = top();
            continue;
        }
        std::vector<Formula> disjuncts;
        for (const auto* tr : by_state[q]) {
            std::vector<Formula> lits;
            for (std::size_t i = 0; i < sig_letters.size(); ++i) {
                Formula p = prop(sig_letters[i]);
                lits.push_back(((tr->letter >> i) & 1u) ? p : neg(p));
            }
            std::sort(lits.begin(), lits.end());
            std::vector<Formula> members;
            for (int target : tr->targets) members.push_back(chi[target]);
            Formula body = nabla(std::move(members));
            disjuncts.push_back(lits.empty() ? body : conj(conj_all(lits), body));
        }
        std::sort(disjuncts.begin(), disjuncts.end());
        disjuncts.erase(std::unique(disjuncts.begin(), disjuncts.end()), disjuncts.end());
        chi[q] = disj_all(disjuncts);
    }
    return chi[a.initial];
}

// ── Interpolation pipeline ──────────────────────────────────────────────────

Formula craig_via_automata(Formula phi, Formula psi) {
    if (!valid_implication(phi, psi))
        throw Error("craig_via_automata: the implication is not valid");
    ModalAutomaton a = formula_to_automaton(phi, sig(phi));
    ModalAutomaton projected = project(a, set_intersection(sig(phi), sig(psi)));
    return expand_nabla(automaton_to_formula(projected));
}

}  // namespace modalk
