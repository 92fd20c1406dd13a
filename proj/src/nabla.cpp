// ============================================================================
// nabla.cpp — normal-form conversion and the letter-removal operator
// ============================================================================

#include "modalk/nabla.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "modalk/verify.hpp"

namespace modalk {

// ── Grammar check ───────────────────────────────────────────────────────────

namespace {

// clash-free conjunction of literals over distinct letters
bool is_literal_block(Formula f, std::set<std::string>* seen_letters) {
    switch (kind(f)) {
        case Kind::Prop: return seen_letters->insert(std::string(prop_name(f))).second;
        case Kind::Neg:
            return kind(child(f)) == Kind::Prop &&
                   seen_letters->insert(std::string(prop_name(child(f)))).second;
        case Kind::And: {
            return is_literal_block(lhs(f), seen_letters) &&
                   is_literal_block(rhs(f), seen_letters);
        }
        default: return false;
    }
}

bool is_pi(Formula f) {
    std::set<std::string> letters;
    return is_literal_block(f, &letters);
}

bool is_nabla_unit(Formula f) {
    switch (kind(f)) {
        case Kind::Top:
        case Kind::Bot: return true;
        case Kind::Nabla: {
            for (Formula m : nabla_members(f))
                if (!is_nabla_form(m)) return false;
            return true;
        }
        case Kind::And: {
            if (is_pi(f)) return true;
            // pi & nabla{...}
            if (kind(rhs(f)) != Kind::Nabla) return false;
            for (Formula m : nabla_members(rhs(f)))
                if (!is_nabla_form(m)) return false;
            return is_pi(lhs(f));
        }
        default: return is_pi(f);
    }
}

}  // namespace

bool is_nabla_form(Formula f) {
    if (kind(f) == Kind::Or) return is_nabla_form(lhs(f)) && is_nabla_form(rhs(f));
    return is_nabla_unit(f);
}

// ── Normalization ───────────────────────────────────────────────────────────

namespace {

struct Normalizer {
    // conjunction arguments are treated as sets; memoized on the sorted set
    std::map<std::vector<std::uint32_t>, Formula> conj_memo;
    std::map<std::uint32_t, Formula> memo;

    Formula run(Formula f) {
        if (auto it = memo.find(f.id()); it != memo.end()) return it->second;
        Formula out;
        switch (kind(f)) {
            case Kind::Prop:
            case Kind::Top:
            case Kind::Bot:
            case Kind::Neg: out = f; break;
            case Kind::Diamond: out = nabla({run(child(f)), top()}); break;
            case Kind::Box: out = disj(nabla({run(child(f))}), nabla({})); break;
            case Kind::Or: out = disj(run(lhs(f)), run(rhs(f))); break;
            case Kind::And: {
                std::set<Formula> conjuncts;
                flatten(f, conjuncts);
                out = normalize_conjunction(std::move(conjuncts));
                break;
            }
            case Kind::Nabla: throw Error("to_nabla_nf: input must be nabla-free");
        }
        memo.emplace(f.id(), out);
        return out;
    }

    static void flatten(Formula f, std::set<Formula>& out) {
        if (kind(f) == Kind::And) {
            flatten(lhs(f), out);
            flatten(rhs(f), out);
        } else {
            out.insert(f);
        }
    }

    Formula normalize_conjunction(std::set<Formula> conjuncts) {
        std::vector<std::uint32_t> key;
        key.reserve(conjuncts.size());
        for (Formula f : conjuncts) key.push_back(f.id());
        if (auto it = conj_memo.find(key); it != conj_memo.end()) return it->second;
        Formula out = normalize_conjunction_uncached(std::move(conjuncts));
        conj_memo.emplace(std::move(key), out);
        return out;
    }

    Formula normalize_conjunction_uncached(std::set<Formula> conjuncts) {
        // simplification passes: drop true, collapse false, flatten nested
        // conjunctions, split on one disjunction
        for (auto it = conjuncts.begin(); it != conjuncts.end();) {
            switch (kind(*it)) {
                case Kind::Top: it = conjuncts.erase(it); break;
                case Kind::Bot: return bot();
                case Kind::And: {
                    Formula f = *it;
                    conjuncts.erase(it);
                    flatten(f, conjuncts);
                    it = conjuncts.begin();
                    break;
                }
                default: ++it; break;
            }
        }
        for (Formula f : conjuncts) {
            if (kind(f) == Kind::Or) {
                std::set<Formula> with_left = conjuncts, with_right = conjuncts;
                with_left.erase(f);
                with_right.erase(f);
                with_left.insert(lhs(f));
                with_right.insert(rhs(f));
                return disj(normalize_conjunction(std::move(with_left)),
                            normalize_conjunction(std::move(with_right)));
            }
        }

        // literals plus modal formulas remain
        std::vector<Formula> lits;
        std::vector<Formula> dia_bodies, box_bodies;
        std::set<std::string> pos, negs;
        for (Formula f : conjuncts) {
            switch (kind(f)) {
                case Kind::Prop:
                    pos.insert(std::string(prop_name(f)));
                    lits.push_back(f);
                    break;
                case Kind::Neg:
                    negs.insert(std::string(prop_name(child(f))));
                    lits.push_back(f);
                    break;
                case Kind::Diamond: dia_bodies.push_back(child(f)); break;
                case Kind::Box: box_bodies.push_back(child(f)); break;
                default: throw Error("to_nabla_nf: unexpected conjunct");
            }
        }
        for (const auto& ell : pos)
            if (negs.count(ell)) return bot();  // clashing literal block

        std::sort(lits.begin(), lits.end());
        Formula pi = conj_all(lits);  // top() when no literals

        std::set<Formula> boxes(box_bodies.begin(), box_bodies.end());
        auto boxed = [&]() {
            return normalize_conjunction(std::set<Formula>(boxes));
        };

        if (dia_bodies.empty()) {
            if (box_bodies.empty()) return lits.empty() ? top() : pi;
            // pi & (nabla{nf(/\boxes)} | nabla{}), distributed over the grammar
            Formula some = nabla({boxed()});
            Formula none = nabla({});
            if (lits.empty()) return disj(some, none);
            return disj(conj(pi, some), conj(pi, none));
        }

        std::vector<Formula> members;
        std::sort(dia_bodies.begin(), dia_bodies.end());
        dia_bodies.erase(std::unique(dia_bodies.begin(), dia_bodies.end()), dia_bodies.end());
        for (Formula d : dia_bodies) {
            std::set<Formula> with_d = boxes;
            with_d.insert(d);
            members.push_back(normalize_conjunction(std::move(with_d)));
        }
        members.push_back(boxed());
        Formula nab = nabla(std::move(members));
        return lits.empty() ? nab : conj(pi, nab);
    }
};

}  // namespace

Formula to_nabla_nf(Formula f) {
    if (contains_nabla(f)) throw Error("to_nabla_nf: input must be nabla-free");
    Normalizer n;
    return n.run(nnf(f));
}

// ── Letter removal ──────────────────────────────────────────────────────────

namespace {

// literal conjunction with the dropped letters removed; invalid handle when
// nothing is left
Formula drop_literals(Formula pi, const SignatureSet& drop) {
    std::vector<Formula> kept;
    std::function<void(Formula)> collect = [&](Formula f) {
        if (kind(f) == Kind::And) {
            collect(lhs(f));
            collect(rhs(f));
            return;
        }
        std::string_view letter =
            kind(f) == Kind::Prop ? prop_name(f) : prop_name(child(f));
        if (!drop.contains(letter)) kept.push_back(f);
    };
    collect(pi);
    if (kept.empty()) return Formula{};
    std::sort(kept.begin(), kept.end());
    return conj_all(kept);
}

Formula remove_rec(Formula f, const SignatureSet& drop) {
    switch (kind(f)) {
        case Kind::Top:
        case Kind::Bot: return f;
        case Kind::Or: return disj(remove_rec(lhs(f), drop), remove_rec(rhs(f), drop));
        case Kind::Nabla: {
            std::vector<Formula> members;
            for (Formula m : nabla_members(f)) members.push_back(remove_rec(m, drop));
            return nabla(std::move(members));
        }
        case Kind::And: {
            if (is_pi(f)) {
                Formula kept = drop_literals(f, drop);
                return kept.valid() ? kept : top();
            }
            // pi & nabla{...}
            Formula kept = drop_literals(lhs(f), drop);
            Formula nab = remove_rec(rhs(f), drop);
            return kept.valid() ? conj(kept, nab) : nab;
        }
        default: {  // single literal
            Formula kept = drop_literals(f, drop);
            return kept.valid() ? kept : top();
        }
    }
}

}  // namespace

Formula remove_props(Formula f, const SignatureSet& drop) {
    if (!is_nabla_form(f)) throw Error("remove_props: input must be in nabla-normal form");
    return remove_rec(f, drop);
}

// ── Uniform and Craig interpolation ─────────────────────────────────────────

Formula uniform_interpolant(Formula f, const SignatureSet& keep) {
    Formula g = contains_nabla(f) ? expand_nabla(f) : f;
    Formula normal = to_nabla_nf(g);
    SignatureSet drop = set_difference(sig(g), keep);
    return remove_props(normal, drop);
}

Formula craig_via_nabla(Formula phi, Formula psi) {
    if (!valid_implication(phi, psi))
        throw Error("craig_via_nabla: the implication is not valid");
    return uniform_interpolant(phi, sig(psi));
}

}  // namespace modalk
