// ============================================================================
// sequent.cpp — proof search and the Maehara delta functions
// ============================================================================

#include "modalk/sequent.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace modalk {

namespace {

void check_sequent_formula(Formula f) {
    switch (kind(f)) {
        case Kind::Diamond: throw Error("sequent: diamonds must be desugared to ~[]~");
        case Kind::Nabla: throw Error("sequent: nabla nodes are not allowed");
        case Kind::Neg:
        case Kind::Box: check_sequent_formula(child(f)); break;
        case Kind::And:
        case Kind::Or:
            check_sequent_formula(lhs(f));
            check_sequent_formula(rhs(f));
            break;
        default: break;
    }
}

std::vector<Formula> sorted(std::vector<Formula> fs) {
    std::sort(fs.begin(), fs.end());
    return fs;
}

void insert_sorted(std::vector<Formula>& fs, Formula f) {
    fs.insert(std::upper_bound(fs.begin(), fs.end(), f), f);
}

bool remove_one(std::vector<Formula>& fs, Formula f) {
    auto it = std::lower_bound(fs.begin(), fs.end(), f);
    if (it == fs.end() || *it != f) return false;
    fs.erase(it);
    return true;
}

bool contains(const std::vector<Formula>& fs, Formula f) {
    return std::binary_search(fs.begin(), fs.end(), f);
}

}  // namespace

Sequent Sequent::make(std::vector<Formula> ant, std::vector<Formula> suc) {
    for (Formula f : ant) check_sequent_formula(f);
    for (Formula f : suc) check_sequent_formula(f);
    return Sequent{sorted(std::move(ant)), sorted(std::move(suc))};
}

const char* rule_name(RuleTag tag) {
    switch (tag) {
        case RuleTag::AxId: return "Ax_id";
        case RuleTag::AxBot: return "Ax_bot";
        case RuleTag::AxTop: return "Ax_top";
        case RuleTag::NegL: return "neg_l";
        case RuleTag::NegR: return "neg_r";
        case RuleTag::AndL: return "and_l";
        case RuleTag::AndR: return "and_r";
        case RuleTag::OrL: return "or_l";
        case RuleTag::OrR: return "or_r";
        case RuleTag::BoxR: return "R_box";
    }
    return "?";
}

// ── Proof search ────────────────────────────────────────────────────────────

namespace {

struct Prover {
    std::map<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>,
             std::optional<ProofPtr>>
        memo;

    static std::vector<std::uint32_t> ids(const std::vector<Formula>& fs) {
        std::vector<std::uint32_t> out;
        out.reserve(fs.size());
        for (Formula f : fs) out.push_back(f.id());
        return out;
    }

    std::optional<ProofPtr> search(const Sequent& s) {
        auto key = std::make_pair(ids(s.antecedent), ids(s.succedent));
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        auto result = search_uncached(s);
        memo.emplace(std::move(key), result);
        return result;
    }

    std::optional<ProofPtr> search_uncached(const Sequent& s) {
        auto leaf = [&](RuleTag tag, Formula principal) -> std::optional<ProofPtr> {
            return std::make_shared<const ProofTree>(ProofTree{s, tag, principal, {}});
        };

        // axioms first: the context may be arbitrary
        for (Formula f : s.antecedent)
            if (kind(f) == Kind::Bot) return leaf(RuleTag::AxBot, f);
        for (Formula f : s.succedent)
            if (kind(f) == Kind::Top) return leaf(RuleTag::AxTop, f);
        for (Formula f : s.antecedent)
            if (kind(f) == Kind::Prop && contains(s.succedent, f))
                return leaf(RuleTag::AxId, f);

        // invertible propositional rules, lowest handle first
        for (Formula f : s.antecedent) {
            switch (kind(f)) {
                case Kind::Neg: {
                    Sequent premise = s;
                    remove_one(premise.antecedent, f);
                    insert_sorted(premise.succedent, child(f));
                    auto sub = search(premise);
                    if (!sub) return std::nullopt;
                    return std::make_shared<const ProofTree>(
                        ProofTree{s, RuleTag::NegL, f, {*sub}});
                }
                case Kind::And: {
                    Sequent premise = s;
                    remove_one(premise.antecedent, f);
                    insert_sorted(premise.antecedent, lhs(f));
                    insert_sorted(premise.antecedent, rhs(f));
                    auto sub = search(premise);
                    if (!sub) return std::nullopt;
                    return std::make_shared<const ProofTree>(
                        ProofTree{s, RuleTag::AndL, f, {*sub}});
                }
                case Kind::Or: {
                    Sequent left = s, right = s;
                    remove_one(left.antecedent, f);
                    insert_sorted(left.antecedent, lhs(f));
                    remove_one(right.antecedent, f);
                    insert_sorted(right.antecedent, rhs(f));
                    auto a = search(left);
                    if (!a) return std::nullopt;
                    auto b = search(right);
                    if (!b) return std::nullopt;
                    return std::make_shared<const ProofTree>(
                        ProofTree{s, RuleTag::OrL, f, {*a, *b}});
                }
                default: break;
            }
        }
        for (Formula f : s.succedent) {
            switch (kind(f)) {
                case Kind::Neg: {
                    Sequent premise = s;
                    remove_one(premise.succedent, f);
                    insert_sorted(premise.antecedent, child(f));
                    auto sub = search(premise);
                    if (!sub) return std::nullopt;
                    return std::make_shared<const ProofTree>(
                        ProofTree{s, RuleTag::NegR, f, {*sub}});
                }
                case Kind::Or: {
                    Sequent premise = s;
                    remove_one(premise.succedent, f);
                    insert_sorted(premise.succedent, lhs(f));
                    insert_sorted(premise.succedent, rhs(f));
                    auto sub = search(premise);
                    if (!sub) return std::nullopt;
                    return std::make_shared<const ProofTree>(
                        ProofTree{s, RuleTag::OrR, f, {*sub}});
                }
                case Kind::And: {
                    Sequent left = s, right = s;
                    remove_one(left.succedent, f);
                    insert_sorted(left.succedent, lhs(f));
                    remove_one(right.succedent, f);
                    insert_sorted(right.succedent, rhs(f));
                    auto a = search(left);
                    if (!a) return std::nullopt;
                    auto b = search(right);
                    if (!b) return std::nullopt;
                    return std::make_shared<const ProofTree>(
                        ProofTree{s, RuleTag::AndR, f, {*a, *b}});
                }
                default: break;
            }
        }

        // saturated: branch over the boxed succedent formulas; weakening
        // admissibility lets the premise take every boxed antecedent body
        std::vector<Formula> boxed_bodies;
        for (Formula f : s.antecedent)
            if (kind(f) == Kind::Box) boxed_bodies.push_back(child(f));
        Formula last;
        for (Formula f : s.succedent) {
            if (kind(f) != Kind::Box || f == last) continue;
            last = f;
            Sequent premise = Sequent{sorted(boxed_bodies), {child(f)}};
            auto sub = search(premise);
            if (sub)
                return std::make_shared<const ProofTree>(
                    ProofTree{s, RuleTag::BoxR, f, {*sub}});
        }
        return std::nullopt;
    }
};

}  // namespace

std::optional<ProofPtr> prove(const Sequent& s) {
    for (Formula f : s.antecedent) check_sequent_formula(f);
    for (Formula f : s.succedent) check_sequent_formula(f);
    Prover prover;
    Sequent canon{sorted(s.antecedent), sorted(s.succedent)};
    return prover.search(canon);
}

// ── Rendering ───────────────────────────────────────────────────────────────

namespace {

void render_rec(const ProofTree& pt, int depth, std::ostringstream& os) {
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    os << pad;
    bool first = true;
    for (Formula f : pt.conclusion.antecedent) {
        if (!first) os << ", ";
        first = false;
        os << print(f);
    }
    os << " => ";
    first = true;
    for (Formula f : pt.conclusion.succedent) {
        if (!first) os << ", ";
        first = false;
        os << print(f);
    }
    os << "   (" << rule_name(pt.rule) << ")\n";
    for (const auto& premise : pt.premises) render_rec(*premise, depth + 1, os);
}

}  // namespace

std::string render_proof(const ProofTree& pt) {
    std::ostringstream os;
    render_rec(pt, 0, os);
    return os.str();
}

// ── Maehara recursion ───────────────────────────────────────────────────────

namespace {

// top/bottom absorption; the folded interpolant stays equivalent, its
// signature only shrinks, and occurrences are only removed, so the
// split-interpolant and Lyndon conditions survive folding
Formula fold_disj(Formula a, Formula b) {
    if (kind(a) == Kind::Top || kind(b) == Kind::Top) return top();
    if (kind(a) == Kind::Bot) return b;
    if (kind(b) == Kind::Bot) return a;
    return disj(a, b);
}

Formula fold_conj(Formula a, Formula b) {
    if (kind(a) == Kind::Bot || kind(b) == Kind::Bot) return bot();
    if (kind(a) == Kind::Top) return b;
    if (kind(b) == Kind::Top) return a;
    return conj(a, b);
}

Formula fold_neg(Formula a) {
    if (kind(a) == Kind::Top) return bot();
    if (kind(a) == Kind::Bot) return top();
    if (kind(a) == Kind::Neg) return child(a);
    return neg(a);
}

Formula fold_box(Formula a) {
    if (kind(a) == Kind::Top) return top();
    return box(a);
}

}  // namespace

Sequent SplitSequent::merged() const {
    std::vector<Formula> ant = left_ant, suc = left_suc;
    ant.insert(ant.end(), right_ant.begin(), right_ant.end());
    suc.insert(suc.end(), right_suc.begin(), right_suc.end());
    return Sequent{sorted(std::move(ant)), sorted(std::move(suc))};
}

namespace {

struct SplitState {
    std::vector<Formula> la, ls, ra, rs;  // sorted multisets

    static SplitState of(const SplitSequent& s) {
        return {sorted(s.left_ant), sorted(s.left_suc), sorted(s.right_ant),
                sorted(s.right_suc)};
    }

    friend bool operator<(const SplitState& a, const SplitState& b) {
        return std::tie(a.la, a.ls, a.ra, a.rs) < std::tie(b.la, b.ls, b.ra, b.rs);
    }
};

// memoized on (proof node, split): subproofs are shared across branches and
// almost always arrive with the same split, so the recursion stays linear in
// the proof DAG
struct MaeharaCtx {
    std::map<std::pair<const ProofTree*, SplitState>, Formula> memo;

    Formula rec(const ProofTree& pt, SplitState split) {
        auto key = std::make_pair(&pt, split);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        Formula out = step(pt, std::move(split));
        memo.emplace(std::move(key), out);
        return out;
    }

    Formula step(const ProofTree& pt, SplitState split);
};

Formula MaeharaCtx::step(const ProofTree& pt, SplitState split) {
    Formula principal = pt.principal;
    switch (pt.rule) {
        case RuleTag::AxId: {
            bool ant_left = contains(split.la, principal);
            bool suc_left = contains(split.ls, principal);
            if (ant_left && suc_left) return bot();
            if (ant_left && !suc_left) return principal;
            if (!ant_left && suc_left) return neg(principal);
            return top();
        }
        case RuleTag::AxBot: return contains(split.la, principal) ? bot() : top();
        case RuleTag::AxTop: return contains(split.ls, principal) ? bot() : top();

        case RuleTag::NegL: {
            SplitState sub = split;
            if (remove_one(sub.la, principal)) insert_sorted(sub.ls, child(principal));
            else {
                remove_one(sub.ra, principal);
                insert_sorted(sub.rs, child(principal));
            }
            return rec(*pt.premises[0], std::move(sub));
        }
        case RuleTag::NegR: {
            SplitState sub = split;
            if (remove_one(sub.ls, principal)) insert_sorted(sub.la, child(principal));
            else {
                remove_one(sub.rs, principal);
                insert_sorted(sub.ra, child(principal));
            }
            return rec(*pt.premises[0], std::move(sub));
        }
        case RuleTag::AndL: {
            SplitState sub = split;
            auto& part = contains(sub.la, principal) ? sub.la : sub.ra;
            remove_one(part, principal);
            insert_sorted(part, lhs(principal));
            insert_sorted(part, rhs(principal));
            return rec(*pt.premises[0], std::move(sub));
        }
        case RuleTag::OrR: {
            SplitState sub = split;
            auto& part = contains(sub.ls, principal) ? sub.ls : sub.rs;
            remove_one(part, principal);
            insert_sorted(part, lhs(principal));
            insert_sorted(part, rhs(principal));
            return rec(*pt.premises[0], std::move(sub));
        }
        case RuleTag::OrL: {
            bool in_left = contains(split.la, principal);
            SplitState first = split, second = split;
            auto& fpart = in_left ? first.la : first.ra;
            remove_one(fpart, principal);
            insert_sorted(fpart, lhs(principal));
            auto& spart = in_left ? second.la : second.ra;
            remove_one(spart, principal);
            insert_sorted(spart, rhs(principal));
            Formula chi1 = rec(*pt.premises[0], std::move(first));
            Formula chi2 = rec(*pt.premises[1], std::move(second));
            return in_left ? fold_disj(chi1, chi2) : fold_conj(chi1, chi2);
        }
        case RuleTag::AndR: {
            bool in_left = contains(split.ls, principal);
            SplitState first = split, second = split;
            auto& fpart = in_left ? first.ls : first.rs;
            remove_one(fpart, principal);
            insert_sorted(fpart, lhs(principal));
            auto& spart = in_left ? second.ls : second.rs;
            remove_one(spart, principal);
            insert_sorted(spart, rhs(principal));
            Formula chi1 = rec(*pt.premises[0], std::move(first));
            Formula chi2 = rec(*pt.premises[1], std::move(second));
            return in_left ? fold_disj(chi1, chi2) : fold_conj(chi1, chi2);
        }
        case RuleTag::BoxR: {
            bool in_left = contains(split.ls, principal);
            SplitState sub;
            for (Formula f : split.la)
                if (kind(f) == Kind::Box) insert_sorted(sub.la, child(f));
            for (Formula f : split.ra)
                if (kind(f) == Kind::Box) insert_sorted(sub.ra, child(f));
            if (in_left) insert_sorted(sub.ls, child(principal));
            else insert_sorted(sub.rs, child(principal));
            Formula chi = rec(*pt.premises[0], std::move(sub));
            return in_left ? fold_neg(fold_box(fold_neg(chi))) : fold_box(chi);
        }
    }
    throw Error("maehara: unknown rule");
}

}  // namespace

Formula maehara(const ProofPtr& pt, const SplitSequent& split) {
    if (!pt) throw Error("maehara: missing proof");
    if (!(split.merged() == pt->conclusion))
        throw Error("maehara: the split does not merge to the proof's conclusion");
    MaeharaCtx ctx;
    return ctx.rec(*pt, SplitState::of(split));
}

// ── Diamond sugar ───────────────────────────────────────────────────────────

Formula desugar_diamonds(Formula f) {
    switch (kind(f)) {
        case Kind::Diamond: return neg(box(neg(desugar_diamonds(child(f)))));
        case Kind::Neg: return neg(desugar_diamonds(child(f)));
        case Kind::Box: return box(desugar_diamonds(child(f)));
        case Kind::And: return conj(desugar_diamonds(lhs(f)), desugar_diamonds(rhs(f)));
        case Kind::Or: return disj(desugar_diamonds(lhs(f)), desugar_diamonds(rhs(f)));
        case Kind::Nabla: throw Error("desugar_diamonds: nabla not supported here");
        default: return f;
    }
}

Formula resugar_diamonds(Formula f) {
    switch (kind(f)) {
        case Kind::Neg: {
            Formula c = resugar_diamonds(child(f));
            if (kind(c) == Kind::Box && kind(child(c)) == Kind::Neg)
                return diamond(child(child(c)));
            return neg(c);
        }
        case Kind::Box: return box(resugar_diamonds(child(f)));
        case Kind::Diamond: return diamond(resugar_diamonds(child(f)));
        case Kind::And: return conj(resugar_diamonds(lhs(f)), resugar_diamonds(rhs(f)));
        case Kind::Or: return disj(resugar_diamonds(lhs(f)), resugar_diamonds(rhs(f)));
        default: return f;
    }
}

// ── Pipeline ────────────────────────────────────────────────────────────────

Formula craig_via_sequent(Formula phi, Formula psi) {
    Formula left = desugar_diamonds(phi);
    Formula right = desugar_diamonds(psi);
    auto proof = prove(Sequent::make({left}, {right}));
    if (!proof) throw Error("craig_via_sequent: the implication is not provable");
    SplitSequent split{{left}, {}, {}, {right}};
    return resugar_diamonds(maehara(*proof, split));
}

}  // namespace modalk
