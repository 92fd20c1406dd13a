// ============================================================================
// formula.cpp — Interned formula arena, parser, printer, normal forms
// ============================================================================

#include "modalk/formula.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

namespace modalk {

// ── Arena ───────────────────────────────────────────────────────────────────
// Nodes live in append-only deques so references stay stable while new nodes
// are interned.  A node stores its kind plus either a name index (Prop), up
// to two child handles, or an (offset, length) slice into a shared child
// pool (Nabla).

namespace {

struct Node {
    Kind          kind;
    std::uint32_t a = 0;  // name index / first child / nabla offset
    std::uint32_t b = 0;  // second child / nabla length
};

struct NodeKey {
    Kind kind;
    std::uint32_t a, b;
    std::vector<std::uint32_t> members;  // nabla only

    bool operator==(const NodeKey& o) const {
        return kind == o.kind && a == o.a && b == o.b && members == o.members;
    }
};

struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const noexcept {
        std::size_t h = std::hash<int>{}(static_cast<int>(k.kind));
        auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
        mix(k.a);
        mix(k.b);
        for (auto m : k.members) mix(m);
        return h;
    }
};

}  // namespace

struct FormulaArena {
    static FormulaArena& instance() {
        static FormulaArena arena;
        return arena;
    }

    std::deque<Node> nodes;
    std::deque<std::string> names;
    std::unordered_map<std::string, std::uint32_t, std::hash<std::string>, std::equal_to<>> name_index;
    std::deque<std::vector<Formula>> nabla_pools;  // one vector per nabla node
    std::unordered_map<NodeKey, std::uint32_t, NodeKeyHash> intern;
    mutable std::shared_mutex mutex;

    Formula intern_node(NodeKey key) {
        {
            std::shared_lock lock(mutex);
            auto it = intern.find(key);
            if (it != intern.end()) return Formula(it->second);
        }
        std::unique_lock lock(mutex);
        auto it = intern.find(key);
        if (it != intern.end()) return Formula(it->second);
        Node n{key.kind, key.a, key.b};
        if (key.kind == Kind::Nabla) {
            std::vector<Formula> members;
            members.reserve(key.members.size());
            for (auto id : key.members) members.push_back(Formula(id));
            nabla_pools.push_back(std::move(members));
            n.a = static_cast<std::uint32_t>(nabla_pools.size() - 1);
            n.b = 0;
        }
        nodes.push_back(n);
        auto id = static_cast<std::uint32_t>(nodes.size() - 1);
        intern.emplace(std::move(key), id);
        return Formula(id);
    }

    std::uint32_t intern_name(std::string_view name) {
        {
            std::shared_lock lock(mutex);
            auto it = name_index.find(std::string(name));
            if (it != name_index.end()) return it->second;
        }
        std::unique_lock lock(mutex);
        auto it = name_index.find(std::string(name));
        if (it != name_index.end()) return it->second;
        names.emplace_back(name);
        auto idx = static_cast<std::uint32_t>(names.size() - 1);
        name_index.emplace(names.back(), idx);
        return idx;
    }

    const Node& node(Formula f) const {
        std::shared_lock lock(mutex);
        return nodes[f.id()];
    }
};

Formula detail_from_raw_id(std::uint32_t id) { return Formula(id); }

namespace {

FormulaArena& arena() { return FormulaArena::instance(); }

Node get_node(Formula f) {
    if (!f.valid()) throw Error("invalid formula handle");
    return arena().node(f);
}

}  // namespace

// ── Constructors ────────────────────────────────────────────────────────────

Formula prop(std::string_view name) {
    if (name.empty()) throw Error("proposition letter must be non-empty");
    auto idx = arena().intern_name(name);
    return arena().intern_node(NodeKey{Kind::Prop, idx, 0, {}});
}

Formula top() { return arena().intern_node(NodeKey{Kind::Top, 0, 0, {}}); }
Formula bot() { return arena().intern_node(NodeKey{Kind::Bot, 0, 0, {}}); }

Formula neg(Formula f) { return arena().intern_node(NodeKey{Kind::Neg, f.id(), 0, {}}); }
Formula conj(Formula a, Formula b) { return arena().intern_node(NodeKey{Kind::And, a.id(), b.id(), {}}); }
Formula disj(Formula a, Formula b) { return arena().intern_node(NodeKey{Kind::Or, a.id(), b.id(), {}}); }
Formula diamond(Formula f) { return arena().intern_node(NodeKey{Kind::Diamond, f.id(), 0, {}}); }
Formula box(Formula f) { return arena().intern_node(NodeKey{Kind::Box, f.id(), 0, {}}); }
Formula implies(Formula a, Formula b) { return disj(neg(a), b); }

Formula nabla(std::vector<Formula> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    NodeKey key{Kind::Nabla, 0, 0, {}};
    key.members.reserve(members.size());
    for (auto m : members) key.members.push_back(m.id());
    return arena().intern_node(std::move(key));
}

Formula conj_all(std::span<const Formula> fs) {
    if (fs.empty()) return top();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
}

Formula disj_all(std::span<const Formula> fs) {
    if (fs.empty()) return bot();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
}

// ── Node access ─────────────────────────────────────────────────────────────

Kind kind(Formula f) { return get_node(f).kind; }

std::string_view prop_name(Formula f) {
    Node n = get_node(f);
    if (n.kind != Kind::Prop) throw Error("prop_name: not a proposition letter");
    std::shared_lock lock(arena().mutex);
    return arena().names[n.a];
}

Formula child(Formula f) {
    Node n = get_node(f);
    if (n.kind != Kind::Neg && n.kind != Kind::Diamond && n.kind != Kind::Box)
        throw Error("child: not a unary node");
    return detail_from_raw_id(n.a);
}

Formula lhs(Formula f) {
    Node n = get_node(f);
    if (n.kind != Kind::And && n.kind != Kind::Or) throw Error("lhs: not a binary node");
    return detail_from_raw_id(n.a);
}

Formula rhs(Formula f) {
    Node n = get_node(f);
    if (n.kind != Kind::And && n.kind != Kind::Or) throw Error("rhs: not a binary node");
    return detail_from_raw_id(n.b);
}

std::span<const Formula> nabla_members(Formula f) {
    Node n = get_node(f);
    if (n.kind != Kind::Nabla) throw Error("nabla_members: not a nabla node");
    std::shared_lock lock(arena().mutex);
    const auto& pool = arena().nabla_pools[n.a];
    return {pool.data(), pool.size()};
}

// ── SignatureSet ────────────────────────────────────────────────────────────

SignatureSet::SignatureSet(std::vector<std::string> letters) : letters_(std::move(letters)) {
    std::sort(letters_.begin(), letters_.end());
    letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
}

bool SignatureSet::contains(std::string_view letter) const {
    return std::binary_search(letters_.begin(), letters_.end(), letter);
}

void SignatureSet::insert(std::string_view letter) {
    auto it = std::lower_bound(letters_.begin(), letters_.end(), letter);
    if (it == letters_.end() || *it != letter) letters_.insert(it, std::string(letter));
}

bool SignatureSet::subset_of(const SignatureSet& other) const {
    return std::includes(other.letters_.begin(), other.letters_.end(), letters_.begin(),
                         letters_.end());
}

SignatureSet set_union(const SignatureSet& a, const SignatureSet& b) {
    SignatureSet out;
    std::set_union(a.letters_.begin(), a.letters_.end(), b.letters_.begin(), b.letters_.end(),
                   std::back_inserter(out.letters_));
    return out;
}

SignatureSet set_intersection(const SignatureSet& a, const SignatureSet& b) {
    SignatureSet out;
    std::set_intersection(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                          b.letters_.end(), std::back_inserter(out.letters_));
    return out;
}

SignatureSet set_difference(const SignatureSet& a, const SignatureSet& b) {
    SignatureSet out;
    std::set_difference(a.letters_.begin(), a.letters_.end(), b.letters_.begin(), b.letters_.end(),
                        std::back_inserter(out.letters_));
    return out;
}

// ── Parser ──────────────────────────────────────────────────────────────────

ParseError::ParseError(std::string msg, std::size_t offset_, std::vector<std::string> expected_)
    : Error(std::move(msg)), offset(offset_), expected(std::move(expected_)) {}

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(std::vector<std::string> expected) {
        std::ostringstream os;
        os << "syntax error at byte " << pos << ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) os << (i + 1 == expected.size() ? " or " : ", ");
            os << expected[i];
        }
        throw ParseError(os.str(), pos, std::move(expected));
    }

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                                     text[pos] == '\r'))
            ++pos;
    }

    bool try_consume(std::string_view tok) {
        skip_ws();
        if (text.substr(pos, tok.size()) == tok) {
            pos += tok.size();
            return true;
        }
        return false;
    }

    bool peek_atom_start() {
        skip_ws();
        return pos < text.size() && text[pos] >= 'a' && text[pos] <= 'z';
    }

    std::string consume_atom() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               ((text[pos] >= 'a' && text[pos] <= 'z') || (text[pos] >= 'A' && text[pos] <= 'Z') ||
                (text[pos] >= '0' && text[pos] <= '9') || text[pos] == '_'))
            ++pos;
        return std::string(text.substr(start, pos - start));
    }

    Formula parse_formula() { return parse_implication(); }

    Formula parse_implication() {
        Formula left = parse_or();
        if (try_consume("->")) return implies(left, parse_implication());
        return left;
    }

    Formula parse_or() {
        Formula acc = parse_and();
        while (true) {
            skip_ws();
            // careful not to eat the '|' of a (hypothetical) '||'
            if (pos < text.size() && text[pos] == '|') {
                ++pos;
                acc = disj(acc, parse_and());
            } else {
                return acc;
            }
        }
    }

    Formula parse_and() {
        Formula acc = parse_unary();
        while (try_consume("&")) acc = conj(acc, parse_unary());
        return acc;
    }

    Formula parse_unary() {
        if (try_consume("~")) return neg(parse_unary());
        if (try_consume("[]")) return box(parse_unary());
        if (try_consume("<>")) return diamond(parse_unary());
        return parse_primary();
    }

    Formula parse_primary() {
        skip_ws();
        if (try_consume("(")) {
            Formula f = parse_formula();
            if (!try_consume(")")) fail({"')'"});
            return f;
        }
        if (peek_atom_start()) {
            std::size_t start = pos;
            std::string name = consume_atom();
            if (name == "true") return top();
            if (name == "false") return bot();
            if (name == "nabla") {
                if (!try_consume("{")) {
                    pos = start;
                    fail({"'{'"});
                }
                std::vector<Formula> members;
                skip_ws();
                if (!try_consume("}")) {
                    members.push_back(parse_formula());
                    while (try_consume(",")) members.push_back(parse_formula());
                    if (!try_consume("}")) fail({"','", "'}'"});
                }
                return nabla(std::move(members));
            }
            return prop(name);
        }
        fail({"'('", "'~'", "'[]'", "'<>'", "atom", "'true'", "'false'", "'nabla'"});
    }
};

}  // namespace

Formula parse(std::string_view text) {
    Parser p{text};
    Formula f = p.parse_formula();
    p.skip_ws();
    if (p.pos != text.size()) p.fail({"end of input", "'&'", "'|'", "'->'"});
    return f;
}

// ── Printer ─────────────────────────────────────────────────────────────────
// Minimal parentheses; round-trips to the identical handle.  `&` and `|`
// are left-associative, so right-nested binary children are parenthesized.

namespace {

void print_rec(Formula f, std::string& out) {
    auto parenthesized = [&out](Formula g) {
        out += '(';
        print_rec(g, out);
        out += ')';
    };
    auto print_tight = [&](Formula g) {
        Kind k = kind(g);
        if (k == Kind::And || k == Kind::Or) parenthesized(g);
        else print_rec(g, out);
    };
    switch (kind(f)) {
        case Kind::Prop: out += prop_name(f); break;
        case Kind::Top: out += "true"; break;
        case Kind::Bot: out += "false"; break;
        case Kind::Neg: out += '~'; print_tight(child(f)); break;
        case Kind::Diamond: out += "<>"; print_tight(child(f)); break;
        case Kind::Box: out += "[]"; print_tight(child(f)); break;
        case Kind::And: {
            Formula a = lhs(f), b = rhs(f);
            if (kind(a) == Kind::Or) parenthesized(a);
            else print_rec(a, out);
            out += " & ";
            if (kind(b) == Kind::Or || kind(b) == Kind::And) parenthesized(b);
            else print_rec(b, out);
            break;
        }
        case Kind::Or: {
            Formula a = lhs(f), b = rhs(f);
            print_rec(a, out);
            out += " | ";
            if (kind(b) == Kind::Or) parenthesized(b);
            else print_rec(b, out);
            break;
        }
        case Kind::Nabla: {
            out += "nabla{";
            bool first = true;
            for (Formula m : nabla_members(f)) {
                if (!first) out += ", ";
                first = false;
                print_rec(m, out);
            }
            out += '}';
            break;
        }
    }
}

}  // namespace

std::string print(Formula f) {
    std::string out;
    print_rec(f, out);
    return out;
}

// ── Structure predicates ────────────────────────────────────────────────────

bool contains_nabla(Formula f) {
    std::vector<Formula> stack{f};
    std::vector<bool> seen;
    auto visit = [&seen](Formula g) {
        if (seen.size() <= g.id()) seen.resize(g.id() + 1, false);
        if (seen[g.id()]) return false;
        seen[g.id()] = true;
        return true;
    };
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        if (!visit(g)) continue;
        switch (kind(g)) {
            case Kind::Nabla: return true;
            case Kind::Neg:
            case Kind::Diamond:
            case Kind::Box: stack.push_back(child(g)); break;
            case Kind::And:
            case Kind::Or:
                stack.push_back(lhs(g));
                stack.push_back(rhs(g));
                break;
            default: break;
        }
    }
    return false;
}

bool is_nnf(Formula f) {
    switch (kind(f)) {
        case Kind::Prop:
        case Kind::Top:
        case Kind::Bot: return true;
        case Kind::Neg: return kind(child(f)) == Kind::Prop;
        case Kind::And:
        case Kind::Or: return is_nnf(lhs(f)) && is_nnf(rhs(f));
        case Kind::Diamond:
        case Kind::Box: return is_nnf(child(f));
        case Kind::Nabla: return false;
    }
    return false;
}

// ── NNF ─────────────────────────────────────────────────────────────────────

namespace {

Formula nnf_rec(Formula f, bool negated, std::unordered_map<std::uint64_t, Formula>& memo) {
    std::uint64_t key = (static_cast<std::uint64_t>(f.id()) << 1) | (negated ? 1 : 0);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Formula out;
    switch (kind(f)) {
        case Kind::Prop: out = negated ? neg(f) : f; break;
        case Kind::Top: out = negated ? bot() : top(); break;
        case Kind::Bot: out = negated ? top() : bot(); break;
        case Kind::Neg: out = nnf_rec(child(f), !negated, memo); break;
        case Kind::And: {
            Formula a = nnf_rec(lhs(f), negated, memo);
            Formula b = nnf_rec(rhs(f), negated, memo);
            out = negated ? disj(a, b) : conj(a, b);
            break;
        }
        case Kind::Or: {
            Formula a = nnf_rec(lhs(f), negated, memo);
            Formula b = nnf_rec(rhs(f), negated, memo);
            out = negated ? conj(a, b) : disj(a, b);
            break;
        }
        case Kind::Diamond: {
            Formula c = nnf_rec(child(f), negated, memo);
            out = negated ? box(c) : diamond(c);
            break;
        }
        case Kind::Box: {
            Formula c = nnf_rec(child(f), negated, memo);
            out = negated ? diamond(c) : box(c);
            break;
        }
        case Kind::Nabla: throw Error("nnf: nabla nodes are not supported");
    }
    memo.emplace(key, out);
    return out;
}

}  // namespace

Formula nnf(Formula f) {
    std::unordered_map<std::uint64_t, Formula> memo;
    return nnf_rec(f, false, memo);
}

// ── Signature and polarity ──────────────────────────────────────────────────

SignatureSet sig(Formula f) {
    SignatureSet out;
    std::vector<Formula> stack{f};
    std::vector<bool> seen;
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        if (seen.size() <= g.id()) seen.resize(g.id() + 1, false);
        if (seen[g.id()]) continue;
        seen[g.id()] = true;
        switch (kind(g)) {
            case Kind::Prop: out.insert(prop_name(g)); break;
            case Kind::Neg:
            case Kind::Diamond:
            case Kind::Box: stack.push_back(child(g)); break;
            case Kind::And:
            case Kind::Or:
                stack.push_back(lhs(g));
                stack.push_back(rhs(g));
                break;
            case Kind::Nabla:
                for (Formula m : nabla_members(g)) stack.push_back(m);
                break;
            default: break;
        }
    }
    return out;
}

PolarityReport polarity(Formula f) {
    PolarityReport report;
    // (node, parity) pairs; parity true = even number of negations above
    std::vector<std::pair<Formula, bool>> stack{{f, true}};
    std::unordered_map<std::uint64_t, bool> seen;
    while (!stack.empty()) {
        auto [g, parity] = stack.back();
        stack.pop_back();
        std::uint64_t key = (static_cast<std::uint64_t>(g.id()) << 1) | (parity ? 1 : 0);
        if (seen.count(key)) continue;
        seen.emplace(key, true);
        switch (kind(g)) {
            case Kind::Prop:
                (parity ? report.positive : report.negative).insert(prop_name(g));
                break;
            case Kind::Neg: stack.push_back({child(g), !parity}); break;
            case Kind::Diamond:
            case Kind::Box: stack.push_back({child(g), parity}); break;
            case Kind::And:
            case Kind::Or:
                stack.push_back({lhs(g), parity});
                stack.push_back({rhs(g), parity});
                break;
            case Kind::Nabla:
                for (Formula m : nabla_members(g)) stack.push_back({m, parity});
                break;
            default: break;
        }
    }
    return report;
}

// ── Sizes ───────────────────────────────────────────────────────────────────

namespace {

std::size_t size_string_rec(Formula f, std::unordered_map<std::uint32_t, std::size_t>& memo) {
    if (auto it = memo.find(f.id()); it != memo.end()) return it->second;
    std::size_t out = 0;
    switch (kind(f)) {
        case Kind::Prop:
        case Kind::Top:
        case Kind::Bot: out = 1; break;
        case Kind::Neg:
        case Kind::Diamond:
        case Kind::Box: out = 1 + size_string_rec(child(f), memo); break;
        case Kind::And:
        case Kind::Or:
            // connective + two parentheses
            out = 3 + size_string_rec(lhs(f), memo) + size_string_rec(rhs(f), memo);
            break;
        case Kind::Nabla: throw Error("size_string: nabla nodes are not supported");
    }
    memo.emplace(f.id(), out);
    return out;
}

}  // namespace

std::size_t size_string(Formula f) {
    std::unordered_map<std::uint32_t, std::size_t> memo;
    return size_string_rec(f, memo);
}

std::size_t size_dag(Formula f) {
    std::vector<Formula> stack{f};
    std::vector<bool> seen;
    std::size_t count = 0;
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        if (seen.size() <= g.id()) seen.resize(g.id() + 1, false);
        if (seen[g.id()]) continue;
        seen[g.id()] = true;
        ++count;
        switch (kind(g)) {
            case Kind::Neg:
            case Kind::Diamond:
            case Kind::Box: stack.push_back(child(g)); break;
            case Kind::And:
            case Kind::Or:
                stack.push_back(lhs(g));
                stack.push_back(rhs(g));
                break;
            case Kind::Nabla:
                for (Formula m : nabla_members(g)) stack.push_back(m);
                break;
            default: break;
        }
    }
    return count;
}

// ── SUBF and LITERALS ───────────────────────────────────────────────────────

namespace {

void subf_rec(Formula f, std::vector<Formula>& out, std::vector<bool>& seen) {
    if (seen.size() <= f.id()) seen.resize(f.id() + 1, false);
    if (seen[f.id()]) return;
    seen[f.id()] = true;
    switch (kind(f)) {
        case Kind::Prop:
        case Kind::Top:
        case Kind::Bot:
        case Kind::Neg:  // NNF: negation only over letters, kept atomic
            break;
        case Kind::And:
        case Kind::Or:
            subf_rec(lhs(f), out, seen);
            subf_rec(rhs(f), out, seen);
            break;
        case Kind::Diamond:
        case Kind::Box: subf_rec(child(f), out, seen); break;
        case Kind::Nabla: throw Error("subf: nabla nodes are not supported");
    }
    out.push_back(f);
}

}  // namespace

std::vector<Formula> subf(Formula f) {
    if (!is_nnf(f)) throw Error("subf: formula must be in negation normal form");
    std::vector<Formula> out;
    std::vector<bool> seen;
    subf_rec(f, out, seen);
    return out;
}

std::vector<Formula> literals(Formula f) {
    std::vector<Formula> out;
    for (Formula g : subf(f)) {
        Kind k = kind(g);
        if (k == Kind::Prop || k == Kind::Neg) out.push_back(g);
    }
    return out;
}

// ── Nabla expansion ─────────────────────────────────────────────────────────

namespace {

Formula expand_nabla_rec(Formula f, std::unordered_map<std::uint32_t, Formula>& memo) {
    if (auto it = memo.find(f.id()); it != memo.end()) return it->second;
    Formula out;
    switch (kind(f)) {
        case Kind::Prop:
        case Kind::Top:
        case Kind::Bot: out = f; break;
        case Kind::Neg: out = neg(expand_nabla_rec(child(f), memo)); break;
        case Kind::Diamond: out = diamond(expand_nabla_rec(child(f), memo)); break;
        case Kind::Box: out = box(expand_nabla_rec(child(f), memo)); break;
        case Kind::And:
            out = conj(expand_nabla_rec(lhs(f), memo), expand_nabla_rec(rhs(f), memo));
            break;
        case Kind::Or:
            out = disj(expand_nabla_rec(lhs(f), memo), expand_nabla_rec(rhs(f), memo));
            break;
        case Kind::Nabla: {
            auto members = nabla_members(f);
            if (members.empty()) {
                out = box(bot());
                break;
            }
            std::vector<Formula> expanded;
            expanded.reserve(members.size());
            for (Formula m : members) expanded.push_back(expand_nabla_rec(m, memo));
            std::vector<Formula> diamonds;
            diamonds.reserve(expanded.size());
            for (Formula m : expanded) diamonds.push_back(diamond(m));
            out = conj(conj_all(diamonds), box(disj_all(expanded)));
            break;
        }
    }
    memo.emplace(f.id(), out);
    return out;
}

}  // namespace

Formula expand_nabla(Formula f) {
    std::unordered_map<std::uint32_t, Formula> memo;
    return expand_nabla_rec(f, memo);
}

int modal_depth(Formula f) {
    static thread_local std::unordered_map<std::uint32_t, int> memo;
    if (auto it = memo.find(f.id()); it != memo.end()) return it->second;
    int out = 0;
    switch (kind(f)) {
        case Kind::Prop:
        case Kind::Top:
        case Kind::Bot: out = 0; break;
        case Kind::Neg: out = modal_depth(child(f)); break;
        case Kind::And:
        case Kind::Or: out = std::max(modal_depth(lhs(f)), modal_depth(rhs(f))); break;
        case Kind::Diamond:
        case Kind::Box: out = 1 + modal_depth(child(f)); break;
        case Kind::Nabla: {
            int m = 0;
            for (Formula g : nabla_members(f)) m = std::max(m, modal_depth(g));
            out = 1 + m;
            break;
        }
    }
    memo.emplace(f.id(), out);
    return out;
}

}  // namespace modalk
