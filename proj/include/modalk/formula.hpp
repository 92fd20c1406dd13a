// ============================================================================
// modalk/formula.hpp — Interned modal-formula DAG, parsing, normal forms
// ============================================================================
//
// Every formula is a node in a process-wide interned DAG: two structurally
// identical terms always share the same handle, so handle equality is
// structural equality and DAG size is the number of distinct reachable
// nodes.  Handles are trivially copyable 32-bit values; the arena behind
// them is append-only (safe for concurrent reads, serialized writes).
//
// Node kinds:  Prop | Top | Bot | Neg | And | Or | Diamond | Box | Nabla.
// Implication is sugar: `p -> q` parses as ~p | q and has no node of its
// own.  Nabla takes a *set* of children (duplicates collapse on interning).
//
// ============================================================================

#ifndef MODALK_FORMULA_HPP
#define MODALK_FORMULA_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace modalk {

// ── Errors ──────────────────────────────────────────────────────────────────

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised by parse(); carries the byte offset of the failure and the set of
// token descriptions that would have been acceptable there.
struct ParseError : Error {
    ParseError(std::string msg, std::size_t offset, std::vector<std::string> expected);
    std::size_t offset;
    std::vector<std::string> expected;
};

// Raised when a configurable resource guard trips (CLI exit code 3).
struct GuardError : Error {
    explicit GuardError(const std::string& msg) : Error(msg) {}
};

// ── Formula handle ──────────────────────────────────────────────────────────

enum class Kind : std::uint8_t { Prop, Top, Bot, Neg, And, Or, Diamond, Box, Nabla };

class Formula {
public:
    Formula() = default;  // invalid handle

    bool          valid() const noexcept { return id_ != kInvalid; }
    std::uint32_t id() const noexcept { return id_; }

    friend bool operator==(Formula a, Formula b) noexcept { return a.id_ == b.id_; }
    friend bool operator!=(Formula a, Formula b) noexcept { return a.id_ != b.id_; }
    friend bool operator<(Formula a, Formula b) noexcept { return a.id_ < b.id_; }

private:
    static constexpr std::uint32_t kInvalid = 0xffffffffu;
    explicit Formula(std::uint32_t id) : id_(id) {}
    std::uint32_t id_ = kInvalid;
    friend struct FormulaArena;
    friend Formula detail_from_raw_id(std::uint32_t id);
};

// Internal: rebuilds a handle from a raw arena id (used by module internals).
Formula detail_from_raw_id(std::uint32_t id);

// ── Constructors (interning) ────────────────────────────────────────────────

Formula prop(std::string_view name);
Formula top();
Formula bot();
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula diamond(Formula f);
Formula box(Formula f);
Formula nabla(std::vector<Formula> members);  // set semantics: sorted, deduped
Formula implies(Formula a, Formula b);        // sugar for ~a | b

// Left-associated n-ary forms; empty conjunction is Top, empty disjunction Bot.
Formula conj_all(std::span<const Formula> fs);
Formula disj_all(std::span<const Formula> fs);

// ── Node access ─────────────────────────────────────────────────────────────

Kind             kind(Formula f);
std::string_view prop_name(Formula f);         // Prop only
Formula          child(Formula f);             // Neg / Diamond / Box
Formula          lhs(Formula f);               // And / Or
Formula          rhs(Formula f);               // And / Or
std::span<const Formula> nabla_members(Formula f);

// ── Signature and polarity ──────────────────────────────────────────────────

// Duplicate-free, lexicographically ordered set of proposition letters.
class SignatureSet {
public:
    SignatureSet() = default;
    explicit SignatureSet(std::vector<std::string> letters);

    bool  contains(std::string_view letter) const;
    void  insert(std::string_view letter);
    bool  empty() const noexcept { return letters_.empty(); }
    std::size_t size() const noexcept { return letters_.size(); }

    bool subset_of(const SignatureSet& other) const;

    auto begin() const noexcept { return letters_.begin(); }
    auto end() const noexcept { return letters_.end(); }
    const std::vector<std::string>& letters() const noexcept { return letters_; }

    friend bool operator==(const SignatureSet&, const SignatureSet&) = default;

    friend SignatureSet set_union(const SignatureSet& a, const SignatureSet& b);
    friend SignatureSet set_intersection(const SignatureSet& a, const SignatureSet& b);
    friend SignatureSet set_difference(const SignatureSet& a, const SignatureSet& b);

private:
    std::vector<std::string> letters_;  // sorted, unique
};

struct PolarityReport {
    SignatureSet positive;
    SignatureSet negative;
};

// ── Operations ──────────────────────────────────────────────────────────────

// Concrete grammar (ASCII): atoms [a-z][a-zA-Z0-9_]*, constants true/false,
// `~` negation, `&` and `|` left-assoc with `&` tighter, `->` right-assoc
// loosest, `[]` box and `<>` diamond prefix (same strength as `~`),
// `nabla{f1, f2, ...}`, parentheses.
Formula     parse(std::string_view text);
std::string print(Formula f);  // parse(print(f)) == f

// Negation normal form.  Rejects Nabla nodes.  Preserves letter polarities.
Formula nnf(Formula f);

bool is_nnf(Formula f);
bool contains_nabla(Formula f);

SignatureSet   sig(Formula f);
PolarityReport polarity(Formula f);

// Symbol count with every binary application parenthesized and unary
// operators bare.  Rejects Nabla nodes.
std::size_t size_string(Formula f);

// Number of distinct subterm nodes (the DAG-size metric).
std::size_t size_dag(Formula f);

// Closure of an NNF formula under subformulas, with negative literals kept
// atomic: subf(~p) = {~p} only.  Deterministic order (children first).
std::vector<Formula> subf(Formula f);

// The members of subf(f) that are literals (p or ~p).
std::vector<Formula> literals(Formula f);

// Rewrites every Nabla node via its defining identity; nabla{} becomes []false.
Formula expand_nabla(Formula f);

int modal_depth(Formula f);

}  // namespace modalk

template <>
struct std::hash<modalk::Formula> {
    std::size_t operator()(modalk::Formula f) const noexcept {
        return std::hash<std::uint32_t>{}(f.id());
    }
};

#endif  // MODALK_FORMULA_HPP
