// ============================================================================
// modalk/quasimodel.hpp — Type elimination and Lyndon interpolant extraction
// ============================================================================
//
// Combined types pair a locally consistent subset of subf(nnf(phi)) with one
// of subf(nnf(~psi)).  Elimination removes overlap-inconsistent types and
// types with an unwitnessed diamond until the maximal quasi-model remains;
// the removal order is recorded and drives the interpolant construction.
//
// Two type spaces are supported.  The default enumerates every locally
// consistent subset.  The saturated space keeps only truth-determined
// subsets (the types actually realized by worlds); it decides the same
// satisfiability questions and supports the same interpolant construction,
// and it is the only space that stays tractable for the lower-bound family
// beyond n = 1.
//
// ============================================================================

#ifndef MODALK_QUASIMODEL_HPP
#define MODALK_QUASIMODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "modalk/formula.hpp"
#include "modalk/semantics.hpp"

namespace modalk {

enum class Side : std::uint8_t { Left, Right };

struct CombinedType {
    std::vector<Formula> left;   // subset of subf(nnf(phi)), in table order
    std::vector<Formula> right;  // subset of subf(nnf(~psi)), in table order
};

struct OverlapClash {
    std::string letter;
    Side positive_side;  // side holding the positive literal
};

struct DiamondUnwitnessed {
    Side side;
    Formula diamond;
};

using EliminationReason = std::variant<OverlapClash, DiamondUnwitnessed>;

struct EliminationStep {
    CombinedType type;
    EliminationReason reason;
};

struct EliminationTrace {
    std::vector<CombinedType> initial;
    std::vector<EliminationStep> steps;
    std::vector<CombinedType> final_set;

    std::string to_json() const;
};

enum class TypeSpace : std::uint8_t {
    LocallyConsistent,  // every locally consistent subset
    Saturated,          // truth-determined subsets only
};

struct TypeOptions {
    std::size_t max_table_per_side = 20;
    std::size_t max_types_per_side = 1u << 20;
    TypeSpace space = TypeSpace::LocallyConsistent;
    std::optional<std::uint64_t> order_seed;  // randomize the elimination order
};

struct SatResult {
    bool satisfiable = false;
    std::optional<PointedModel> witness;
    EliminationTrace trace;
};

// Every combined type, enumerated deterministically (side types ordered as
// bit patterns over the subformula table).
std::vector<CombinedType> all_types(Formula phi, Formula psi, const TypeOptions& opts = {});

// Runs the full elimination and materializes the trace.
EliminationTrace eliminate(Formula phi, Formula psi, const TypeOptions& opts = {});

// The maximal quasi-model as sorted flat indices into the deterministic type
// enumeration (index = left_index * |right types| + right_index).  The
// enumeration does not depend on the elimination order, so fixpoints from
// different orders compare directly without materializing any types.
std::vector<std::uint64_t> surviving_type_indices(Formula phi, Formula psi,
                                                  const TypeOptions& opts = {});

// Satisfiability of a single formula via eliminate(f, false); the witness
// model realizes the surviving types per the quasi-model truth lemma.
SatResult satisfiable(Formula f, const TypeOptions& opts = {});

// Validity of phi -> psi: no surviving type carries nnf(phi) on the left and
// nnf(~psi) on the right.
bool is_valid_implication(Formula phi, Formula psi, const TypeOptions& opts = {});

// The Lyndon interpolant extracted from the elimination order.  Requires a
// valid implication.  Sub-interpolants are cached per type, so the result is
// a shared DAG.
Formula lyndon_interpolant(Formula phi, Formula psi, const TypeOptions& opts = {});

}  // namespace modalk

#endif  // MODALK_QUASIMODEL_HPP
