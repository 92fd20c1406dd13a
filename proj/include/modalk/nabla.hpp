// ============================================================================
// modalk/nabla.hpp — nabla-normal form and uniform interpolation
// ============================================================================
//
// A formula is in nabla-normal form when it is generated by
//
//     f ::= true | false | pi | nabla{...} | pi & nabla{...} | f | f
//
// with pi a clash-free conjunction of literals and all nabla members again in
// normal form.  Conversion preserves letter polarities; dropping letters from
// the pi blocks realizes the bisimulation-quantifier removal operator.
//
// ============================================================================

#ifndef MODALK_NABLA_HPP
#define MODALK_NABLA_HPP

#include "modalk/formula.hpp"

namespace modalk {

// Grammar check for the normal form above.
bool is_nabla_form(Formula f);

// Normalization.  Input must be nabla-free; it is brought into NNF
// internally.  The output is semantically equivalent and in normal form.
Formula to_nabla_nf(Formula f);

// Drops every (positive and negative) occurrence of the given letters from
// the literal blocks; a block left empty disappears (or becomes `true` when
// it stood alone).  Input must be in nabla-normal form.
Formula remove_props(Formula f, const SignatureSet& drop);

// Normalize, then drop sig(f) \ keep.  The result mentions only kept letters,
// is implied by f, and implies every consequent of f over the kept letters.
Formula uniform_interpolant(Formula f, const SignatureSet& keep);

// Craig interpolant for a valid implication, as the uniform interpolant of
// the antecedent on the shared signature.  Rejects invalid implications.
Formula craig_via_nabla(Formula phi, Formula psi);

}  // namespace modalk

#endif  // MODALK_NABLA_HPP
