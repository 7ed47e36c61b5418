#pragma once

#include "structure.h"

namespace ainf {

/******** Reports ********/

/* One located violation: the identity at arity n evaluated on a basis word
 * left a nonzero defect. */
struct Defect {
    int n = 0;
    Word word;
    LinComb defect;
};

struct CheckReport {
    std::vector<Defect> defects;
    bool pass() const { return defects.empty(); }
};

/******** Combinatorics shared by the identity checks ********/

/* All ordered decompositions n = i_1 + ... + i_r with 1 <= i_j <= max_part,
 * in lexicographic order. */
std::vector<std::vector<std::size_t>> compositions(std::size_t n, std::size_t max_part);

/* The right-hand-side sign of the morphism identity:
 * s = (r-1)(i_1-1) + (r-2)(i_2-1) + ... + (i_{r-1}-1). */
int morphism_rhs_sign(const std::vector<std::size_t>& parts);

/******** Structure and morphism checks ********/

/* Verify sum (-1)^{r+st} m_u (1^r (x) m_s (x) 1^t) = 0 on every composable
 * basis word for every n <= 2N-1 (exhaustive given the arity bound N). */
CheckReport check_stasheff(const AInfCategory& A);

/* Defect of the arity-n Stasheff identity on one word. */
LinComb stasheff_defect(const AInfCategory& A, int n, const Word& w);

/* Shape validation for a morphism f: A -> B (degrees, Hom pairs, object map). */
void validate_morphism(const AInfCategory& A, const AInfCategory& B, const AInfMorphism& f);

/* Verify sum (-1)^{r+st} f_u (1^r (x) m_s (x) 1^t)
 *        = sum (-1)^s m_r (f_{i_1} (x) ... (x) f_{i_r})
 * for all n up to the combined arity bound. */
CheckReport check_morphism(const AInfCategory& A, const AInfCategory& B, const AInfMorphism& f);

/* Defect (LHS - RHS) of the arity-n morphism identity on one word. */
LinComb morphism_defect(const AInfCategory& A, const AInfCategory& B, const AInfMorphism& f,
                        int n, const Word& w);

/* (f o g)_n = sum (-1)^s f_r (g_{i_1} (x) ... (x) g_{i_r}), f: B -> C, g: A -> B. */
AInfMorphism compose_morphisms(const AInfCategory& A, const AInfCategory& B,
                               const AInfCategory& C, const AInfMorphism& f,
                               const AInfMorphism& g);

/* Inverse of a morphism between minimal structures with invertible f_1, by
 * arity recursion; certified two-sided.  Throws input_error when the
 * preconditions fail. */
AInfMorphism invert_minimal_morphism(const AInfCategory& A, const AInfCategory& B,
                                     const AInfMorphism& f);

/* Blockwise inverse of an invertible strict component f_1 along the given
 * object map (which must be bijective).  Throws input_error if any block is
 * not invertible. */
MultiOp strict_inverse_component(const AInfCategory& A, const AInfCategory& B,
                                 const std::vector<std::size_t>& object_map,
                                 const MultiOp& f1);

/******** Strict units ********/

/* Non-throwing version of the strict-identity validation. */
CheckReport check_units(const AInfCategory& A);

/* Adjoin a strict identity per object (names "1_<object>"); existing
 * operations are unchanged and vanish on the new identities. */
AInfCategory augment(const AInfCategory& B);

/* Remove the declared identities; requires that no operation output touches
 * them (i.e. the structure is augmented over its identities). */
AInfCategory reduce(const AInfCategory& A);

/******** Hochschild deformation bridge ********/

/* For an associative structure B concentrated in degree 0 and an n-cochain c
 * (arity n, degree 0), build B (+) eps*B with eps^2 = 0, |eps| = 2-n, the
 * multiplication extended eps-bilinearly and the arity-n correction eps*c;
 * return {the deformed structure passes check_stasheff, c is a Hochschild
 * cocycle under the standard differential}.  The two verdicts must agree. */
std::pair<bool, bool> hochschild_deformation_check(const AInfCategory& B, const MultiOp& c);

}  // namespace ainf
