#pragma once

#include "checks.h"
#include "rng.h"
#include "structure.h"

namespace ainf {

/******** Named fixtures ********/

/* Four objects x,y,z,t; arrows a,b,c of degree 1, e of degree 2;
 * the only nonzero operation is m_3(a,b,c) = e. */
AInfCategory fixture_E(const Field& field);

/* fixture_E with strict identities adjoined (the A_4 Ext category). */
AInfCategory fixture_A4cat(const Field& field);

/* Four objects; arrows a,b,c of degree 1 and f of degree 0;
 * the only nonzero non-unit operation is m_3(b,f,a) = c.
 * Ships with strict identities. */
AInfCategory fixture_D4cat(const Field& field);

/* End^{>=0} of the complex k --1--> k --0--> k (pieces in degrees 0,1,2),
 * written out by hand: the six matrix units with m_1 = [d,-] and m_2 = o.
 * Its homology is two idempotent classes, concentrated in degree 0. */
AInfCategory fixture_end_chain(const Field& field);

/******** Random structures ********/

/* A random one-object dg algebra: the non-negative part of the
 * endomorphism algebra of a random finite complex, conjugated by a
 * random invertible degree-0 change of basis.  Always passes
 * check_stasheff; carries elements in several degrees so sign
 * conventions are genuinely exercised. */
AInfCategory random_dg_algebra(Rng& rng, const Field& field);

/* Bump one structure coefficient by a random nonzero scalar, keeping
 * degree and Hom-pair bookkeeping intact, resampling until the result
 * fails check_stasheff.  Returns the number of attempts used, or 0 if
 * no defect-producing mutation was found within the attempt budget
 * (in which case the input is left unchanged). */
int mutate_until_defect(Rng& rng, AInfCategory& A, int max_attempts = 64);

/* A random one-object family of degree-correct operations (arity n of
 * degree 2-n, entries on degree-matching targets) that need NOT satisfy
 * the structure identities.  Basis of 2..max_dim elements with degrees
 * in [-2,2], not all zero.  Intended for comparing independent checkers
 * on the same inputs: roughly half the draws fail both. */
AInfCategory random_op_family(Rng& rng, const Field& field, int max_arity, int max_dim);

/******** Minimal categories and their morphisms ********/

/* The path category of an A-chain quiver with objects o_0..o_k: step j
 * (o_{j+1} -> o_j) carries one parallel arrow per entry of arrow_degrees[j],
 * of that degree; the basis consists of all paths and the only operation is
 * concatenation.  Minimal (m_1 = 0) and associative. */
AInfCategory path_category(const Field& field,
                           const std::vector<std::vector<int>>& arrow_degrees);

/* Chain with single arrows of degree 1 (the A_{length+1} case). */
AInfCategory path_category(const Field& field, int length);

/* Transport a minimal structure along invertible data: the target carries one
 * basis element per source element, in the same order (so ids coincide), with
 * objects relabeled through object_map.  Given f with blockwise-invertible
 * degree-0 f_1 and optional higher components, the morphism identity is
 * solved arity by arity for the unique target operations m'_n.  The returned
 * category makes (object_map, f) an isomorphism A -> B. */
AInfCategory transport_minimal(const AInfCategory& A, const std::vector<std::size_t>& object_map,
                               const std::vector<std::string>& target_objects,
                               const AInfMorphism& f);

/* A random pair of isomorphic minimal categories: A is a path category,
 * B its transport along a random invertible f (random object permutation,
 * random blockwise-invertible f_1, random sparse f_2, f_3). */
struct MinimalPair {
    AInfCategory A;
    AInfCategory B;
    AInfMorphism f;
};
MinimalPair random_minimal_pair(Rng& rng, const Field& field);

}  // namespace ainf
