#pragma once

#include "checks.h"
#include "graded.h"

namespace ainf {

/******** Contractions ********/

/* A homotopy retraction of a structure onto its homology, Hom pair by Hom
 * pair: H is a minimal skeleton (chosen representatives as basis, no
 * operations), i and p have degree 0 with p i = 1 on H, and h has degree -1
 * with 1 - i p = m_1 h + h m_1 and the side conditions h i = 0, p h = 0,
 * h h = 0.  When the ambient has strict identities they become their own
 * representatives, so i maps each identity class to the identity. */
struct Contraction {
    AInfCategory H;    /* objects of the ambient, basis = homology classes */
    CatLinMap i, p, h; /* i: H -> ambient, p: ambient -> H, h: ambient -> ambient */
};

/* Per Hom pair and degree: named cycles (coordinates in the pair basis,
 * ascending ids within the degree) to try first as representatives. */
using PreferredReps = std::map<std::pair<std::size_t, std::size_t>,
                               std::map<int, std::vector<std::pair<std::string, Vec>>>>;

/* The differential m_1 of one Hom pair as a graded map of its pair basis. */
GradedMap pair_differential(const AInfCategory& A, const PairBasis& pb);

/* Split every Hom complex of A; the five contraction equations are verified
 * exactly before returning. */
Contraction build_contraction(const AInfCategory& A, const PreferredReps& preferred = {});

/* Exact verification of p i = 1, 1 - i p = m_1 h + h m_1, h i = 0, p h = 0,
 * h h = 0 on every basis element, plus degree and Hom-pair bookkeeping.
 * Throws input_error with the violated equation. */
void validate_contraction(const AInfCategory& A, const Contraction& c);

/******** Homology algebra and quasi-isomorphisms ********/

/* The induced associative product on homology: classes as basis, m_2 =
 * p o m_2 o (i (x) i).  Associativity and, when identities are present,
 * strict unitality are verified exactly. */
AInfCategory homology_algebra(const AInfCategory& A);

/* H(f_1) computed degreewise per Hom pair, and its invertibility. */
struct InducedHomology {
    bool quasi_iso = false;
    /* source pair (x,y) -> map H(x,y) -> H(fx, fy), degree 0 */
    std::map<std::pair<std::size_t, std::size_t>, GradedMap> induced;
};
InducedHomology is_quasi_iso(const AInfCategory& A, const AInfCategory& B, const AInfMorphism& f);

/******** Minimal models ********/

/* The arity-(s+1) obstruction of a partial morphism family (f_1..f_s):
 * every term of the morphism identity at arity s+1 that does not involve
 * the missing components.  The partial family must satisfy the identities
 * for n <= s and carry no components above s (input_error otherwise); the
 * result is certified to be a cycle for the differential
 * d(c) = m_1 c - (-1)^{|c|} c d_tensor (internal_error on failure). */
MultiOp obstruction_cocycle(const AInfCategory& A, const AInfCategory& B,
                            const AInfMorphism& partial, int s);

/* The exhaustive arity bound used when none is requested: top homology
 * degree + 2 (at most the longest composable word when that is finite). */
int default_arity_target(const AInfCategory& H);

struct TransferResult {
    AInfCategory Amin;  /* minimal: m_1 = 0, products up to the target */
    AInfMorphism f;     /* Amin -> ambient, f_1 = i, quasi-isomorphism */
    int arity_target = 2;
};

/* Minimal model by the arity-by-arity obstruction solve along a contraction:
 * f_1 = i, and for each n the obstruction c_n (the partial-family defect)
 * yields m_n = -p c_n and f_n = h c_n, the global sign being settled once at
 * arity 3 by certifying the identity.  Components are produced beyond the
 * target (with products required to vanish there) so that the morphism
 * identity is certified on the whole range check_morphism covers.  Output is
 * certified: Amin passes check_stasheff, f passes check_morphism; hard
 * internal_error on any certification failure, input_error when the input
 * fails its identities or the target is too small for a genuine product. */
TransferResult transfer_minimal_model(const AInfCategory& A, const Contraction& c,
                                      int arity_target = 0);

}  // namespace ainf
