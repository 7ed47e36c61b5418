#pragma once

#include "checks.h"

namespace ainf {

/******** Bar-side families ********/

/* A family of components on the reduced tensor coalgebra over the suspended
 * Hom spaces.  Entries are stored on category basis words exactly like
 * operations, but each component's Koszul degree is the bar-side degree
 * (+1 for coderivations, 0 for coalgebra-morphism components, -1 for
 * homotopies), and all word-degree bookkeeping is suspended (every basis
 * element counts with degree - 1).  The m-side component of arity n has raw
 * degree bar_degree + 1 - n. */
struct BarFamily {
    int bar_degree = 1;
    int arity_bound = 1;
    std::map<int, MultiOp> comps;

    const MultiOp* comp(int n) const;
};

/******** Transform ********/

/* m-side family -> bar side.  Each component must have raw degree
 * bar_degree + 1 - n; entry coefficients are twisted by
 * (-1)^{n(n-1)/2 + sum_{i<n} (n-i)(d_i - 1)} where d_i is the degree of the
 * i-th display-order factor.  Throws input_error on degree mismatches. */
BarFamily to_bar(const AInfCategory& A, const std::map<int, MultiOp>& comps, int bar_degree,
                 int arity_bound);

/* Inverse twist: coefficients multiply by (-1)^{sum_{i<n} (n-i) d_i}; raw
 * degrees are restored.  Round trip with to_bar is the identity. */
std::map<int, MultiOp> from_bar(const AInfCategory& A, const BarFamily& b);

/* Convenience wrappers for the three kinds of m-side families. */
BarFamily bar_of_ops(const AInfCategory& A);
BarFamily bar_of_morphism(const AInfCategory& A, const AInfMorphism& f);
BarFamily bar_of_homotopy(const AInfCategory& A, const AInfHomotopy& h);

/******** Lifts and their evaluators ********/

/* The lifted coderivation on a word: sum of 1^r (x) b_s (x) 1^t over all
 * decompositions, Koszul signs in suspended degrees.  Output words have
 * length r + 1 + t. */
WordSum coderivation_apply(const AInfCategory& A, const BarFamily& b, const Word& w);

/* The lifted coalgebra morphism on a word: sum over all decompositions of
 * the word into blocks, each mapped by the matching component (sign-free
 * since the components have bar degree 0). */
WordSum coalgebra_morphism_apply(const AInfCategory& A, const BarFamily& F, const Word& w);

/* The (F,G)-coderivation lift of a degree -1 family H: sum over block
 * decompositions with F-components left of the H-block and G-components
 * right of it. */
WordSum fg_coderivation_apply(const AInfCategory& A, const BarFamily& F, const BarFamily& G,
                              const BarFamily& H, const Word& w);

/******** Bar-side checks ********/

/* Sign-free corestriction of b o b: sum b_u (1^r (x) b_s (x) 1^t) on one
 * word, which must vanish for an A-infinity structure. */
LinComb b_square_defect(const AInfCategory& A, const BarFamily& b, int n, const Word& w);

/* The identity above for all n <= 2N-1 on every composable basis word. */
CheckReport b_square_check(const AInfCategory& A, const BarFamily& b);

/* Sign-free corestricted morphism identity for a bar-degree-0 family F
 * against coderivations bA, bB:
 *   sum F_u (1^r (x) bA_s (x) 1^t) = sum bB_k (F_{i_1} (x) ... (x) F_{i_k}).
 * Words live in A; outputs of F in B. */
CheckReport bar_morphism_check(const AInfCategory& A, const AInfCategory& B, const BarFamily& bA,
                               const BarFamily& bB, const BarFamily& F);

/* Both homotopy identities for coalgebra-morphism families F, G and a
 * degree -1 family H:
 *   (i)  Delta H = F (x) H + H (x) G, checked structurally on the lift;
 *   (ii) F - G = b o H + H o b, corestricted to single outputs.
 * Defects are reported with the arity they occur at. */
CheckReport bar_morphism_and_homotopy(const AInfCategory& A, const AInfCategory& B,
                                      const BarFamily& bA, const BarFamily& bB,
                                      const BarFamily& F, const BarFamily& G,
                                      const BarFamily& H);

/* m-side forwarding: converts f, g, h with bar_transform and delegates to
 * bar_morphism_and_homotopy; pass means f and g are homotopic via h. */
CheckReport check_homotopy(const AInfCategory& A, const AInfCategory& B, const AInfMorphism& f,
                           const AInfMorphism& g, const AInfHomotopy& h);

}  // namespace ainf
