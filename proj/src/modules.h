#pragma once

#include <optional>

#include "transfer.h"

namespace ainf {

/******** Modules as one-point extensions ********/

/* A module over a category is carried as the category with one extra object
 * adjoined: module elements are the Homs into that object (src = the object
 * the piece sits at, dst = star), module operations are the ambient
 * operations on words led by them.  Nothing maps out of the star object, so
 * a word contains at most one module element, always leftmost; the ambient
 * structure identities restricted to led words are exactly the module
 * identities, with the same sign conventions and checkers as the category
 * case.  The ambient carries no strict identities (the star object cannot
 * have one); the base's are remembered for reconstruction. */
struct AInfModule {
    AInfCategory amb;
    std::size_t star = 0;
    std::size_t base_size = 0;     /* ambient ids below this are the base */
    int base_arity_bound = 2;
    std::map<std::size_t, BasisId> base_identities;

    bool is_module_elem(BasisId x) const { return x >= base_size; }
    bool is_led(const Word& w) const { return !w.empty() && is_module_elem(w[0]); }

    /* Append a module element sitting at the given base object. */
    BasisId add_elem(const std::string& name, int degree, std::size_t at_object);
    /* One structure constant m_n(m, a_2, ..., a_n) = c * out; the word must
     * be composable and led (input_error otherwise). */
    void add_op(const Word& w, BasisId out, const Scalar& c);

    AInfCategory base() const;     /* the underlying category, ops restricted */
    std::vector<Word> led_words(std::size_t n) const;
    void validate() const;         /* bookkeeping only; identities are checks */
};

/* The empty module over A. */
AInfModule make_module(const AInfCategory& A);

/* Hom(-, x) with its composition action (the free module when A has one
 * object): one element per arrow into x, operations copied verbatim from A's
 * operations on words led by such an arrow. */
AInfModule representable_module(const AInfCategory& A, std::size_t x);

/******** Structure and morphism checks ********/

/* Module identities on all led words up to the combined bound.  The base
 * must pass its own identities (input_error otherwise). */
CheckReport check_module(const AInfModule& M);

/* Components f_n of degree 1-n on led words of L, outputs led in M. */
struct ModuleMorphism {
    int arity_bound = 1;
    std::map<int, MultiOp> comps;

    const MultiOp* comp(int n) const;
    MultiOp& comp_mut(int n);
    static ModuleMorphism identity(const AInfModule& M);
};

/* The ambient category morphism extending f by the identity on the base;
 * module-morphism notions all reduce to category-morphism ones through it. */
AInfMorphism ambient_morphism(const AInfModule& L, const AInfModule& M, const ModuleMorphism& f);

struct ModuleMorphismCheck {
    CheckReport report;
    bool quasi_iso = false;   /* H(f_1) invertible on every module pair */
};
ModuleMorphismCheck check_module_morphism(const AInfModule& L, const AInfModule& M,
                                          const ModuleMorphism& f);

/* (fg)_n = sum over r+s=n of (-1)^{(r-1)s} f_{1+s} (g_r (x) 1^s), f after g;
 * words enumerated from g's source L. */
ModuleMorphism compose_module_morphisms(const AInfModule& L, const ModuleMorphism& f,
                                        const ModuleMorphism& g);

/* Components h_n of degree -n on led words of L, outputs led in M. */
struct ModuleHomotopy {
    int arity_bound = 1;
    std::map<int, MultiOp> comps;

    const MultiOp* comp(int n) const;
    MultiOp& comp_mut(int n);
};

/* f_n = sum (-1)^{rs} m_{1+s} (h_r (x) 1^s)
 *     + sum (-1)^{r+st} h_u (1^r (x) m_s (x) 1^t) for all n:
 * pass means f is nullhomotopic via h. */
CheckReport module_nullhomotopy_check(const AInfModule& L, const AInfModule& M,
                                      const ModuleMorphism& f, const ModuleHomotopy& h);

/******** Constructions ********/

/* (SM)^p = M^{p+1} and m_n^{SM} = (-1)^n m_n^M; base untouched. */
AInfModule suspend_module(const AInfModule& M);

/* Restriction along f: A -> base of M:
 * m_n = sum (-1)^s m_{r+1} (1 (x) f_{i_1} (x) ... (x) f_{i_r}), the sign as
 * in the morphism identity with the module slot as a first block of size 1. */
AInfModule restrict_module(const AInfCategory& A, const AInfMorphism& f, const AInfModule& M);

/******** Minimal models ********/

struct ModuleMinimalModel {
    AInfModule Hmin;     /* module m_1 = 0, same base */
    ModuleMorphism f;    /* Hmin -> M, f_1 = inclusion of representatives */
    int arity_target = 2;
};

/* The obstruction-driven transfer, relative to the base: the base stays
 * verbatim, the module complex is contracted onto its homology per object,
 * and the module operations/morphism components are solved arity by arity
 * from the partial-family defect (m_n = -p c_n, f_n = h c_n), certified
 * stage by stage and on the full checked range at the end. */
ModuleMinimalModel module_minimal_model(const AInfModule& M, int arity_target = 0);

/******** Homotopy inverses ********/

struct ModuleHomotopyInverse {
    ModuleMorphism g;    /* M -> L with g f ~ 1 and f g ~ 1 */
    ModuleHomotopy h_fg; /* on M: f g - 1 = boundary of h_fg */
    ModuleHomotopy h_gf; /* on L: g f - 1 = boundary of h_gf */
};

/* Search a two-sided homotopy inverse of f: L -> M by solving the linear
 * system in the components of g and both homotopies (all arities <= cap,
 * default the sum of the ambient arity bounds; module morphisms are linear
 * in the module slot, so the whole system is linear).  Returns nothing when
 * the truncated system is inconsistent; a returned inverse is verified
 * through the checkers before returning. */
std::optional<ModuleHomotopyInverse> module_homotopy_inverse(const AInfModule& L,
                                                             const AInfModule& M,
                                                             const ModuleMorphism& f,
                                                             int cap = 0);

}  // namespace ainf
