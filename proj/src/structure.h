#pragma once

#include <map>
#include <string>
#include <vector>

#include "graded.h"

namespace ainf {

/******** Sparse linear data over a category's basis ********/

using BasisId = std::size_t;
using Word = std::vector<BasisId>;       /* display order: leftmost = applied last */
using LinComb = std::map<BasisId, Scalar>;
using WordSum = std::map<Word, Scalar>;

void lin_add(LinComb& acc, BasisId id, const Scalar& c);
void lin_add(LinComb& acc, const LinComb& other, const Scalar& mult);
void word_add(WordSum& acc, const Word& w, const Scalar& c);

/******** Multilinear operations ********/

/* One basis element of a category: an element of Hom(src, dst) of the given
 * degree.  Ids are indices into AInfCategory::basis. */
struct BasisElem {
    std::string name;
    int degree = 0;
    std::size_t src = 0, dst = 0;  /* object indices */

    bool operator==(const BasisElem&) const = default;
};

/* A multilinear operation of fixed arity and degree, stored sparsely as
 * input word -> output combination.  Words are in display order; the input
 * of an arity-n operation is Hom(A_{n-1},A_n) (x) ... (x) Hom(A_0,A_1),
 * so the leftmost factor is the last-applied one. */
struct MultiOp {
    int arity = 1;
    int degree = 0;
    std::map<Word, LinComb> entries;

    bool is_zero() const { return entries.empty(); }
    LinComb apply(const Word& w) const;
    void add(const Word& w, BasisId out, const Scalar& c);
    void add(const Word& w, const LinComb& out);

    bool operator==(const MultiOp&) const = default;
};

/******** A-infinity categories ********/

/* An A-infinity category (algebras are the one-object case): objects, Hom
 * spaces given by a global list of basis elements, and operations m_n of
 * degree 2-n for n up to the arity bound (all higher m_n vanish). */
struct AInfCategory {
    Field field;
    std::vector<std::string> objects;
    std::vector<BasisElem> basis;
    int arity_bound = 2;
    std::map<int, MultiOp> ops;                      /* arity -> m_n */
    std::map<std::size_t, BasisId> identities;       /* object -> strict identity */

    BasisId add_basis(const std::string& name, int degree, std::size_t src, std::size_t dst);
    BasisId id_of(const std::string& name) const;     /* throws input_error */

    const MultiOp* op(int n) const;                   /* nullptr when absent */
    MultiOp& op_mut(int n);                           /* creates with degree 2-n */

    bool composable(const Word& w) const;
    int word_degree(const Word& w) const;
    std::size_t word_src(const Word& w) const;        /* src of rightmost factor */
    std::size_t word_dst(const Word& w) const;        /* dst of leftmost factor */

    /* All composable basis words of the given length, ascending ids. */
    std::vector<Word> words(std::size_t len) const;

    /* Structural validation: composability and degree bookkeeping of every
     * entry, arity bound, strict-identity equations when identities are
     * declared, and the degree-0 concentration rule (only m_2 possible).
     * Throws input_error with a located message. */
    void validate() const;

    bool has_identities() const { return identities.size() == objects.size() && !objects.empty(); }

    bool operator==(const AInfCategory&) const = default;
};

/* The Hom space of one ordered pair as a graded space (names = basis names)
 * plus the positions of its elements in the global basis. */
struct PairBasis {
    GradedSpace space;
    std::vector<BasisId> ids;                          /* flattened, grouped by degree */
    std::map<BasisId, std::pair<int, std::size_t>> locate;  /* id -> (degree, index) */
};
PairBasis pair_basis(const AInfCategory& A, std::size_t src, std::size_t dst);

/******** Morphisms and homotopies ********/

/* Components f_n of degree 1-n; words live in the source category, outputs
 * in the target. */
struct AInfMorphism {
    std::vector<std::size_t> object_map;
    int arity_bound = 1;
    std::map<int, MultiOp> comps;                     /* arity -> f_n */

    const MultiOp* comp(int n) const;
    MultiOp& comp_mut(int n);                         /* creates with degree 1-n */

    static AInfMorphism identity(const AInfCategory& A);
    bool is_identity(const AInfCategory& A) const;
};

/* Components h_n of degree -n (m-side). */
struct AInfHomotopy {
    int arity_bound = 1;
    std::map<int, MultiOp> comps;

    const MultiOp* comp(int n) const;
    MultiOp& comp_mut(int n);                         /* creates with degree -n */
};

/******** Unary maps between category Hom spaces ********/

/* Degree-homogeneous linear map acting Hom-pair-wise: source basis id ->
 * combination over the target's basis.  Used for contractions i, p, h and
 * for induced maps on homology. */
struct CatLinMap {
    int degree = 0;
    std::map<BasisId, LinComb> cols;

    LinComb apply(BasisId x) const;
    LinComb apply(const LinComb& v) const;
};

/******** Koszul evaluators ********/

/* Apply 1^{(x)r} (x) op (x) 1^{(x)t} to w (r + op.arity + t = |w|), with the
 * Koszul sign (-1)^{op.degree * sum of the first r factor degrees}.  Each
 * element degree is shifted by dshift (use -1 on the bar side). */
WordSum block_apply(const AInfCategory& A, const MultiOp& op, std::size_t r, const Word& w,
                    int dshift = 0);

/* Apply f_1 (x) ... (x) f_k to w, where fs[j] == nullptr denotes the arity-1
 * identity.  arities[j] gives each factor's arity (1 for identities); their
 * sum must be |w|.  Koszul signs use the degrees of A's basis elements
 * (shifted by dshift) and the ops' declared degrees. */
WordSum ops_apply(const AInfCategory& A, const std::vector<const MultiOp*>& fs,
                  const std::vector<std::size_t>& arities, const Word& w, int dshift = 0);

}  // namespace ainf
