#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "graded.h"
#include "modules.h"

namespace ainf {

/******** The shift closure ********/

/* A formal shifted copy (A, n) of an object of the base category. */
struct ShiftedObject {
    std::size_t object = 0;
    int shift = 0;

    auto operator<=>(const ShiftedObject&) const = default;
};

/* The category ZA on a finite set of shifted copies: the space of morphisms
 * from (A, n) to (A', n') is Hom(A, A')[n' - n], so a base arrow g of degree
 * d yields one copy of degree d - (n' - n) for every compatible pair of
 * entries.  Compositions are those of the base category tensored with the
 * strict category on the shift labels: an operation entry picks up
 *   (-1)^{sum over display positions p < q of jump_p * deg_q}
 * where jump = (dst shift - src shift) of the p-th factor and deg is the
 * underlying degree of the q-th.  This is the Koszul cost of collecting the
 * shift components to the right of the base components, it keeps strict
 * identities strict, and the full subcategory on shift 0 is the base
 * category verbatim. */
struct ShiftClosure {
    AInfCategory base;                          /* the category that was closed */
    AInfCategory ZA;
    std::vector<ShiftedObject> objects;         /* ZA object index -> copy */
    std::map<ShiftedObject, std::size_t> index; /* copy -> ZA object index */
    std::vector<BasisId> underlying;            /* ZA basis id -> base basis id */
    /* (base basis id, src ZA object, dst ZA object) -> ZA basis id */
    std::map<std::tuple<BasisId, std::size_t, std::size_t>, BasisId> copies;

    /* Index of a shifted copy; throws input_error when absent. */
    std::size_t object_of(const ShiftedObject& s) const;
    /* The copy of base arrow a between two shifted copies; throws input_error
     * when either copy is absent or the arrow does not run between them. */
    BasisId copy_of(BasisId a, const ShiftedObject& src, const ShiftedObject& dst) const;
};

/* Build the shift closure on the given copies (pairwise distinct; the base
 * category must have strict identities).  The result is certified: it passes
 * its own structure validation including the strict identity equations. */
ShiftClosure shift_category(const AInfCategory& A, const std::vector<ShiftedObject>& entries);
/* Convenience: every object of A at every listed shift, object-major. */
ShiftClosure shift_category(const AInfCategory& A, const std::vector<int>& shifts);

/******** Twisted objects ********/

/* (B, delta): B a finite sequence of shifted copies, delta a strictly upper
 * triangular matrix with delta[i][j] in Hom^1(B_j, B_i) of the shift closure
 * satisfying the Maurer-Cartan identity
 *   sum_{t >= 1} (-1)^{t(t-1)/2} m_t(delta, ..., delta) = 0
 * (a finite sum: triangularity kills t beyond the sequence length). */
struct TwistedObject {
    std::vector<ShiftedObject> seq;
    std::vector<std::vector<LinComb>> delta;    /* r x r, entries in ZA basis */

    std::size_t size() const { return seq.size(); }
};

/* Nonzero entries of the Maurer-Cartan sum, keyed by matrix position (empty
 * means the object is valid).  Shape, degree, or triangularity violations
 * throw input_error. */
std::map<std::pair<std::size_t, std::size_t>, LinComb>
mc_defects(const ShiftClosure& Z, const TwistedObject& T);

/* Construct a twisted object and certify the Maurer-Cartan identity; throws
 * input_error naming the first defective matrix entry otherwise. */
TwistedObject validate_mc(const ShiftClosure& Z, std::vector<ShiftedObject> seq,
                          std::vector<std::vector<LinComb>> delta);

/******** Twisted compositions ********/

/* A morphism of twisted objects: mat[j][i] is an element of
 * Hom_ZA(X_i, Y_j), mapping the i-th summand of the source X to the j-th
 * summand of the target Y.  Entries need not be homogeneous. */
struct TwMorphism {
    std::vector<std::vector<LinComb>> mat;      /* r_dst x r_src */

    bool is_zero() const;
    bool operator==(const TwMorphism& o) const { return mat == o.mat; }
};

TwMorphism tw_zero(const TwistedObject& src, const TwistedObject& dst);
/* The diagonal identity matrix (strict identities of the shifted copies). */
TwMorphism tw_identity(const ShiftClosure& Z, const TwistedObject& obj);
TwMorphism tw_add(const TwMorphism& a, const TwMorphism& b);
TwMorphism tw_scale(const TwMorphism& a, const Scalar& c);

/* Sign exponent (0 or 1) of one insertion word, computed by normal ordering
 * in k<X,Y,S>/(SX - XS, SY + YS): letters in display order, each either an
 * insertion S (first = true) or an argument with its total degree (first =
 * false).  Each S contributes the number of letters strictly to its right
 * plus the sum of the argument degrees strictly to its left. */
int insertion_sign(const std::vector<std::pair<bool, int>>& letters);

/* All ways to distribute t insertions over the n + 1 gaps around n
 * arguments, lexicographic in (gap 0, ..., gap n). */
std::vector<std::vector<int>> insertion_patterns(int n, int t);

/* The twisted composition m_n^tw of the display-order arguments
 * fs[0], ..., fs[n-1], where fs[k] maps objs[k+1] -> objs[k] (n + 1 objects,
 * target first):
 *   m_n^tw = sum over delta insertions of  +- m^ZA_{n+t}(delta^.. , f, ...)
 * with gap g around the arguments taking powers of the delta of objs[g] and
 * the sign given by insertion_sign.  Shape mismatches and Maurer-Cartan
 * violations throw input_error. */
TwMorphism tw_compose(const ShiftClosure& Z, const std::vector<const TwistedObject*>& objs,
                      const std::vector<const TwMorphism*>& fs);

/******** The twisted category, materialized ********/

/* tw(A) on a finite list of twisted objects, with every matrix component of
 * every Hom space as a named basis arrow and the operations m_n^tw tabulated
 * up to the ambient arity bound.  Identities of the twisted category are
 * diagonal combinations, not basis arrows, so the category carries no
 * declared identities; the combinations live in identity_combo. */
struct TwCategory {
    ShiftClosure Z;
    std::vector<TwistedObject> objects;
    AInfCategory C;

    struct ArrowInfo {
        std::size_t src_obj = 0, src_slot = 0;
        std::size_t dst_obj = 0, dst_slot = 0;
        BasisId za = 0;
    };
    std::vector<ArrowInfo> arrows;              /* C basis id -> components */
    /* (src obj, dst obj, src slot, dst slot, ZA arrow) -> C basis id */
    std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, BasisId>, BasisId>
        lookup;
    std::vector<LinComb> identity_combo;        /* per object, in C basis */

    /* Conversions between C combinations supported on Hom(src, dst) and
     * matrices of ZA elements. */
    TwMorphism to_matrix(std::size_t src, std::size_t dst, const LinComb& v) const;
    LinComb to_combo(std::size_t src, std::size_t dst, const TwMorphism& f) const;
};

TwCategory tw_category(const ShiftClosure& Z, const std::vector<TwistedObject>& objects);

/******** Yoneda realization ********/

/* The module over the base category carried by a twisted object: one module
 * element per pair (slot i, base arrow g into the object of B_i), of degree
 * deg g - shift of B_i, with operations
 *   m_n = sum_{t >= 0} (-1)^{t(t-1)/2} m^ZA_{n+t} (delta^{x t} tensor 1^{x n}).
 * For delta = 0 this is the direct sum of the representable modules.  The
 * closure must contain every base object at shift 0. */
AInfModule yoneda_realize(const ShiftClosure& Z, const TwistedObject& T);

/******** The homotopy category in degree 0 ********/

/* H^0 of the twisted category on a finite object list: morphism sets are the
 * degree-0 homology classes of m_1^tw, composition is induced by m_2^tw
 * (well-definedness on classes is certified during construction), and
 * identity classes come from the strict identities. */
struct H0Category {
    Field field;
    std::size_t count = 0;

    struct PairData {
        /* degree-0 coordinate basis: (src slot, dst slot, ZA arrow) */
        std::vector<std::tuple<std::size_t, std::size_t, BasisId>> coords;
        std::vector<Vec> reps;          /* class representatives, coords basis */
        std::vector<Vec> boundary0;     /* degree-0 boundaries, coords basis */
        Matrix project;                 /* coords -> class coordinates */
        GradedSpace hom;                /* the full graded Hom space */
        GradedSpace homology;           /* its homology, all degrees */

        PairData(const Field& f) : project(f, 0, 0) {}
        std::size_t dim() const { return reps.size(); }
    };
    std::map<std::pair<std::size_t, std::size_t>, PairData> pairs;   /* (src, dst) */

    /* (i, j, k) -> table[a][b] = class coords in (i, k) of the composite of
     * class a in (j, k) after class b in (i, j). */
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<std::vector<Vec>>>
        table;
    std::vector<Vec> identity;          /* per object, class coords in (i, i) */

    std::size_t hom_dim(std::size_t i, std::size_t j) const;
    /* Bilinear composition of class coordinate vectors: late: j -> k after
     * early: i -> j. */
    Vec compose(std::size_t i, std::size_t j, std::size_t k, const Vec& late,
                const Vec& early) const;
};

H0Category h0_category(const ShiftClosure& Z, const std::vector<TwistedObject>& objects);
H0Category h0_category(const TwCategory& T);

/******** Isomorphism and indecomposability ********/

struct H0IsoIndec {
    bool isomorphic = false;
    bool x_indecomposable = false;
    bool y_indecomposable = false;
};

/* Exhaustive verdicts in H^0 over a finite field: x and y are isomorphic iff
 * some degree-0 class admits a two-sided inverse (f is enumerated, the
 * inverse is solved for linearly), and an object is indecomposable iff its
 * endomorphism ring has no idempotent besides 0 and 1 and the object is not
 * zero.  Searches over the rationals with positive-dimensional Hom spaces
 * are refused (unsupported field), as are searches beyond cap candidates. */
H0IsoIndec h0_iso_and_indec(const H0Category& H, std::size_t x, std::size_t y,
                            std::uint64_t cap = 1u << 20);

/******** Enumeration of filtered objects ********/

/* One isomorphism class of filtered twisted objects. */
struct FiltClass {
    TwistedObject rep;                  /* lexicographically least encoding */
    std::vector<int> mult;              /* multiplicities per allowed object */
    std::size_t size = 0;               /* enumerated objects in the class */
    bool indecomposable = false;
};

struct FiltInventory {
    std::vector<std::size_t> allowed;   /* the block order used */
    std::uint64_t candidates = 0;       /* delta assignments scanned */
    std::uint64_t mc_valid = 0;         /* objects passing Maurer-Cartan */
    std::vector<FiltClass> classes;
    std::size_t indecomposable_count = 0;
};

/* Enumerate the twisted objects whose sequence is a filtered sum of
 * unshifted copies of the allowed objects (multiplicity of allowed[k] at
 * most dims[k], blocks in list order) with every delta entry drawn from the
 * degree-1 Hom spaces over the ground field, filter by Maurer-Cartan,
 * classify up to isomorphism in H^0, and flag indecomposables.  The field
 * must be the finite ground field of A.  The search-space size is computed
 * first; beyond cap the enumeration refuses and reports it. */
FiltInventory filt_enumerate(const AInfCategory& A, const std::vector<std::size_t>& allowed,
                             const std::vector<int>& dims, const Field& field,
                             std::uint64_t cap = 200000);

}  // namespace ainf
