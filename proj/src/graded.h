#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "matrix.h"

namespace ainf {

/******** Graded spaces ********/

/* Finite-dimensional Z-graded vector space with named basis vectors.
 * Names are unique across all degrees. */
struct GradedSpace {
    std::map<int, std::vector<std::string>> by_degree;

    std::size_t dim(int q) const
    {
        auto it = by_degree.find(q);
        return it == by_degree.end() ? 0 : it->second.size();
    }
    std::size_t total_dim() const;
    bool is_zero() const { return total_dim() == 0; }

    /* Degree and index of a named basis vector; throws input_error if absent. */
    std::pair<int, std::size_t> find(const std::string& name) const;

    void add(int degree, const std::string& name);  /* throws on duplicate name */

    bool operator==(const GradedSpace& o) const { return by_degree == o.by_degree; }
    bool operator!=(const GradedSpace& o) const { return !(*this == o); }
};

/* Shifted space: (S^k V)^p = V^{p+k}. */
GradedSpace suspend(const GradedSpace& v, int k);

/******** Graded maps ********/

/* Homogeneous linear map of fixed integer degree between graded spaces.
 * blocks[q] sends the degree-q basis of src to degree q+degree of dst;
 * omitted blocks are zero. */
struct GradedMap {
    Field field;
    GradedSpace src, dst;
    int degree = 0;
    std::map<int, Matrix> blocks;

    static GradedMap zero(const Field& f, GradedSpace src, GradedSpace dst, int degree);
    static GradedMap identity(const Field& f, const GradedSpace& v);

    /* Block for source degree q (a zero matrix if not stored). */
    Matrix block(int q) const;
    void set_block(int q, Matrix m);  /* validates the shape */

    GradedMap compose(const GradedMap& g) const;  /* this after g */
    GradedMap operator+(const GradedMap& o) const;
    GradedMap operator-(const GradedMap& o) const;
    GradedMap scaled(const Scalar& c) const;
    bool is_zero() const;
    bool operator==(const GradedMap& o) const;
};

/* Shifted map: same data between shifted spaces (no sign; sign conventions
 * for suspensions of structures live with those structures). */
GradedMap suspend(const GradedMap& f, int k);

/******** Koszul evaluation ********/

/* Homogeneous element of a graded space: coordinates in one degree. */
struct GSElem {
    int degree = 0;
    Vec coords;

    static GSElem basis(const Field& f, const GradedSpace& v, int degree, std::size_t index);
};

/* A pure tensor of basis vectors, one (degree, index) per factor. */
using PureTensor = std::vector<std::pair<int, std::size_t>>;
using TensorComb = std::map<PureTensor, Scalar>;

/* Evaluate (f_1 tensor ... tensor f_k) on x_1 tensor ... tensor x_k with the
 * Koszul rule: the sign picked up is (-1)^{sum over i<j of deg f_j * deg x_i}.
 * Factor i of the word must be an element of f_i's source. */
TensorComb koszul_apply(const std::vector<GradedMap>& fs, const std::vector<GSElem>& word);

/******** Homology of a complex ********/

/* Homology of (V, d) with d of degree +1, plus a full splitting:
 *   - i : H -> V picks representatives, p : V -> H projects, p i = 1;
 *   - h : V -> V of degree -1 with 1 - i p = d h + h d and
 *     h i = 0, p h = 0, h h = 0.
 * Representatives are deterministic: per degree the candidate list is
 * [boundaries | preferred cycles | kernel basis] and the earliest
 * row-reduction pivots win. */
struct Homology {
    GradedSpace H;
    GradedMap i, p, h;
    std::map<int, std::vector<Vec>> cycles;      /* basis of Z^q in V^q coords */
    std::map<int, std::vector<Vec>> boundaries;  /* basis of B^q */
};

/* preferred: per degree, named cycles to try first as representatives (each
 * must be a cycle; throws input_error otherwise). */
Homology complex_homology(
    const GradedMap& d,
    const std::map<int, std::vector<std::pair<std::string, Vec>>>& preferred = {});

}  // namespace ainf
