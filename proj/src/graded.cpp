#include "graded.h"

#include <algorithm>

namespace ainf {

/******** GradedSpace ********/

std::size_t GradedSpace::total_dim() const
{
    std::size_t n = 0;
    for (const auto& [q, names] : by_degree)
        n += names.size();
    return n;
}

std::pair<int, std::size_t> GradedSpace::find(const std::string& name) const
{
    for (const auto& [q, names] : by_degree)
        for (std::size_t k = 0; k < names.size(); ++k)
            if (names[k] == name)
                return {q, k};
    throw input_error("basis vector \"" + name + "\" not found");
}

void GradedSpace::add(int degree, const std::string& name)
{
    for (const auto& [q, names] : by_degree)
        for (const auto& n : names)
            if (n == name)
                throw input_error("duplicate basis name \"" + name + "\"");
    by_degree[degree].push_back(name);
}

GradedSpace suspend(const GradedSpace& v, int k)
{
    GradedSpace s;
    for (const auto& [q, names] : v.by_degree)
        if (!names.empty())
            s.by_degree[q - k] = names;
    return s;
}

/******** GradedMap ********/

GradedMap GradedMap::zero(const Field& f, GradedSpace src, GradedSpace dst, int degree)
{
    GradedMap m;
    m.field = f;
    m.src = std::move(src);
    m.dst = std::move(dst);
    m.degree = degree;
    return m;
}

GradedMap GradedMap::identity(const Field& f, const GradedSpace& v)
{
    GradedMap m = zero(f, v, v, 0);
    for (const auto& [q, names] : v.by_degree)
        if (!names.empty())
            m.blocks.emplace(q, Matrix::identity(f, names.size()));
    return m;
}

Matrix GradedMap::block(int q) const
{
    auto it = blocks.find(q);
    if (it != blocks.end())
        return it->second;
    return Matrix(field, dst.dim(q + degree), src.dim(q));
}

void GradedMap::set_block(int q, Matrix m)
{
    if (m.rows() != dst.dim(q + degree) || m.cols() != src.dim(q))
        throw internal_error("set_block: shape mismatch at degree " + std::to_string(q));
    if (m.is_zero())
        blocks.erase(q);
    else
        blocks.insert_or_assign(q, std::move(m));
}

GradedMap GradedMap::compose(const GradedMap& g) const
{
    if (g.dst != src)
        throw internal_error("GradedMap::compose: middle space mismatch");
    GradedMap out = zero(field, g.src, dst, degree + g.degree);
    for (const auto& [q, gb] : g.blocks) {
        Matrix fb = block(q + g.degree);
        if (fb.rows() == 0 || fb.cols() == 0)
            continue;
        Matrix prod = fb * gb;
        if (!prod.is_zero())
            out.blocks.emplace(q, std::move(prod));
    }
    return out;
}

GradedMap GradedMap::operator+(const GradedMap& o) const
{
    if (src != o.src || dst != o.dst || degree != o.degree)
        throw internal_error("GradedMap addition: shape mismatch");
    GradedMap out = zero(field, src, dst, degree);
    std::vector<int> qs;
    for (const auto& [q, b] : blocks)
        qs.push_back(q);
    for (const auto& [q, b] : o.blocks)
        if (!blocks.count(q))
            qs.push_back(q);
    std::sort(qs.begin(), qs.end());
    for (int q : qs) {
        Matrix sum = block(q) + o.block(q);
        if (!sum.is_zero())
            out.blocks.emplace(q, std::move(sum));
    }
    return out;
}

GradedMap GradedMap::operator-(const GradedMap& o) const
{
    return *this + o.scaled(-Scalar::one(field));
}

GradedMap GradedMap::scaled(const Scalar& c) const
{
    GradedMap out = zero(field, src, dst, degree);
    if (c.is_zero())
        return out;
    for (const auto& [q, b] : blocks)
        out.blocks.emplace(q, b.scaled(c));
    return out;
}

bool GradedMap::is_zero() const
{
    for (const auto& [q, b] : blocks)
        if (!b.is_zero())
            return false;
    return true;
}

bool GradedMap::operator==(const GradedMap& o) const
{
    if (src != o.src || dst != o.dst || degree != o.degree)
        return false;
    return (*this - o).is_zero();
}

GradedMap suspend(const GradedMap& f, int k)
{
    GradedMap out = GradedMap::zero(f.field, suspend(f.src, k), suspend(f.dst, k), f.degree);
    for (const auto& [q, b] : f.blocks)
        out.blocks.emplace(q - k, b);
    return out;
}

/******** Koszul evaluation ********/

GSElem GSElem::basis(const Field& f, const GradedSpace& v, int degree, std::size_t index)
{
    GSElem e;
    e.degree = degree;
    e.coords = Vec(v.dim(degree), Scalar::zero(f));
    if (index >= e.coords.size())
        throw internal_error("GSElem::basis: index out of range");
    e.coords[index] = Scalar::one(f);
    return e;
}

TensorComb koszul_apply(const std::vector<GradedMap>& fs, const std::vector<GSElem>& word)
{
    if (fs.empty() || fs.size() != word.size())
        throw input_error("koszul_apply: arity mismatch between maps and word");
    const Field f = fs[0].field;

    /* Koszul sign: each f_j moves past every x_i with i < j. */
    long exponent = 0;
    for (std::size_t j = 1; j < fs.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            exponent += static_cast<long>(fs[j].degree) * word[i].degree;
    Scalar sign = (exponent % 2 == 0) ? Scalar::one(f) : -Scalar::one(f);

    /* Per-factor images. */
    std::vector<Vec> images;
    std::vector<int> out_degrees;
    for (std::size_t k = 0; k < fs.size(); ++k) {
        if (word[k].coords.size() != fs[k].src.dim(word[k].degree))
            throw input_error("koszul_apply: factor " + std::to_string(k) +
                              " does not live in the source of its map");
        images.push_back(fs[k].block(word[k].degree).apply(word[k].coords));
        out_degrees.push_back(word[k].degree + fs[k].degree);
    }

    /* Distribute: sum over choices of one basis vector per factor. */
    TensorComb out;
    PureTensor key(fs.size(), {0, 0});
    std::vector<std::size_t> idx(fs.size(), 0);
    auto expand = [&](auto&& self, std::size_t k, const Scalar& coeff) -> void {
        if (coeff.is_zero())
            return;
        if (k == fs.size()) {
            auto [it, fresh] = out.emplace(key, coeff);
            if (!fresh) {
                it->second += coeff;
                if (it->second.is_zero())
                    out.erase(it);
            }
            return;
        }
        for (std::size_t b = 0; b < images[k].size(); ++b) {
            if (images[k][b].is_zero())
                continue;
            key[k] = {out_degrees[k], b};
            self(self, k + 1, coeff * images[k][b]);
        }
    };
    expand(expand, 0, sign);
    return out;
}

/******** Homology ********/

Homology complex_homology(
    const GradedMap& d,
    const std::map<int, std::vector<std::pair<std::string, Vec>>>& preferred)
{
    if (d.src != d.dst)
        throw input_error("complex_homology: differential must be an endomorphism");
    if (d.degree != 1)
        throw input_error("complex_homology: differential must have degree +1");
    const Field f = d.field;
    const GradedSpace& V = d.src;

    /* d^2 = 0, reported at the first failing degree. */
    for (const auto& [q, names] : V.by_degree) {
        Matrix dd = d.block(q + 1) * d.block(q);
        if (!dd.is_zero())
            throw input_error("complex_homology: d*d is nonzero on degree " + std::to_string(q));
    }

    Homology out;
    out.i = GradedMap::zero(f, {}, V, 0);
    out.p = GradedMap::zero(f, V, {}, 0);
    out.h = GradedMap::zero(f, V, V, -1);

    for (const auto& [q, names] : V.by_degree) {
        std::size_t n = names.size();
        if (n == 0)
            continue;

        Matrix dq = d.block(q);            /* V^q -> V^{q+1} */
        Matrix dprev = d.block(q - 1);     /* V^{q-1} -> V^q */

        /* Boundaries: earliest independent columns of d_{q-1}; remember the
         * pivot columns, whose basis vectors give the homotopy's preimages. */
        std::vector<std::size_t> bpivots = dprev.rref().pivots;
        std::vector<Vec> bbasis;
        for (std::size_t pcol : bpivots)
            bbasis.push_back(dprev.col(pcol));

        /* Cycles. */
        std::vector<Vec> zbasis = dq.kernel_basis();

        out.boundaries[q] = bbasis;
        out.cycles[q] = zbasis;

        /* Candidate representatives: preferred cycles first, then the kernel
         * basis; earliest pivots past the boundary block are the chosen ones. */
        std::vector<Vec> cand;
        std::vector<std::string> cand_names;
        if (auto it = preferred.find(q); it != preferred.end()) {
            for (const auto& [nm, v] : it->second) {
                if (v.size() != n)
                    throw input_error("complex_homology: preferred cycle \"" + nm +
                                      "\" has wrong dimension");
                for (const Scalar& x : dq.apply(v))
                    if (!x.is_zero())
                        throw input_error("complex_homology: preferred vector \"" + nm +
                                          "\" is not a cycle");
                cand.push_back(v);
                cand_names.push_back(nm);
            }
        }
        for (std::size_t k = 0; k < zbasis.size(); ++k) {
            cand.push_back(zbasis[k]);
            cand_names.push_back("h" + std::to_string(q) + "_" + std::to_string(k));
        }

        Matrix bmat = Matrix::from_cols(f, n, bbasis);
        Matrix cmat = Matrix::from_cols(f, n, cand);
        std::vector<std::size_t> pivots = bmat.hstack(cmat).rref().pivots;

        std::vector<Vec> reps;
        std::vector<std::string> rep_names;
        for (std::size_t pcol : pivots) {
            if (pcol < bbasis.size())
                continue;
            reps.push_back(cand[pcol - bbasis.size()]);
            rep_names.push_back(cand_names[pcol - bbasis.size()]);
        }
        for (const auto& nm : rep_names)
            out.H.add(q, nm);

        /* Complement C: pivot columns of d_q map isomorphically onto the
         * boundary basis one degree up. */
        std::vector<std::size_t> cpivots = dq.rref().pivots;

        if (bbasis.size() + reps.size() + cpivots.size() != n)
            throw internal_error("complex_homology: splitting dimensions disagree");

        /* T = [B | R | C] is a basis of V^q. */
        Matrix T(f, n, n);
        std::size_t colk = 0;
        for (const auto& v : bbasis)
            T.set_col(colk++, v);
        for (const auto& v : reps)
            T.set_col(colk++, v);
        for (std::size_t pcol : cpivots) {
            Vec e(n, Scalar::zero(f));
            e[pcol] = Scalar::one(f);
            T.set_col(colk++, e);
        }
        Matrix Tinv = T.inverse();

        /* i: representative columns. */
        if (!reps.empty())
            out.i.blocks.emplace(q, Matrix::from_cols(f, n, reps));

        /* p: the R-rows of T^{-1}. */
        if (!reps.empty()) {
            Matrix pb(f, reps.size(), n);
            for (std::size_t r = 0; r < reps.size(); ++r)
                for (std::size_t j = 0; j < n; ++j)
                    pb.at(r, j) = Tinv.at(bbasis.size() + r, j);
            if (!pb.is_zero())
                out.p.blocks.emplace(q, pb);
        }

        /* h: send the j-th boundary basis vector to the basis vector of its
         * pivot column in d_{q-1}; zero on R and C. */
        if (!bbasis.empty()) {
            std::size_t m = V.dim(q - 1);
            Matrix pre(f, m, bbasis.size());
            for (std::size_t j = 0; j < bpivots.size(); ++j)
                pre.at(bpivots[j], j) = Scalar::one(f);
            Matrix brows(f, bbasis.size(), n);
            for (std::size_t r = 0; r < bbasis.size(); ++r)
                for (std::size_t j = 0; j < n; ++j)
                    brows.at(r, j) = Tinv.at(r, j);
            Matrix hb = pre * brows;
            if (!hb.is_zero())
                out.h.blocks.emplace(q, std::move(hb));
        }
    }

    out.i.src = out.H;
    out.p.dst = out.H;
    return out;
}

}  // namespace ainf
