#include "checks.h"

#include <algorithm>
#include <set>

namespace ainf {

/******** Combinatorics ********/

std::vector<std::vector<std::size_t>> compositions(std::size_t n, std::size_t max_part)
{
    std::vector<std::vector<std::size_t>> acc;
    std::vector<std::size_t> cur;
    auto grow = [&](auto&& self, std::size_t left) -> void {
        if (left == 0) {
            acc.push_back(cur);
            return;
        }
        for (std::size_t part = 1; part <= std::min(left, max_part); ++part) {
            cur.push_back(part);
            self(self, left - part);
            cur.pop_back();
        }
    };
    grow(grow, n);
    return acc;
}

int morphism_rhs_sign(const std::vector<std::size_t>& parts)
{
    long s = 0;
    std::size_t r = parts.size();
    for (std::size_t j = 0; j + 1 < r; ++j)
        s += static_cast<long>(r - 1 - j) * static_cast<long>(parts[j] - 1);
    return s % 2 == 0 ? 1 : -1;
}

/******** Stasheff ********/

LinComb stasheff_defect(const AInfCategory& A, int n, const Word& w)
{
    LinComb defect;
    const Scalar one = Scalar::one(A.field);
    for (int r = 0; r < n; ++r)
        for (int s = 1; r + s <= n; ++s) {
            int t = n - r - s;
            int u = r + 1 + t;
            const MultiOp* ms = A.op(s);
            const MultiOp* mu = A.op(u);
            if (!ms || !mu)
                continue;
            Scalar sgn = ((r + s * t) % 2 == 0) ? one : -one;
            for (const auto& [w2, c] : block_apply(A, *ms, r, w))
                lin_add(defect, mu->apply(w2), c * sgn);
        }
    return defect;
}

CheckReport check_stasheff(const AInfCategory& A)
{
    CheckReport rep;
    int top = 2 * A.arity_bound - 1;
    for (int n = 1; n <= top; ++n)
        for (const Word& w : A.words(n)) {
            LinComb d = stasheff_defect(A, n, w);
            if (!d.empty())
                rep.defects.push_back({n, w, d});
        }
    return rep;
}

/******** Morphisms ********/

void validate_morphism(const AInfCategory& A, const AInfCategory& B, const AInfMorphism& f)
{
    if (f.object_map.size() != A.objects.size())
        throw input_error("morphism object map has wrong size");
    for (std::size_t o : f.object_map)
        if (o >= B.objects.size())
            throw input_error("morphism object map hits a missing object");
    for (const auto& [n, m] : f.comps) {
        if (m.is_zero())
            continue;
        if (n < 1 || m.arity != n || m.degree != 1 - n)
            throw input_error("morphism component f_" + std::to_string(n) +
                              " has wrong arity/degree");
        for (const auto& [w, out] : m.entries) {
            if (!A.composable(w))
                throw input_error("f_" + std::to_string(n) + " entry on non-composable word");
            int want = A.word_degree(w) + 1 - n;
            std::size_t ws = f.object_map[A.word_src(w)];
            std::size_t wd = f.object_map[A.word_dst(w)];
            for (const auto& [y, c] : out) {
                if (y >= B.basis.size())
                    throw input_error("f_" + std::to_string(n) + " output id out of range");
                const BasisElem& be = B.basis[y];
                if (be.degree != want || be.src != ws || be.dst != wd)
                    throw input_error("f_" + std::to_string(n) + " output \"" + be.name +
                                      "\" violates degree or Hom-pair bookkeeping");
            }
        }
    }
}

LinComb morphism_defect(const AInfCategory& A, const AInfCategory& B, const AInfMorphism& f,
                        int n, const Word& w)
{
    const Scalar one = Scalar::one(A.field);
    LinComb defect;

    /* LHS: sum over n = r+s+t of (-1)^{r+st} f_u (1^r (x) m_s (x) 1^t). */
    for (int r = 0; r < n; ++r)
        for (int s = 1; r + s <= n; ++s) {
            int t = n - r - s;
            int u = r + 1 + t;
            const MultiOp* ms = A.op(s);
            const MultiOp* fu = f.comp(u);
            if (!ms || !fu)
                continue;
            Scalar sgn = ((r + s * t) % 2 == 0) ? one : -one;
            for (const auto& [w2, c] : block_apply(A, *ms, r, w))
                lin_add(defect, fu->apply(w2), c * sgn);
        }

    /* RHS: sum over decompositions n = i_1 + ... + i_r of
     * (-1)^s m_r (f_{i_1} (x) ... (x) f_{i_r}). */
    for (const auto& parts : compositions(n, static_cast<std::size_t>(n))) {
        const MultiOp* mr = B.op(static_cast<int>(parts.size()));
        if (!mr)
            continue;
        std::vector<const MultiOp*> fs;
        bool missing = false;
        for (std::size_t p : parts) {
            const MultiOp* fp = f.comp(static_cast<int>(p));
            if (!fp) {
                missing = true;
                break;
            }
            fs.push_back(fp);
        }
        if (missing)
            continue;
        Scalar sgn = morphism_rhs_sign(parts) == 1 ? one : -one;
        for (const auto& [w2, c] : ops_apply(A, fs, parts, w))
            lin_add(defect, mr->apply(w2), -(c * sgn));
    }
    return defect;
}

CheckReport check_morphism(const AInfCategory& A, const AInfCategory& B, const AInfMorphism& f)
{
    validate_morphism(A, B, f);
    CheckReport rep;
    int top = A.arity_bound + B.arity_bound;
    for (int n = 1; n <= top; ++n)
        for (const Word& w : A.words(n)) {
            LinComb d = morphism_defect(A, B, f, n, w);
            if (!d.empty())
                rep.defects.push_back({n, w, d});
        }
    return rep;
}

/* One component of f o g (f: B -> C, g: A -> B) on words of length n. */
static MultiOp composite_component(const AInfCategory& A, const AInfCategory& B,
                                   const AInfCategory& C, const AInfMorphism& f,
                                   const AInfMorphism& g, int n)
{
    const Scalar one = Scalar::one(A.field);
    MultiOp out;
    out.arity = n;
    out.degree = 1 - n;
    for (const Word& w : A.words(n)) {
        LinComb val;
        for (const auto& parts : compositions(n, static_cast<std::size_t>(n))) {
            const MultiOp* fr = f.comp(static_cast<int>(parts.size()));
            if (!fr)
                continue;
            std::vector<const MultiOp*> gs;
            bool missing = false;
            for (std::size_t p : parts) {
                const MultiOp* gp = g.comp(static_cast<int>(p));
                if (!gp) {
                    missing = true;
                    break;
                }
                gs.push_back(gp);
            }
            if (missing)
                continue;
            Scalar sgn = morphism_rhs_sign(parts) == 1 ? one : -one;
            for (const auto& [w2, c] : ops_apply(A, gs, parts, w))
                lin_add(val, fr->apply(w2), c * sgn);
        }
        out.add(w, val);
    }
    return out;
}

AInfMorphism compose_morphisms(const AInfCategory& A, const AInfCategory& B,
                               const AInfCategory& C, const AInfMorphism& f,
                               const AInfMorphism& g)
{
    validate_morphism(B, C, f);
    validate_morphism(A, B, g);
    AInfMorphism fg;
    for (std::size_t o = 0; o < A.objects.size(); ++o)
        fg.object_map.push_back(f.object_map[g.object_map[o]]);
    fg.arity_bound = std::max(1, f.arity_bound * g.arity_bound);
    for (int n = 1; n <= fg.arity_bound; ++n) {
        MultiOp comp = composite_component(A, B, C, f, g, n);
        if (!comp.is_zero())
            fg.comps.emplace(n, std::move(comp));
    }
    return fg;
}

/******** Inversion of minimal morphisms ********/

MultiOp strict_inverse_component(const AInfCategory& A, const AInfCategory& B,
                                 const std::vector<std::size_t>& object_map,
                                 const MultiOp& f1)
{
    MultiOp g1;
    g1.arity = 1;
    g1.degree = 0;
    for (std::size_t s = 0; s < A.objects.size(); ++s)
        for (std::size_t d = 0; d < A.objects.size(); ++d) {
            PairBasis pa = pair_basis(A, s, d);
            PairBasis pb = pair_basis(B, object_map[s], object_map[d]);
            std::set<int> degrees;
            for (const auto& [q, names] : pa.space.by_degree)
                degrees.insert(q);
            for (const auto& [q, names] : pb.space.by_degree)
                degrees.insert(q);
            for (int q : degrees) {
                std::size_t na = pa.space.dim(q), nb = pb.space.dim(q);
                if (na != nb)
                    throw input_error("strict component not invertible: dims differ in degree " +
                                      std::to_string(q));
                if (na == 0)
                    continue;
                Matrix F(A.field, nb, na);
                for (std::size_t j = 0; j < pa.ids.size(); ++j) {
                    auto [qa, ja] = pa.locate.at(pa.ids[j]);
                    if (qa != q)
                        continue;
                    for (const auto& [y, c] : f1.apply(Word{pa.ids[j]})) {
                        auto [qb, ib] = pb.locate.at(y);
                        if (qb != q)
                            throw input_error("strict component is not degree 0");
                        F.at(ib, ja) = c;
                    }
                }
                if (F.rank() != na)
                    throw input_error("strict component is singular in degree " +
                                      std::to_string(q));
                Matrix G = F.inverse();
                /* Column ib of G expresses the inverse on the ib-th degree-q
                 * basis vector of the target pair. */
                std::vector<BasisId> a_ids(na), b_ids(nb);
                for (BasisId id : pa.ids)
                    if (pa.locate.at(id).first == q)
                        a_ids[pa.locate.at(id).second] = id;
                for (BasisId id : pb.ids)
                    if (pb.locate.at(id).first == q)
                        b_ids[pb.locate.at(id).second] = id;
                for (std::size_t ib = 0; ib < nb; ++ib)
                    for (std::size_t ja = 0; ja < na; ++ja)
                        g1.add(Word{b_ids[ib]}, a_ids[ja], G.at(ja, ib));
            }
        }
    return g1;
}

AInfMorphism invert_minimal_morphism(const AInfCategory& A, const AInfCategory& B,
                                     const AInfMorphism& f)
{
    validate_morphism(A, B, f);
    if (A.op(1) || B.op(1))
        throw input_error("invert_minimal_morphism requires minimal structures (m_1 = 0)");

    /* The object map must be a bijection. */
    if (A.objects.size() != B.objects.size())
        throw input_error("invert_minimal_morphism: object counts differ");
    std::vector<std::size_t> obj_inv(B.objects.size(), B.objects.size());
    for (std::size_t o = 0; o < f.object_map.size(); ++o) {
        if (obj_inv[f.object_map[o]] != B.objects.size())
            throw input_error("invert_minimal_morphism: object map is not injective");
        obj_inv[f.object_map[o]] = o;
    }

    const MultiOp* f1 = f.comp(1);
    if (!f1)
        throw input_error("invert_minimal_morphism: f_1 is zero");

    AInfMorphism g;
    g.object_map = obj_inv;
    g.arity_bound = f.arity_bound;
    g.comps.emplace(1, strict_inverse_component(A, B, f.object_map, *f1));
    const MultiOp& g1 = g.comps.at(1);

    /* Arity recursion: g_n = -(sum over r < n terms) o (f_1^{-1})^{(x)n}. */
    const Scalar one = Scalar::one(A.field);
    for (int n = 2; n <= f.arity_bound; ++n) {
        MultiOp gn;
        gn.arity = n;
        gn.degree = 1 - n;
        std::vector<const MultiOp*> inv(n, &g1);
        std::vector<std::size_t> ones(n, 1);
        for (const Word& u : B.words(static_cast<std::size_t>(n))) {
            LinComb val;
            for (const auto& [w, cw] : ops_apply(B, inv, ones, u)) {
                for (const auto& parts : compositions(n, static_cast<std::size_t>(n))) {
                    if (parts.size() == static_cast<std::size_t>(n))
                        continue; /* that's the g_n term itself */
                    const MultiOp* gr = g.comp(static_cast<int>(parts.size()));
                    if (!gr)
                        continue;
                    std::vector<const MultiOp*> fs;
                    bool missing = false;
                    for (std::size_t p : parts) {
                        const MultiOp* fp = f.comp(static_cast<int>(p));
                        if (!fp) {
                            missing = true;
                            break;
                        }
                        fs.push_back(fp);
                    }
                    if (missing)
                        continue;
                    Scalar sgn = morphism_rhs_sign(parts) == 1 ? one : -one;
                    for (const auto& [w2, c2] : ops_apply(A, fs, parts, w))
                        lin_add(val, gr->apply(w2), -(cw * c2 * sgn));
                }
            }
            gn.add(u, val);
        }
        if (!gn.is_zero())
            g.comps.emplace(n, std::move(gn));
    }

    /* Certify both composites up to the shared arity bound. */
    for (int n = 1; n <= f.arity_bound; ++n) {
        MultiOp gf = composite_component(A, B, A, g, f, n);
        MultiOp fg = composite_component(B, A, B, f, g, n);
        auto is_identity_comp = [&](const AInfCategory& X, const MultiOp& m) {
            if (n != 1)
                return m.is_zero();
            for (BasisId x = 0; x < X.basis.size(); ++x)
                if (m.apply(Word{x}) != LinComb{{x, Scalar::one(X.field)}})
                    return false;
            return true;
        };
        if (!is_identity_comp(A, gf) || !is_identity_comp(B, fg))
            throw internal_error("invert_minimal_morphism: certification failed at arity " +
                                 std::to_string(n));
    }
    return g;
}

/******** Strict units ********/

CheckReport check_units(const AInfCategory& A)
{
    CheckReport rep;
    if (A.identities.empty())
        return rep;
    const MultiOp* m2 = A.op(2);
    for (BasisId x = 0; x < A.basis.size(); ++x) {
        BasisId el = A.identities.at(A.basis[x].dst);
        BasisId er = A.identities.at(A.basis[x].src);
        LinComb want{{x, Scalar::one(A.field)}};
        LinComb left = m2 ? m2->apply(Word{el, x}) : LinComb{};
        LinComb right = m2 ? m2->apply(Word{x, er}) : LinComb{};
        if (left != want) {
            LinComb d = left;
            lin_add(d, x, -Scalar::one(A.field));
            rep.defects.push_back({2, Word{el, x}, d});
        }
        if (right != want) {
            LinComb d = right;
            lin_add(d, x, -Scalar::one(A.field));
            rep.defects.push_back({2, Word{x, er}, d});
        }
    }
    std::vector<bool> is_id(A.basis.size(), false);
    for (const auto& [obj, e] : A.identities)
        is_id[e] = true;
    for (const auto& [n, m] : A.ops) {
        if (n == 2)
            continue;
        for (const auto& [w, out] : m.entries)
            for (BasisId x : w)
                if (is_id[x] && !out.empty()) {
                    rep.defects.push_back({n, w, out});
                    break;
                }
    }
    return rep;
}

AInfCategory augment(const AInfCategory& B)
{
    AInfCategory A = B;
    A.arity_bound = std::max(A.arity_bound, 2);
    std::vector<BasisId> units;
    for (std::size_t o = 0; o < A.objects.size(); ++o) {
        BasisId e = A.add_basis("1_" + A.objects[o], 0, o, o);
        A.identities[o] = e;
        units.push_back(e);
    }
    MultiOp& m2 = A.op_mut(2);
    const Scalar one = Scalar::one(A.field);
    for (BasisId x = 0; x < B.basis.size(); ++x) {
        m2.add(Word{units[A.basis[x].dst], x}, x, one);
        m2.add(Word{x, units[A.basis[x].src]}, x, one);
    }
    for (BasisId e : units)
        m2.add(Word{e, e}, e, one);
    A.validate();
    return A;
}

AInfCategory reduce(const AInfCategory& A)
{
    if (!A.has_identities())
        throw input_error("reduce: no identities declared");
    std::vector<bool> is_id(A.basis.size(), false);
    for (const auto& [obj, e] : A.identities)
        is_id[e] = true;

    AInfCategory B;
    B.field = A.field;
    B.objects = A.objects;
    B.arity_bound = A.arity_bound;
    std::vector<std::size_t> remap(A.basis.size(), A.basis.size());
    for (BasisId x = 0; x < A.basis.size(); ++x) {
        if (is_id[x])
            continue;
        remap[x] = B.add_basis(A.basis[x].name, A.basis[x].degree, A.basis[x].src, A.basis[x].dst);
    }
    for (const auto& [n, m] : A.ops) {
        for (const auto& [w, out] : m.entries) {
            bool unit_word = false;
            for (BasisId x : w)
                if (is_id[x])
                    unit_word = true;
            if (unit_word)
                continue;  /* the strict-unit entries disappear */
            Word w2;
            for (BasisId x : w)
                w2.push_back(remap[x]);
            for (const auto& [y, c] : out) {
                if (is_id[y])
                    throw input_error("reduce: operation output touches an identity; "
                                      "structure is not augmented over its identities");
                B.op_mut(n).add(w2, remap[y], c);
            }
        }
    }
    B.validate();
    return B;
}

/******** Hochschild bridge ********/

std::pair<bool, bool> hochschild_deformation_check(const AInfCategory& B, const MultiOp& c)
{
    for (const auto& b : B.basis)
        if (b.degree != 0)
            throw input_error("hochschild_deformation_check: structure must sit in degree 0");
    if (!check_stasheff(B).pass())
        throw input_error("hochschild_deformation_check: base structure is not associative");
    int n = c.arity;
    if (n < 2)
        throw input_error("hochschild_deformation_check: cochain arity must be >= 2");
    if (c.degree != 0)
        throw input_error("hochschild_deformation_check: cochain must have degree 0");
    for (const auto& [w, out] : c.entries) {
        if (!B.composable(w))
            throw input_error("hochschild_deformation_check: cochain entry on non-composable word");
        for (const auto& [y, cf] : out)
            if (B.basis[y].src != B.word_src(w) || B.basis[y].dst != B.word_dst(w) ||
                B.basis[y].degree != 0)
                throw input_error("hochschild_deformation_check: cochain output misplaced");
    }

    /* Deformed structure on B (+) eps*B with eps^2 = 0 and |eps| = 2-n. */
    AInfCategory D;
    D.field = B.field;
    D.objects = B.objects;
    D.arity_bound = std::max(2, n);
    const std::size_t K = B.basis.size();
    for (const auto& b : B.basis)
        D.add_basis(b.name, 0, b.src, b.dst);
    for (const auto& b : B.basis)
        D.add_basis("eps*" + b.name, 2 - n, b.src, b.dst);

    const MultiOp* m2 = B.op(2);
    MultiOp& d2 = D.op_mut(2);
    if (m2)
        for (const auto& [w, out] : m2->entries) {
            d2.add(w, out);                              /* plain * plain */
            for (const auto& [y, cf] : out) {
                d2.add(Word{w[0] + K, w[1]}, y + K, cf); /* eps-linear, left */
                d2.add(Word{w[0], w[1] + K}, y + K, cf); /* eps-linear, right */
            }
        }
    MultiOp& dn = D.op_mut(n);
    for (const auto& [w, out] : c.entries)
        for (const auto& [y, cf] : out)
            dn.add(w, y + K, cf);  /* plain word -> eps * c(word) */
    D.validate();

    bool ainf_ok = check_stasheff(D).pass();

    /* Oracle: the standard Hochschild differential.
     * (delta c)(a_0,...,a_n) = a_0 c(a_1..a_n)
     *   + sum_{k} (-1)^{k+1} c(a_0,..,a_k a_{k+1},..,a_n)
     *   + (-1)^{n+1} c(a_0,..,a_{n-1}) a_n. */
    auto mul_lc = [&](const LinComb& x, const LinComb& y) {
        LinComb out;
        if (!m2)
            return out;
        for (const auto& [a, ca] : x)
            for (const auto& [b, cb] : y)
                lin_add(out, m2->apply(Word{a, b}), ca * cb);
        return out;
    };
    bool cocycle = true;
    const Scalar one = Scalar::one(B.field);
    for (const Word& w : B.words(static_cast<std::size_t>(n) + 1)) {
        LinComb acc;
        Word tail(w.begin() + 1, w.end());
        lin_add(acc, mul_lc(LinComb{{w[0], one}}, c.apply(tail)), one);
        for (int k = 0; k < n; ++k) {
            LinComb prod = m2 ? m2->apply(Word{w[k], w[k + 1]}) : LinComb{};
            Scalar sgn = (k % 2 == 0) ? -one : one; /* (-1)^{k+1} */
            for (const auto& [y, cf] : prod) {
                Word arg;
                arg.insert(arg.end(), w.begin(), w.begin() + k);
                arg.push_back(y);
                arg.insert(arg.end(), w.begin() + k + 2, w.end());
                lin_add(acc, c.apply(arg), cf * sgn);
            }
        }
        Word head(w.begin(), w.end() - 1);
        Scalar sgn = (n % 2 == 0) ? -one : one; /* (-1)^{n+1} */
        lin_add(acc, mul_lc(c.apply(head), LinComb{{w.back(), one}}), sgn);
        if (!acc.empty()) {
            cocycle = false;
            break;
        }
    }

    return {ainf_ok, cocycle};
}

}  // namespace ainf
