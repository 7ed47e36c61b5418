#include "transfer.h"

#include <functional>
#include <set>

namespace ainf {

/******** Pair-complex plumbing ********/

static std::map<std::pair<int, std::size_t>, BasisId> index_of(const PairBasis& pb)
{
    std::map<std::pair<int, std::size_t>, BasisId> at;
    for (BasisId id : pb.ids)
        at.emplace(pb.locate.at(id), id);
    return at;
}

GradedMap pair_differential(const AInfCategory& A, const PairBasis& pb)
{
    GradedMap d = GradedMap::zero(A.field, pb.space, pb.space, 1);
    const MultiOp* m1 = A.op(1);
    if (!m1)
        return d;
    std::map<int, Matrix> blocks;
    for (BasisId id : pb.ids) {
        LinComb out = m1->apply({id});
        if (out.empty())
            continue;
        auto [q, j] = pb.locate.at(id);
        auto it = blocks.find(q);
        if (it == blocks.end())
            it = blocks.emplace(q, Matrix(A.field, pb.space.dim(q + 1), pb.space.dim(q))).first;
        for (const auto& [y, c] : out) {
            auto [qy, jy] = pb.locate.at(y);
            it->second.at(jy, j) = c;
        }
    }
    for (auto& [q, blk] : blocks)
        d.set_block(q, std::move(blk));
    return d;
}

/******** Contractions ********/

Contraction build_contraction(const AInfCategory& A, const PreferredReps& preferred)
{
    Contraction c;
    c.H.field = A.field;
    c.H.objects = A.objects;
    c.H.arity_bound = 2;
    c.i.degree = 0;
    c.p.degree = 0;
    c.h.degree = -1;
    const Scalar one = Scalar::one(A.field);
    std::set<std::string> used;

    for (std::size_t src = 0; src < A.objects.size(); ++src)
        for (std::size_t dst = 0; dst < A.objects.size(); ++dst) {
            PairBasis pb = pair_basis(A, src, dst);
            if (pb.space.is_zero())
                continue;
            auto at = index_of(pb);
            GradedMap d = pair_differential(A, pb);

            std::map<int, std::vector<std::pair<std::string, Vec>>> prefs;
            if (src == dst && A.has_identities()) {
                BasisId e = A.identities.at(src);
                auto [q, idx] = pb.locate.at(e);
                Vec v(pb.space.dim(q), Scalar::zero(A.field));
                v[idx] = one;
                prefs[q].push_back({A.basis[e].name, v});
            }
            if (auto it = preferred.find({src, dst}); it != preferred.end())
                for (const auto& [q, list] : it->second)
                    for (const auto& pr : list)
                        prefs[q].push_back(pr);

            Homology hom = complex_homology(d, prefs);

            std::map<int, std::vector<BasisId>> hids;
            for (const auto& [q, names] : hom.H.by_degree) {
                Matrix bi = hom.i.block(q);
                for (std::size_t j = 0; j < names.size(); ++j) {
                    LinComb rep;
                    for (std::size_t r = 0; r < bi.rows(); ++r)
                        if (!bi.at(r, j).is_zero())
                            lin_add(rep, at.at({q, r}), bi.at(r, j));
                    std::string nm;
                    if (rep.size() == 1 && rep.begin()->second == one)
                        nm = A.basis[rep.begin()->first].name;
                    else
                        nm = names[j] + "(" + A.objects[src] + ">" + A.objects[dst] + ")";
                    while (used.count(nm))
                        nm += "'";
                    used.insert(nm);
                    BasisId hid = c.H.add_basis(nm, q, src, dst);
                    hids[q].push_back(hid);
                    c.i.cols[hid] = rep;
                    if (src == dst && A.has_identities() && rep.size() == 1 &&
                        rep.begin()->first == A.identities.at(src) && rep.begin()->second == one)
                        c.H.identities[src] = hid;
                }
            }

            for (BasisId id : pb.ids) {
                auto [q, idx] = pb.locate.at(id);
                Matrix bp = hom.p.block(q);
                LinComb pout;
                for (std::size_t r = 0; r < bp.rows(); ++r)
                    if (!bp.at(r, idx).is_zero())
                        lin_add(pout, hids.at(q)[r], bp.at(r, idx));
                if (!pout.empty())
                    c.p.cols[id] = pout;
                Matrix bh = hom.h.block(q);
                LinComb hout;
                for (std::size_t r = 0; r < bh.rows(); ++r)
                    if (!bh.at(r, idx).is_zero())
                        lin_add(hout, at.at({q - 1, r}), bh.at(r, idx));
                if (!hout.empty())
                    c.h.cols[id] = hout;
            }
        }

    validate_contraction(A, c);
    return c;
}

void validate_contraction(const AInfCategory& A, const Contraction& c)
{
    if (c.H.objects != A.objects)
        throw input_error("contraction: object lists differ");
    if (c.i.degree != 0 || c.p.degree != 0 || c.h.degree != -1)
        throw input_error("contraction: maps must have degrees 0, 0, -1");
    const MultiOp* m1 = A.op(1);
    auto d_of = [&](const LinComb& v) {
        LinComb out;
        if (m1)
            for (const auto& [x, cx] : v)
                lin_add(out, m1->apply({x}), cx);
        return out;
    };
    const Scalar one = Scalar::one(A.field);

    for (BasisId x = 0; x < c.H.basis.size(); ++x) {
        LinComb ix = c.i.apply(x);
        for (const auto& [y, cy] : ix)
            if (A.basis[y].degree != c.H.basis[x].degree || A.basis[y].src != c.H.basis[x].src ||
                A.basis[y].dst != c.H.basis[x].dst)
                throw input_error("contraction: i does not preserve degree and Hom pair at " +
                                  c.H.basis[x].name);
        if (c.p.apply(ix) != LinComb{{x, one}})
            throw input_error("contraction: p i != 1 at class " + c.H.basis[x].name);
        if (!c.h.apply(ix).empty())
            throw input_error("contraction: h i != 0 at class " + c.H.basis[x].name);
        if (!d_of(ix).empty())
            throw input_error("contraction: representative of " + c.H.basis[x].name +
                              " is not a cycle");
    }

    for (BasisId v = 0; v < A.basis.size(); ++v) {
        LinComb lhs{{v, one}};
        for (const auto& [y, cy] : c.i.apply(c.p.apply(v)))
            lin_add(lhs, y, -cy);
        LinComb hv = c.h.apply(v);
        LinComb rhs = d_of(hv);
        lin_add(rhs, c.h.apply(d_of(LinComb{{v, one}})), one);
        if (lhs != rhs)
            throw input_error("contraction: 1 - i p != m_1 h + h m_1 at " + A.basis[v].name);
        if (!c.p.apply(hv).empty())
            throw input_error("contraction: p h != 0 at " + A.basis[v].name);
        if (!c.h.apply(hv).empty())
            throw input_error("contraction: h h != 0 at " + A.basis[v].name);
    }
}

/******** Homology algebra and quasi-isomorphisms ********/

AInfCategory homology_algebra(const AInfCategory& A)
{
    if (!check_stasheff(A).pass())
        throw input_error("homology_algebra: input fails the structure identities");
    Contraction c = build_contraction(A);
    AInfCategory H = std::move(c.H);
    if (const MultiOp* m2 = A.op(2)) {
        MultiOp prod;
        prod.arity = 2;
        prod.degree = 0;
        for (const Word& w : H.words(2)) {
            LinComb out;
            for (const auto& [a, ca] : c.i.apply(w[0]))
                for (const auto& [b, cb] : c.i.apply(w[1]))
                    lin_add(out, m2->apply({a, b}), ca * cb);
            prod.add(w, c.p.apply(out));
        }
        if (!prod.is_zero())
            H.ops.emplace(2, std::move(prod));
    }
    H.arity_bound = 2;
    H.validate();
    if (!check_stasheff(H).pass())
        throw internal_error("homology_algebra: induced product is not associative");
    return H;
}

InducedHomology is_quasi_iso(const AInfCategory& A, const AInfCategory& B, const AInfMorphism& f)
{
    validate_morphism(A, B, f);
    InducedHomology out;
    out.quasi_iso = true;
    const MultiOp* f1 = f.comp(1);

    for (std::size_t src = 0; src < A.objects.size(); ++src)
        for (std::size_t dst = 0; dst < A.objects.size(); ++dst) {
            PairBasis pa = pair_basis(A, src, dst);
            PairBasis pb = pair_basis(B, f.object_map[src], f.object_map[dst]);
            if (pa.space.is_zero() && pb.space.is_zero())
                continue;
            Homology ha = complex_homology(pair_differential(A, pa));
            Homology hb = complex_homology(pair_differential(B, pb));

            GradedMap F = GradedMap::zero(A.field, pa.space, pb.space, 0);
            if (f1) {
                auto ata = index_of(pa);
                std::map<int, Matrix> blocks;
                for (BasisId id : pa.ids) {
                    LinComb im = f1->apply({id});
                    if (im.empty())
                        continue;
                    auto [q, j] = pa.locate.at(id);
                    auto it = blocks.find(q);
                    if (it == blocks.end())
                        it = blocks.emplace(q, Matrix(A.field, pb.space.dim(q), pa.space.dim(q)))
                                 .first;
                    for (const auto& [y, cy] : im) {
                        auto [qy, jy] = pb.locate.at(y);
                        it->second.at(jy, j) = cy;
                    }
                }
                for (auto& [q, blk] : blocks)
                    F.set_block(q, std::move(blk));
            }

            GradedMap ind = hb.p.compose(F).compose(ha.i);
            std::set<int> degs;
            for (const auto& [q, v] : ha.H.by_degree)
                degs.insert(q);
            for (const auto& [q, v] : hb.H.by_degree)
                degs.insert(q);
            for (int q : degs) {
                std::size_t da = ha.H.dim(q), db = hb.H.dim(q);
                if (da != db || (da > 0 && ind.block(q).rank() != da)) {
                    out.quasi_iso = false;
                    break;
                }
            }
            out.induced.emplace(std::make_pair(src, dst), std::move(ind));
        }
    return out;
}

/******** Obstructions and minimal models ********/

MultiOp obstruction_cocycle(const AInfCategory& A, const AInfCategory& B,
                            const AInfMorphism& partial, int s)
{
    if (s < 1)
        throw input_error("obstruction_cocycle: the partial family must reach arity 1");
    validate_morphism(A, B, partial);
    for (const auto& [k, comp] : partial.comps)
        if (k > s && !comp.is_zero())
            throw input_error("obstruction_cocycle: component beyond arity " + std::to_string(s));
    for (int n = 1; n <= s; ++n)
        for (const Word& w : A.words(static_cast<std::size_t>(n)))
            if (!morphism_defect(A, B, partial, n, w).empty())
                throw input_error("obstruction_cocycle: partial family fails the identity at arity " +
                                  std::to_string(n));

    MultiOp c;
    c.arity = s + 1;
    c.degree = 1 - s;
    for (const Word& w : A.words(static_cast<std::size_t>(s + 1)))
        c.add(w, morphism_defect(A, B, partial, s + 1, w));

    /* d(c) = m_1 c - (-1)^{|c|} c d_tensor must vanish. */
    const MultiOp* m1B = B.op(1);
    const MultiOp* m1A = A.op(1);
    const Scalar one = Scalar::one(A.field);
    const Scalar csgn = (c.degree % 2 == 0) ? -one : one;
    for (const Word& w : A.words(static_cast<std::size_t>(s + 1))) {
        LinComb dc;
        if (m1B)
            for (const auto& [y, cy] : c.apply(w))
                lin_add(dc, m1B->apply({y}), cy);
        if (m1A)
            for (std::size_t r = 0; r < w.size(); ++r)
                for (const auto& [w2, cw] : block_apply(A, *m1A, r, w))
                    lin_add(dc, c.apply(w2), cw * csgn);
        if (!dc.empty())
            throw internal_error("obstruction_cocycle: obstruction is not a cycle at arity " +
                                 std::to_string(s + 1));
    }
    return c;
}

/* Longest composable word, or cap when the composability graph has a cycle
 * (identities always create one). */
static int longest_chain(const AInfCategory& A, int cap)
{
    std::size_t K = A.basis.size();
    std::vector<int> memo(K, 0), state(K, 0);
    std::function<int(BasisId)> go = [&](BasisId x) -> int {
        if (state[x] == 1)
            return -1;
        if (state[x] == 2)
            return memo[x];
        state[x] = 1;
        int best = 1;
        for (BasisId y = 0; y < K; ++y)
            if (A.basis[x].src == A.basis[y].dst) {
                int r = go(y);
                if (r < 0)
                    return -1;
                best = std::max(best, 1 + r);
                if (best > cap)
                    return -1;
            }
        state[x] = 2;
        memo[x] = best;
        return best;
    };
    int L = 0;
    for (BasisId x = 0; x < K; ++x) {
        int r = go(x);
        if (r < 0)
            return cap;
        L = std::max(L, r);
    }
    return L;
}

int default_arity_target(const AInfCategory& H)
{
    int D = 0;
    for (const BasisElem& b : H.basis)
        D = std::max(D, b.degree);
    int n = std::max(2, D + 2);
    int L = longest_chain(H, n);
    return std::max(2, std::min(n, L));
}

TransferResult transfer_minimal_model(const AInfCategory& A, const Contraction& c,
                                      int arity_target)
{
    if (!check_stasheff(A).pass())
        throw input_error("transfer: ambient structure fails its identities");
    validate_contraction(A, c);

    TransferResult R;
    int N = arity_target > 0 ? arity_target : default_arity_target(c.H);
    R.arity_target = N;
    R.Amin = c.H;
    R.Amin.arity_bound = std::max(2, N);
    int top = N + A.arity_bound;
    R.f.arity_bound = top;
    R.f.object_map.resize(A.objects.size());
    for (std::size_t o = 0; o < A.objects.size(); ++o)
        R.f.object_map[o] = o;
    {
        MultiOp f1;
        f1.arity = 1;
        f1.degree = 0;
        for (BasisId x = 0; x < R.Amin.basis.size(); ++x)
            f1.add({x}, c.i.apply(x));
        R.f.comps.emplace(1, std::move(f1));
    }

    const MultiOp* m1 = A.op(1);
    int conv = 1;
    for (int n = 2; n <= top; ++n) {
        auto words = R.Amin.words(static_cast<std::size_t>(n));
        if (words.empty())
            continue;

        std::map<Word, LinComb> cn;
        bool need = false, p_nonzero = false;
        for (const Word& w : words) {
            LinComb d = morphism_defect(R.Amin, A, R.f, n, w);
            if (m1) {
                LinComb dc;
                for (const auto& [y, cy] : d)
                    lin_add(dc, m1->apply({y}), cy);
                if (!dc.empty())
                    throw internal_error("transfer: obstruction is not a cycle at arity " +
                                         std::to_string(n));
            }
            need = need || !d.empty();
            p_nonzero = p_nonzero || !c.p.apply(d).empty();
            cn.emplace(w, std::move(d));
        }
        if (!need)
            continue;
        if (n > N && p_nonzero)
            throw input_error("transfer: nonzero product at arity " + std::to_string(n) +
                              " beyond the requested target " + std::to_string(N));

        auto install = [&](int sgn) {
            MultiOp mn, fn;
            mn.arity = n;
            mn.degree = 2 - n;
            fn.arity = n;
            fn.degree = 1 - n;
            const Scalar pm = sgn > 0 ? -Scalar::one(A.field) : Scalar::one(A.field);
            const Scalar fm = -pm;
            for (const auto& [w, d] : cn) {
                LinComb pd = c.p.apply(d);
                for (const auto& [y, cy] : pd)
                    mn.add(w, y, cy * pm);
                LinComb hd = c.h.apply(d);
                for (const auto& [y, cy] : hd)
                    fn.add(w, y, cy * fm);
            }
            if (n <= N && !mn.is_zero())
                R.Amin.ops.emplace(n, std::move(mn));
            if (!fn.is_zero())
                R.f.comps.emplace(n, std::move(fn));
        };
        auto uninstall = [&] {
            R.Amin.ops.erase(n);
            R.f.comps.erase(n);
        };
        auto certified = [&] {
            for (const Word& w : words)
                if (!morphism_defect(R.Amin, A, R.f, n, w).empty())
                    return false;
            return true;
        };

        install(conv);
        if (!certified()) {
            if (n == 3) {
                uninstall();
                conv = -conv;
                install(conv);
                if (!certified())
                    throw internal_error("transfer: certification failed at arity 3 under both "
                                         "sign conventions");
            } else {
                throw internal_error("transfer: certification failed at arity " +
                                     std::to_string(n));
            }
        }
    }

    R.Amin.validate();
    if (!check_stasheff(R.Amin).pass())
        throw internal_error("transfer: minimal structure fails its identities");
    if (!check_morphism(R.Amin, A, R.f).pass())
        throw internal_error("transfer: output morphism fails its identities");
    return R;
}

}  // namespace ainf
