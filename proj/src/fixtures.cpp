#include "fixtures.h"

#include <algorithm>

namespace ainf {

/******** Named fixtures ********/

AInfCategory fixture_E(const Field& field)
{
    AInfCategory A;
    A.field = field;
    A.objects = {"x", "y", "z", "t"};
    A.arity_bound = 3;
    BasisId a = A.add_basis("a", 1, 1, 0);
    BasisId b = A.add_basis("b", 1, 2, 1);
    BasisId c = A.add_basis("c", 1, 3, 2);
    BasisId e = A.add_basis("e", 2, 3, 0);
    A.op_mut(3).add(Word{a, b, c}, e, Scalar::one(field));
    A.validate();
    return A;
}

AInfCategory fixture_A4cat(const Field& field)
{
    return augment(fixture_E(field));
}

AInfCategory fixture_D4cat(const Field& field)
{
    AInfCategory A;
    A.field = field;
    A.objects = {"1", "2", "3", "4"};
    A.arity_bound = 3;
    BasisId a = A.add_basis("a", 1, 0, 1);
    BasisId b = A.add_basis("b", 1, 2, 3);
    BasisId c = A.add_basis("c", 1, 0, 3);
    BasisId f = A.add_basis("f", 0, 1, 2);
    A.op_mut(3).add(Word{b, f, a}, c, Scalar::one(field));
    A.validate();
    return augment(A);
}

/******** Random dg algebras ********/

AInfCategory fixture_end_chain(const Field& field)
{
    AInfCategory A;
    A.field = field;
    A.objects = {"*"};
    A.arity_bound = 2;
    BasisId E00 = A.add_basis("E00", 0, 0, 0);
    BasisId E10 = A.add_basis("E10", 1, 0, 0);
    BasisId E11 = A.add_basis("E11", 0, 0, 0);
    BasisId E20 = A.add_basis("E20", 2, 0, 0);
    BasisId E21 = A.add_basis("E21", 1, 0, 0);
    BasisId E22 = A.add_basis("E22", 0, 0, 0);
    const Scalar one = Scalar::one(field);
    MultiOp& m1 = A.op_mut(1);
    m1.add(Word{E00}, E10, one);
    m1.add(Word{E11}, E10, -one);
    m1.add(Word{E21}, E20, one);
    MultiOp& m2 = A.op_mut(2);
    auto comp = [&](BasisId x, BasisId y, BasisId z) { m2.add(Word{x, y}, z, one); };
    comp(E00, E00, E00);
    comp(E11, E11, E11);
    comp(E22, E22, E22);
    comp(E10, E00, E10);
    comp(E11, E10, E10);
    comp(E20, E00, E20);
    comp(E22, E20, E20);
    comp(E21, E10, E20);
    comp(E21, E11, E21);
    comp(E22, E21, E21);
    A.validate();
    return A;
}

AInfCategory random_dg_algebra(Rng& rng, const Field& field)
{
    /* A complex C with one-dimensional pieces at distinct degrees. */
    int pieces = static_cast<int>(rng.range(2, 4));
    std::vector<int> degs;
    while (static_cast<int>(degs.size()) < pieces) {
        int q = static_cast<int>(rng.range(0, 3));
        if (std::find(degs.begin(), degs.end(), q) == degs.end())
            degs.push_back(q);
    }
    std::sort(degs.begin(), degs.end());

    /* d_q: piece at degree q -> piece at degree q+1.  Forbid two
     * consecutive nonzero arrows so that d^2 = 0 holds on the nose. */
    std::vector<Scalar> diff(pieces, Scalar::zero(field));
    for (int i = 0; i + 1 < pieces; ++i) {
        if (degs[i + 1] != degs[i] + 1)
            continue;
        bool prev_nonzero = i > 0 && !diff[i - 1].is_zero();
        if (!prev_nonzero && rng.coin())
            diff[i] = rng.nonzero_scalar(field);
    }

    /* Basis of End(C) in non-negative degrees: matrix units E_ji. */
    AInfCategory A;
    A.field = field;
    A.objects = {"*"};
    A.arity_bound = 2;
    std::map<std::pair<int, int>, BasisId> unit;
    for (int j = 0; j < pieces; ++j)
        for (int i = 0; i < pieces; ++i) {
            int deg = degs[j] - degs[i];
            if (deg < 0)
                continue;
            unit[{j, i}] = A.add_basis("E" + std::to_string(j) + std::to_string(i), deg, 0, 0);
        }

    /* m_1 = [d, -] and m_2 = composition. */
    MultiOp& m1 = A.op_mut(1);
    MultiOp& m2 = A.op_mut(2);
    const Scalar one = Scalar::one(field);
    for (const auto& [ji, x] : unit) {
        auto [j, i] = ji;
        int deg = degs[j] - degs[i];
        if (j + 1 < pieces && !diff[j].is_zero())
            m1.add(Word{x}, unit.at({j + 1, i}), diff[j]);
        if (i > 0 && !diff[i - 1].is_zero()) {
            Scalar sgn = (deg % 2 == 0) ? one : -one;
            m1.add(Word{x}, unit.at({j, i - 1}), -(sgn * diff[i - 1]));
        }
    }
    for (const auto& [ji, x] : unit)
        for (const auto& [lk, y] : unit)
            if (ji.second == lk.first)
                m2.add(Word{x, y}, unit.at({ji.first, lk.second}), one);

    /* Conjugate by a random invertible degree-0 change of basis. */
    PairBasis pb = pair_basis(A, 0, 0);
    CatLinMap g, ginv;
    g.degree = 0;
    ginv.degree = 0;
    for (const auto& [q, names] : pb.space.by_degree) {
        std::size_t nd = names.size();
        std::vector<BasisId> ids(nd);
        for (BasisId id : pb.ids)
            if (pb.locate.at(id).first == q)
                ids[pb.locate.at(id).second] = id;
        Matrix G(field, nd, nd);
        for (;;) {
            for (std::size_t r = 0; r < nd; ++r)
                for (std::size_t cidx = 0; cidx < nd; ++cidx)
                    G.at(r, cidx) = rng.scalar(field);
            if (G.rank() == nd)
                break;
        }
        Matrix Gi = G.inverse();
        for (std::size_t cidx = 0; cidx < nd; ++cidx)
            for (std::size_t r = 0; r < nd; ++r) {
                if (!G.at(r, cidx).is_zero())
                    lin_add(g.cols[ids[cidx]], ids[r], G.at(r, cidx));
                if (!Gi.at(r, cidx).is_zero())
                    lin_add(ginv.cols[ids[cidx]], ids[r], Gi.at(r, cidx));
            }
    }

    AInfCategory B;
    B.field = field;
    B.objects = A.objects;
    B.arity_bound = 2;
    for (const auto& be : A.basis)
        B.add_basis(be.name, be.degree, be.src, be.dst);
    auto d_of = [&](const LinComb& v) {
        LinComb out;
        for (const auto& [x, c] : v)
            lin_add(out, m1.apply(Word{x}), c);
        return out;
    };
    for (BasisId x = 0; x < A.basis.size(); ++x) {
        LinComb out = g.apply(d_of(ginv.apply(LinComb{{x, one}})));
        B.op_mut(1).add(Word{x}, out);
    }
    for (BasisId x = 0; x < A.basis.size(); ++x)
        for (BasisId y = 0; y < A.basis.size(); ++y) {
            LinComb gx = ginv.apply(LinComb{{x, one}});
            LinComb gy = ginv.apply(LinComb{{y, one}});
            LinComb out;
            for (const auto& [xa, ca] : gx)
                for (const auto& [yb, cb] : gy)
                    lin_add(out, m2.apply(Word{xa, yb}), ca * cb);
            B.op_mut(2).add(Word{x, y}, g.apply(out));
        }
    B.validate();
    return B;
}

/******** Minimal categories and their morphisms ********/

AInfCategory path_category(const Field& field, const std::vector<std::vector<int>>& arrow_degrees)
{
    int k = static_cast<int>(arrow_degrees.size());
    AInfCategory A;
    A.field = field;
    for (int o = 0; o <= k; ++o)
        A.objects.push_back("o" + std::to_string(o));
    A.arity_bound = 2;

    /* Paths o_i -> o_j, i > j: one per tuple of arrow choices at steps
     * j..i-1.  Ids are recorded per (i, j, choice tuple). */
    std::map<std::tuple<int, int, std::vector<std::size_t>>, BasisId> path_id;
    auto tuples = [&](int j, int i) {
        std::vector<std::vector<std::size_t>> acc{{}};
        for (int step = j; step < i; ++step) {
            std::vector<std::vector<std::size_t>> next;
            for (const auto& t : acc)
                for (std::size_t choice = 0; choice < arrow_degrees[step].size(); ++choice) {
                    auto t2 = t;
                    t2.push_back(choice);
                    next.push_back(t2);
                }
            acc = std::move(next);
        }
        return acc;
    };
    for (int j = 0; j < k; ++j)
        for (int i = j + 1; i <= k; ++i)
            for (const auto& t : tuples(j, i)) {
                int deg = 0;
                std::string name = "p" + std::to_string(i) + std::to_string(j);
                for (int step = j; step < i; ++step) {
                    deg += arrow_degrees[step][t[step - j]];
                    if (arrow_degrees[step].size() > 1)
                        name += "_" + std::to_string(t[step - j]);
                }
                path_id[{i, j, t}] = A.add_basis(name, deg, i, j);
            }

    MultiOp& m2 = A.op_mut(2);
    const Scalar one = Scalar::one(field);
    for (const auto& [left, x] : path_id)
        for (const auto& [right, y] : path_id) {
            auto [li, lj, lt] = left;
            auto [ri, rj, rt] = right;
            if (rj != li)
                continue; /* display order [x, y] means x o y */
            /* x covers steps lj..li-1, y covers li..ri-1; tuples concatenate. */
            std::vector<std::size_t> both = lt;
            both.insert(both.end(), rt.begin(), rt.end());
            m2.add(Word{x, y}, path_id.at({ri, lj, both}), one);
        }
    A.validate();
    return A;
}

AInfCategory path_category(const Field& field, int length)
{
    std::vector<std::vector<int>> arrows(static_cast<std::size_t>(length), {1});
    return path_category(field, arrows);
}

AInfCategory transport_minimal(const AInfCategory& A, const std::vector<std::size_t>& object_map,
                               const std::vector<std::string>& target_objects,
                               const AInfMorphism& f)
{
    if (A.op(1))
        throw input_error("transport_minimal: source must be minimal");
    const MultiOp* f1 = f.comp(1);
    if (!f1)
        throw input_error("transport_minimal: f_1 is zero");

    AInfCategory B;
    B.field = A.field;
    B.objects = target_objects;
    for (const auto& be : A.basis)
        B.add_basis(be.name, be.degree, object_map[be.src], object_map[be.dst]);

    MultiOp inv1 = strict_inverse_component(A, B, object_map, *f1);

    /* Longest composable word; the composition graph must be nilpotent. */
    std::size_t L = 1;
    while (L < 16 && !A.words(L + 1).empty())
        ++L;
    if (L >= 16)
        throw input_error("transport_minimal: composition graph is not nilpotent");

    B.arity_bound = std::max<int>(2, static_cast<int>(L));
    const Scalar one = Scalar::one(A.field);
    for (int n = 2; n <= static_cast<int>(L); ++n) {
        MultiOp mn;
        mn.arity = n;
        mn.degree = 2 - n;
        std::vector<const MultiOp*> inv(static_cast<std::size_t>(n), &inv1);
        std::vector<std::size_t> ones(static_cast<std::size_t>(n), 1);
        for (const Word& u : B.words(static_cast<std::size_t>(n))) {
            LinComb val;
            for (const auto& [w, cw] : ops_apply(B, inv, ones, u)) {
                /* LHS of the morphism identity on w. */
                for (int r = 0; r < n; ++r)
                    for (int s = 2; r + s <= n; ++s) {
                        int t = n - r - s;
                        int uu = r + 1 + t;
                        const MultiOp* ms = A.op(s);
                        const MultiOp* fu = f.comp(uu);
                        if (!ms || !fu)
                            continue;
                        Scalar sgn = ((r + s * t) % 2 == 0) ? one : -one;
                        for (const auto& [w2, c] : block_apply(A, *ms, r, w))
                            lin_add(val, fu->apply(w2), cw * c * sgn);
                    }
                /* Minus the already-known RHS terms with r < n. */
                for (const auto& parts : compositions(n, static_cast<std::size_t>(n))) {
                    if (parts.size() == static_cast<std::size_t>(n))
                        continue;
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
                        lin_add(val, mr->apply(w2), -(cw * c * sgn));
                }
            }
            mn.add(u, val);
        }
        if (!mn.is_zero())
            B.ops.emplace(n, std::move(mn));
    }
    B.validate();
    return B;
}

MinimalPair random_minimal_pair(Rng& rng, const Field& field)
{
    /* Random chain: 2 or 3 steps; step 0 fixed at degree 1 so the basis is
     * not concentrated in degree 0; later steps carry 1 or 2 arrows with
     * degrees in [0, 2]. */
    int steps = static_cast<int>(rng.range(2, 3));
    std::vector<std::vector<int>> arrows{{1}};
    for (int s = 1; s < steps; ++s) {
        std::vector<int> degs{static_cast<int>(rng.range(0, 2))};
        if (rng.coin()) {
            /* A parallel arrow one degree apart keeps Hom spaces mixed in
             * degree, which is what gives the higher components room. */
            degs.push_back(degs[0] == 2 ? 1 : degs[0] + 1);
        }
        arrows.push_back(degs);
    }
    AInfCategory A = path_category(field, arrows);

    /* Random object permutation (Fisher-Yates). */
    std::vector<std::size_t> perm(A.objects.size());
    for (std::size_t o = 0; o < perm.size(); ++o)
        perm[o] = o;
    for (std::size_t o = perm.size(); o > 1; --o)
        std::swap(perm[o - 1], perm[rng.below(o)]);
    std::vector<std::string> tobj(perm.size());
    for (std::size_t o = 0; o < perm.size(); ++o)
        tobj[perm[o]] = A.objects[o] + "'";

    /* Target skeleton ids coincide with source ids. */
    AInfMorphism f;
    f.object_map = perm;
    f.arity_bound = 3;

    /* f_1: random invertible block per (src, dst, degree). */
    MultiOp& f1 = f.comp_mut(1);
    std::map<std::tuple<std::size_t, std::size_t, int>, std::vector<BasisId>> blocks;
    for (BasisId x = 0; x < A.basis.size(); ++x)
        blocks[{A.basis[x].src, A.basis[x].dst, A.basis[x].degree}].push_back(x);
    for (const auto& [key, ids] : blocks) {
        std::size_t nd = ids.size();
        Matrix G(field, nd, nd);
        for (;;) {
            for (std::size_t r = 0; r < nd; ++r)
                for (std::size_t c = 0; c < nd; ++c)
                    G.at(r, c) = rng.scalar(field);
            if (G.rank() == nd)
                break;
        }
        for (std::size_t c = 0; c < nd; ++c)
            for (std::size_t r = 0; r < nd; ++r)
                if (!G.at(r, c).is_zero())
                    f1.add(Word{ids[c]}, ids[r], G.at(r, c));
    }

    /* f_2, f_3: random entries of the correct degree and Hom pair. */
    for (int n = 2; n <= 3; ++n) {
        MultiOp fn;
        fn.arity = n;
        fn.degree = 1 - n;
        for (const Word& w : A.words(static_cast<std::size_t>(n))) {
            int want = A.word_degree(w) + 1 - n;
            std::size_t ws = perm[A.word_src(w)], wd = perm[A.word_dst(w)];
            LinComb out;
            for (BasisId y = 0; y < A.basis.size(); ++y)
                if (A.basis[y].degree == want && perm[A.basis[y].src] == ws &&
                    perm[A.basis[y].dst] == wd)
                    lin_add(out, y, rng.scalar(field));
            fn.add(w, out);
        }
        if (!fn.is_zero())
            f.comps.emplace(n, std::move(fn));
    }

    AInfCategory B = transport_minimal(A, perm, tobj, f);
    return {std::move(A), std::move(B), std::move(f)};
}

int mutate_until_defect(Rng& rng, AInfCategory& A, int max_attempts)
{
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        AInfCategory M = A;
        int n = static_cast<int>(rng.range(1, static_cast<std::uint64_t>(M.arity_bound)));
        auto words = M.words(static_cast<std::size_t>(n));
        if (words.empty())
            continue;
        const Word& w = words[rng.below(words.size())];
        int want = M.word_degree(w) + 2 - n;
        std::size_t ws = M.word_src(w), wd = M.word_dst(w);
        std::vector<BasisId> targets;
        for (BasisId y = 0; y < M.basis.size(); ++y)
            if (M.basis[y].degree == want && M.basis[y].src == ws && M.basis[y].dst == wd)
                targets.push_back(y);
        if (targets.empty())
            continue;
        BasisId y = targets[rng.below(targets.size())];
        M.op_mut(n).add(w, y, rng.nonzero_scalar(M.field));
        M.validate();
        if (!check_stasheff(M).pass()) {
            A = std::move(M);
            return attempt;
        }
    }
    return 0;
}

AInfCategory random_op_family(Rng& rng, const Field& field, int max_arity, int max_dim)
{
    AInfCategory A;
    A.field = field;
    A.objects = {"*"};
    A.arity_bound = max_arity;
    std::size_t dim = rng.range(2, static_cast<std::uint64_t>(max_dim));
    bool graded = false;
    while (!graded) {
        A.basis.clear();
        for (std::size_t i = 0; i < dim; ++i) {
            int d = static_cast<int>(rng.range(0, 4)) - 2;
            graded = graded || d != 0;
            A.add_basis("g" + std::to_string(i), d, 0, 0);
        }
    }
    for (int n = 1; n <= max_arity; ++n)
        for (const Word& w : A.words(static_cast<std::size_t>(n))) {
            if (!rng.coin())
                continue;
            int want = A.word_degree(w) + 2 - n;
            for (BasisId y = 0; y < A.basis.size(); ++y)
                if (A.basis[y].degree == want && rng.coin())
                    A.op_mut(n).add(w, y, rng.nonzero_scalar(field));
        }
    A.validate();
    return A;
}

}  // namespace ainf
