#include "fixtures.h"
#include "transfer.h"

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <climits>
#include <set>

using namespace ainf;

const Field Q = Field::rationals();

/******** Helpers ********/

static std::map<std::string, BasisId> by_name(const AInfCategory& A)
{
    std::map<std::string, BasisId> m;
    for (BasisId x = 0; x < A.basis.size(); ++x)
        m[A.basis[x].name] = x;
    return m;
}

/* Rewrite an operation table through name-matching into another category's
 * ids, so structurally equal categories compare entrywise. */
static std::map<Word, LinComb> translated(const MultiOp& op, const AInfCategory& from,
                                          const AInfCategory& to)
{
    auto names = by_name(to);
    std::map<Word, LinComb> out;
    for (const auto& [w, lc] : op.entries) {
        Word w2;
        for (BasisId x : w)
            w2.push_back(names.at(from.basis[x].name));
        LinComb lc2;
        for (const auto& [y, c] : lc)
            lc2[names.at(from.basis[y].name)] = c;
        out[w2] = lc2;
    }
    return out;
}

static GradedMap hom_pair_d(const AInfCategory& A, const PairBasis& pb)
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
        for (const auto& [y, c] : out)
            it->second.at(pb.locate.at(y).second, j) = c;
    }
    for (auto& [q, blk] : blocks)
        d.set_block(q, std::move(blk));
    return d;
}

/* The induced product on the classes of a contraction, extended bilinearly. */
static LinComb induced_product(const AInfCategory& A, const Contraction& c, const LinComb& x,
                               const LinComb& y)
{
    LinComb out;
    const MultiOp* m2 = A.op(2);
    if (!m2)
        return out;
    for (const auto& [xa, ca] : x)
        for (const auto& [yb, cb] : y)
            for (const auto& [a, wa] : c.i.apply(xa))
                for (const auto& [b, wb] : c.i.apply(yb))
                    lin_add(out, m2->apply({a, b}), ca * cb * wa * wb);
    return c.p.apply(out);
}

/* Rank of m_n as one matrix (targets x words); invariant under invertible
 * degree-0 change of the class basis. */
static std::size_t op_rank(const AInfCategory& H, int n)
{
    const MultiOp* op = H.op(n);
    if (!op)
        return 0;
    auto ws = H.words(static_cast<std::size_t>(n));
    Matrix M(H.field, H.basis.size(), ws.size());
    for (std::size_t j = 0; j < ws.size(); ++j)
        for (const auto& [y, c] : op->apply(ws[j]))
            M.at(y, j) = c;
    return M.rank();
}

static std::set<int> nonzero_arities(const AInfCategory& A)
{
    std::set<int> s;
    for (const auto& [n, op] : A.ops)
        if (!op.is_zero())
            s.insert(n);
    return s;
}

/******** Contractions ********/

TEST_CASE("contracting the endomorphism complex onto its idempotent classes")
{
    AInfCategory A = fixture_end_chain(Q);
    auto ids = by_name(A);
    Contraction c = build_contraction(A);
    CHECK_NOTHROW(validate_contraction(A, c));

    REQUIRE(c.H.basis.size() == 2);
    CHECK(c.H.basis[0].degree == 0);
    CHECK(c.H.basis[1].degree == 0);
    /* representatives: E00+E11 first (earliest pivot), then E22 by name */
    CHECK(c.H.basis[1].name == "E22");
    const Scalar one = Scalar::one(Q);
    CHECK(c.i.apply(0) == LinComb{{ids.at("E00"), one}, {ids.at("E11"), one}});
    CHECK(c.i.apply(1) == LinComb{{ids.at("E22"), one}});

    SUBCASE("each violated equation is reported")
    {
        Contraction bad = c;
        bad.h.cols.clear(); /* kills m_1 h + h m_1 */
        CHECK_THROWS_AS(validate_contraction(A, bad), input_error);

        bad = c;
        bad.p.cols.clear(); /* kills p i = 1 */
        CHECK_THROWS_AS(validate_contraction(A, bad), input_error);

        bad = c;
        bad.i.cols[0] = LinComb{{ids.at("E00"), one}}; /* not a cycle */
        CHECK_THROWS_AS(validate_contraction(A, bad), input_error);

        bad = c;
        bad.h.degree = 0;
        CHECK_THROWS_AS(validate_contraction(A, bad), input_error);

        bad = c;
        bad.i.cols[1] = LinComb{{ids.at("E20"), one}}; /* wrong degree */
        CHECK_THROWS_AS(validate_contraction(A, bad), input_error);
    }
}

TEST_CASE("contractions verify on random endomorphism algebras")
{
    for (const Field& f : {Q, Field::prime(5)}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            Rng rng(seed);
            AInfCategory A = random_dg_algebra(rng, f);
            Contraction c = build_contraction(A);
            CHECK_NOTHROW(validate_contraction(A, c));
            /* class count = Euler-consistent homology of the Hom complex */
            Homology hom = complex_homology(hom_pair_d(A, pair_basis(A, 0, 0)));
            std::size_t want = 0;
            for (const auto& [q, names] : hom.H.by_degree)
                want += names.size();
            CHECK(c.H.basis.size() == want);
        }
    }
}

/******** Homology algebra ********/

TEST_CASE("the homology algebra of the endomorphism complex is two orthogonal idempotents")
{
    AInfCategory A = fixture_end_chain(Q);
    AInfCategory H = homology_algebra(A);
    REQUIRE(H.basis.size() == 2);
    CHECK(H.op(1) == nullptr);
    REQUIRE(H.op(2) != nullptr);
    MultiOp expect;
    expect.arity = 2;
    expect.degree = 0;
    const Scalar one = Scalar::one(Q);
    expect.add({0, 0}, 0, one);
    expect.add({1, 1}, 1, one);
    CHECK(H.op(2)->entries == expect.entries);

    /* rejects inputs that fail their identities */
    Rng rng(3);
    AInfCategory bad = fixture_end_chain(Q);
    REQUIRE(mutate_until_defect(rng, bad) > 0);
    CHECK_THROWS_AS(homology_algebra(bad), input_error);
}

/******** Minimal models by transfer ********/

TEST_CASE("transferring the endomorphism complex yields its homology algebra exactly")
{
    AInfCategory A = fixture_end_chain(Q);
    Contraction c = build_contraction(A);
    CHECK(default_arity_target(c.H) == 2);

    TransferResult R = transfer_minimal_model(A, c);
    CHECK(R.arity_target == 2);
    CHECK(R.Amin.op(1) == nullptr);
    CHECK(nonzero_arities(R.Amin) == std::set<int>{2});
    AInfCategory H = homology_algebra(A);
    CHECK(R.Amin.op(2)->entries == H.op(2)->entries);
    for (BasisId x = 0; x < R.Amin.basis.size(); ++x)
        CHECK(R.Amin.basis[x].name == H.basis[x].name);

    /* the morphism is the inclusion of representatives, nothing higher */
    REQUIRE(R.f.comp(1) != nullptr);
    CHECK(R.f.comps.size() == 1);
    for (BasisId x = 0; x < R.Amin.basis.size(); ++x)
        CHECK(R.f.comp(1)->apply({x}) == c.i.apply(x));
    CHECK(R.f.arity_bound == 2 + A.arity_bound);
    CHECK(check_morphism(R.Amin, A, R.f).pass());

    SUBCASE("the transferred morphism induces the identity on homology")
    {
        InducedHomology ih = is_quasi_iso(R.Amin, A, R.f);
        CHECK(ih.quasi_iso);
        REQUIRE(ih.induced.count({0, 0}) == 1);
        CHECK(ih.induced.at({0, 0}).block(0) == Matrix::identity(Q, 2));

        AInfMorphism zero;
        zero.object_map = {0};
        CHECK_FALSE(is_quasi_iso(R.Amin, A, zero).quasi_iso);
    }
}

TEST_CASE("a minimal category is its own minimal model, on the nose")
{
    AInfCategory E = fixture_E(Q);
    Contraction c = build_contraction(E);
    CHECK(default_arity_target(c.H) == 3); /* capped by the longest composable word */

    TransferResult R = transfer_minimal_model(E, c);
    CHECK(R.arity_target == 3);
    REQUIRE(R.Amin.basis.size() == E.basis.size());
    CHECK(nonzero_arities(R.Amin) == std::set<int>{3});
    CHECK(translated(*E.op(3), E, R.Amin) == R.Amin.op(3)->entries);
    CHECK(R.f.comps.size() == 1);
    CHECK(is_quasi_iso(R.Amin, E, R.f).quasi_iso);

    AInfCategory A4 = fixture_A4cat(Field::prime(5));
    Contraction c4 = build_contraction(A4);
    CHECK(c4.H.identities.size() == A4.objects.size());
    TransferResult R4 = transfer_minimal_model(A4, c4);
    CHECK(R4.Amin.has_identities());
    CHECK(nonzero_arities(R4.Amin) == std::set<int>{2, 3});
    CHECK(translated(*A4.op(2), A4, R4.Amin) == R4.Amin.op(2)->entries);
    CHECK(translated(*A4.op(3), A4, R4.Amin) == R4.Amin.op(3)->entries);
    CHECK(R4.f.comps.size() == 1);
    /* the inclusion matches classes to the same-named elements, one to one */
    auto a4 = by_name(A4);
    for (BasisId x = 0; x < R4.Amin.basis.size(); ++x)
        CHECK(R4.f.comp(1)->apply({x}) ==
              LinComb{{a4.at(R4.Amin.basis[x].name), Scalar::one(A4.field)}});
}

TEST_CASE("targets, caps, and invalid inputs")
{
    AInfCategory E = fixture_E(Q);
    Contraction c = build_contraction(E);
    /* the genuine triple product does not fit under a cap of 2 */
    CHECK_THROWS_AS(transfer_minimal_model(E, c, 2), input_error);
    /* a generous explicit cap changes nothing */
    TransferResult R = transfer_minimal_model(E, c, 5);
    CHECK(R.arity_target == 5);
    CHECK(nonzero_arities(R.Amin) == std::set<int>{3});

    AInfCategory bad = fixture_end_chain(Q);
    Rng rng(5);
    REQUIRE(mutate_until_defect(rng, bad) > 0);
    CHECK_THROWS_AS(transfer_minimal_model(bad, build_contraction(fixture_end_chain(Q))),
                    input_error);
    /* contraction of a different category */
    CHECK_THROWS_AS(transfer_minimal_model(E, build_contraction(fixture_end_chain(Q))),
                    input_error);
}

/******** Obstruction cocycles ********/

TEST_CASE("the first obstruction is the composite of representatives")
{
    AInfCategory A = fixture_end_chain(Q);
    Contraction c = build_contraction(A);
    AInfMorphism partial;
    partial.object_map = {0};
    partial.arity_bound = 1;
    MultiOp& f1 = partial.comp_mut(1);
    for (BasisId x = 0; x < c.H.basis.size(); ++x)
        f1.add({x}, c.i.apply(x));

    MultiOp ob = obstruction_cocycle(c.H, A, partial, 1);
    CHECK(ob.arity == 2);
    CHECK(ob.degree == 0);
    /* entrywise: -m_2(i x, i y) */
    const MultiOp* m2 = A.op(2);
    for (const Word& w : c.H.words(2)) {
        LinComb want;
        for (const auto& [a, ca] : c.i.apply(w[0]))
            for (const auto& [b, cb] : c.i.apply(w[1]))
                lin_add(want, m2->apply({a, b}), -(ca * cb));
        CHECK(ob.apply(w) == want);
        /* projecting gives minus the induced product */
        LinComb prod = induced_product(A, c, LinComb{{w[0], Scalar::one(Q)}},
                                       LinComb{{w[1], Scalar::one(Q)}});
        LinComb mprod;
        for (const auto& [y, cy] : prod)
            lin_add(mprod, y, -cy);
        CHECK(c.p.apply(ob.apply(w)) == mprod);
    }

    SUBCASE("components beyond the stated stage are rejected")
    {
        AInfMorphism f2 = partial;
        auto ids = by_name(A);
        f2.comps[3].arity = 3;
        f2.comps[3].degree = -2;
        f2.comps[3].add({0, 0, 0}, ids.at("E00"), Scalar::one(Q));
        f2.arity_bound = 3;
        CHECK_THROWS_AS(obstruction_cocycle(c.H, A, f2, 1), input_error);
    }
    SUBCASE("a family that fails an earlier identity is rejected")
    {
        AInfMorphism f3 = partial;
        auto ids = by_name(A);
        /* no longer a chain map: the extra E00 is not a cycle */
        f3.comp_mut(1).add({0}, ids.at("E00"), Scalar::one(Q));
        CHECK_THROWS_AS(obstruction_cocycle(c.H, A, f3, 1), input_error);
    }
}

TEST_CASE("the arity-3 obstruction of a truncated minimal model sees the triple product")
{
    AInfCategory A4 = fixture_A4cat(Q);
    Contraction c = build_contraction(A4);
    TransferResult R = transfer_minimal_model(A4, c);
    AInfCategory src = R.Amin;
    src.ops.erase(3);
    AInfMorphism partial = R.f;
    partial.arity_bound = 2;

    MultiOp ob = obstruction_cocycle(src, A4, partial, 2);
    CHECK(ob.arity == 3);
    CHECK(ob.degree == -1);
    /* one nonzero value: -e on (a,b,c); every word with an identity vanishes */
    auto hs = by_name(src);
    auto as = by_name(A4);
    MultiOp expect;
    expect.arity = 3;
    expect.degree = -1;
    expect.add({hs.at("a"), hs.at("b"), hs.at("c")}, as.at("e"), -Scalar::one(Q));
    CHECK(ob.entries == expect.entries);
}

/******** Gauge independence ********/

TEST_CASE("the induced product commutes with any change of representatives")
{
    const Field F3 = Field::prime(3);
    int tested_mix = 0, tested_shift = 0;
    for (std::uint64_t seed = 1; seed <= 120 && (tested_mix < 3 || tested_shift < 2); ++seed) {
        Rng rng(seed);
        AInfCategory A = random_dg_algebra(rng, F3);
        PairBasis pb = pair_basis(A, 0, 0);
        Homology hom = complex_homology(hom_pair_d(A, pb));

        /* prefer a degree carrying both classes and boundaries (a genuine
         * representative shift); otherwise mix two classes of one degree */
        const int none = INT_MIN;
        int shift_q = none, mix_q = none;
        for (const auto& [q, names] : hom.H.by_degree) {
            auto bit = hom.boundaries.find(q);
            if (shift_q == none && !names.empty() && bit != hom.boundaries.end() &&
                !bit->second.empty())
                shift_q = q;
            if (mix_q == none && names.size() >= 2)
                mix_q = q;
        }
        PreferredReps prefs;
        if (shift_q != none && tested_shift < 2) {
            Matrix bi = hom.i.block(shift_q);
            const Vec& b = hom.boundaries.at(shift_q).front();
            Vec v(bi.rows(), Scalar::zero(F3));
            for (std::size_t r = 0; r < bi.rows(); ++r)
                v[r] = bi.at(r, 0) + b[r];
            prefs[{0, 0}][shift_q].push_back({"alt", v});
            ++tested_shift;
        } else if (mix_q != none && tested_mix < 3) {
            Matrix bi = hom.i.block(mix_q);
            Vec v(bi.rows(), Scalar::zero(F3));
            for (std::size_t r = 0; r < bi.rows(); ++r)
                v[r] = bi.at(r, 0) + bi.at(r, 1);
            prefs[{0, 0}][mix_q].push_back({"mix", v});
            ++tested_mix;
        } else {
            continue;
        }

        Contraction c1 = build_contraction(A);
        Contraction c2 = build_contraction(A, prefs);
        REQUIRE(c1.H.basis.size() == c2.H.basis.size());
        CHECK(c1.i.cols != c2.i.cols); /* the knob moved something */

        /* base change phi = p2 i1 with two-sided inverse psi = p1 i2 */
        CatLinMap phi, psi;
        phi.degree = 0;
        psi.degree = 0;
        const Scalar one = Scalar::one(F3);
        for (BasisId x = 0; x < c1.H.basis.size(); ++x) {
            phi.cols[x] = c2.p.apply(c1.i.apply(x));
            psi.cols[x] = c1.p.apply(c2.i.apply(x));
        }
        for (BasisId x = 0; x < c1.H.basis.size(); ++x) {
            CHECK(psi.apply(phi.apply(x)) == LinComb{{x, one}});
            CHECK(phi.apply(psi.apply(x)) == LinComb{{x, one}});
        }

        /* phi(x . y) = phi(x) . phi(y) for the two induced products */
        for (const Word& w : c1.H.words(2)) {
            LinComb x{{w[0], one}}, y{{w[1], one}};
            LinComb lhs = phi.apply(induced_product(A, c1, x, y));
            LinComb rhs = induced_product(A, c2, phi.apply(x), phi.apply(y));
            CHECK(lhs == rhs);
        }
    }
    CHECK(tested_mix >= 3);
    CHECK(tested_shift >= 2);
}

TEST_CASE("minimal models agree across contraction choices")
{
    /* the endomorphism complex, with the identity cycle forced in first */
    AInfCategory A = fixture_end_chain(Q);
    PairBasis pb = pair_basis(A, 0, 0);
    PreferredReps prefs;
    {
        Vec v(pb.space.dim(0), Scalar::one(Q)); /* E00+E11+E22 */
        prefs[{0, 0}][0].push_back({"total", v});
    }
    Contraction c1 = build_contraction(A);
    Contraction c2 = build_contraction(A, prefs);
    CHECK(c1.i.cols != c2.i.cols);
    TransferResult R1 = transfer_minimal_model(A, c1);
    TransferResult R2 = transfer_minimal_model(A, c2);
    CHECK(nonzero_arities(R1.Amin) == nonzero_arities(R2.Amin));
    CHECK(op_rank(R1.Amin, 2) == 2);
    CHECK(op_rank(R2.Amin, 2) == 2);
    CHECK(is_quasi_iso(R1.Amin, A, R1.f).quasi_iso);
    CHECK(is_quasi_iso(R2.Amin, A, R2.f).quasi_iso);

    /* random degree-zero-concentrated homologies: every gauge kills m_{>=3} */
    const Field F7 = Field::prime(7);
    int tested = 0;
    for (std::uint64_t seed = 1; seed <= 120 && tested < 3; ++seed) {
        Rng rng(seed);
        AInfCategory B = random_dg_algebra(rng, F7);
        Contraction d1 = build_contraction(B);
        if (d1.H.basis.size() < 2 || d1.H.basis.size() > 4)
            continue;
        bool flat = true;
        for (const BasisElem& b : d1.H.basis)
            flat = flat && b.degree == 0;
        if (!flat)
            continue;
        ++tested;

        PairBasis qb = pair_basis(B, 0, 0);
        Homology hom = complex_homology(hom_pair_d(B, qb));
        Matrix bi = hom.i.block(0);
        Vec v(bi.rows(), Scalar::zero(F7));
        for (std::size_t r = 0; r < bi.rows(); ++r)
            v[r] = bi.at(r, 0) + bi.at(r, 1);
        PreferredReps mix;
        mix[{0, 0}][0].push_back({"mix", v});
        Contraction d2 = build_contraction(B, mix);

        TransferResult S1 = transfer_minimal_model(B, d1);
        TransferResult S2 = transfer_minimal_model(B, d2);
        CHECK(nonzero_arities(S1.Amin) == nonzero_arities(S2.Amin));
        for (int n : nonzero_arities(S1.Amin))
            CHECK(op_rank(S1.Amin, n) == op_rank(S2.Amin, n));
        CHECK(is_quasi_iso(S2.Amin, B, S2.f).quasi_iso);
    }
    CHECK(tested >= 3);
}

/******** Randomized round trips ********/

TEST_CASE("random endomorphism algebras transfer onto certified minimal models")
{
    for (const Field& f : {Q, Field::prime(7)}) {
        int tested = 0, nonempty = 0;
        for (std::uint64_t seed = 1; seed <= 200 && tested < 4; ++seed) {
            Rng rng(seed);
            AInfCategory A = random_dg_algebra(rng, f);
            Contraction c = build_contraction(A);
            if (c.H.basis.size() > 3 || default_arity_target(c.H) > 4)
                continue;
            ++tested;
            if (!c.H.basis.empty())
                ++nonempty;

            TransferResult R = transfer_minimal_model(A, c);
            CHECK(R.Amin.op(1) == nullptr);
            CHECK(check_stasheff(R.Amin).pass());
            CHECK(check_morphism(R.Amin, A, R.f).pass());

            /* the arity-2 table is the homology algebra's */
            AInfCategory H = homology_algebra(A);
            if (const MultiOp* p2 = R.Amin.op(2)) {
                REQUIRE(H.op(2) != nullptr);
                CHECK(p2->entries == H.op(2)->entries);
            } else {
                CHECK(H.op(2) == nullptr);
            }

            /* representatives match on both sides, so H(f_1) is the identity */
            InducedHomology ih = is_quasi_iso(R.Amin, A, R.f);
            CHECK(ih.quasi_iso);
            for (const auto& [pr, ind] : ih.induced)
                for (const auto& [q, blk] : ind.blocks)
                    CHECK(blk == Matrix::identity(f, blk.rows()));
        }
        CHECK(tested == 4);
        CHECK(nonempty >= 2);
    }
}
