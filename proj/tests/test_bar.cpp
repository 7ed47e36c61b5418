#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bar.h"
#include "fixtures.h"

using namespace ainf;

/******** Helpers ********/

static bool same_comps(const std::map<int, MultiOp>& a, const std::map<int, MultiOp>& b)
{
    auto live = [](const std::map<int, MultiOp>& m) {
        std::map<int, const MultiOp*> out;
        for (const auto& [n, op] : m)
            if (!op.is_zero())
                out.emplace(n, &op);
        return out;
    };
    auto la = live(a), lb = live(b);
    if (la.size() != lb.size())
        return false;
    for (const auto& [n, pa] : la) {
        auto it = lb.find(n);
        if (it == lb.end())
            return false;
        if (pa->arity != it->second->arity || pa->degree != it->second->degree ||
            pa->entries != it->second->entries)
            return false;
    }
    return true;
}

/* One object, u of degree 2, v of degree 3, m_1(u) = v.  The smallest
 * structure on which the suspended Koszul sign is visible. */
static AInfCategory two_step(const Field& field)
{
    AInfCategory A;
    A.field = field;
    A.objects = {"*"};
    A.arity_bound = 1;
    A.add_basis("u", 2, 0, 0);
    A.add_basis("v", 3, 0, 0);
    A.op_mut(1).add({0}, 1, Scalar::one(field));
    A.validate();
    return A;
}

using PairSum = std::map<std::pair<Word, Word>, Scalar>;

static void pair_add(PairSum& acc, const Word& x, const Word& y, const Scalar& c)
{
    if (c.is_zero())
        return;
    auto [it, fresh] = acc.emplace(std::make_pair(x, y), c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero())
            acc.erase(it);
    }
}

static long sdeg(const AInfCategory& A, const Word& x)
{
    long d = 0;
    for (BasisId id : x)
        d += A.basis[id].degree - 1;
    return d;
}

/* Random degree -n components on a one-object family, for transform tests. */
static std::map<int, MultiOp> random_homotopy_comps(Rng& rng, const AInfCategory& A, int top)
{
    std::map<int, MultiOp> comps;
    for (int n = 1; n <= top; ++n) {
        MultiOp h;
        h.arity = n;
        h.degree = -n;
        for (const Word& w : A.words(static_cast<std::size_t>(n))) {
            int want = A.word_degree(w) - n;
            for (BasisId y = 0; y < A.basis.size(); ++y)
                if (A.basis[y].degree == want && rng.coin())
                    h.add(w, y, rng.nonzero_scalar(A.field));
        }
        if (!h.is_zero())
            comps.emplace(n, std::move(h));
    }
    return comps;
}

/******** Tests ********/

TEST_CASE("suspension transform round-trips entrywise")
{
    Field Q = Field::rationals();
    Field F7 = Field::prime(7);

    AInfCategory E = fixture_E(Q);
    CHECK(same_comps(from_bar(E, bar_of_ops(E)), E.ops));

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        AInfCategory A = random_op_family(rng, F7, 3, 4);
        CHECK(same_comps(from_bar(A, bar_of_ops(A)), A.ops));
        std::map<int, MultiOp> h = random_homotopy_comps(rng, A, 3);
        CHECK(same_comps(from_bar(A, to_bar(A, h, -1, 3)), h));
    }

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed);
        MinimalPair P = random_minimal_pair(rng, Q);
        CHECK(same_comps(from_bar(P.A, bar_of_morphism(P.A, P.f)), P.f.comps));
    }

    /* Operations have raw degree 2-n, which only matches the coderivation
     * side; declaring them as degree-0 components must be rejected. */
    CHECK_THROWS_AS(to_bar(E, E.ops, 0, E.arity_bound), input_error);
}

TEST_CASE("coderivation lift: arity-one components and the Koszul flip")
{
    Field Q = Field::rationals();
    AInfCategory A = two_step(Q);
    BarFamily b = bar_of_ops(A);

    /* b_1 agrees with m_1 entrywise (the transform twist is trivial at
     * arity 1), and on a one-factor word the lift is just b_1. */
    REQUIRE(b.comp(1) != nullptr);
    CHECK(b.comp(1)->entries == A.op(1)->entries);
    WordSum one = coderivation_apply(A, b, {0});
    REQUIRE(one.size() == 1);
    CHECK(one.at({1}) == Scalar::one(Q));

    /* On [u,u] the lift is b_1 (x) 1 + 1 (x) b_1; the second term picks up
     * (-1)^{|u| - 1} = -1 passing b_1 across the suspended factor. */
    WordSum two = coderivation_apply(A, b, {0, 0});
    REQUIRE(two.size() == 2);
    CHECK(two.at({1, 0}) == Scalar::one(Q));
    CHECK(two.at({0, 1}) == -Scalar::one(Q));
}

TEST_CASE("coderivation lift is compatible with the coproduct")
{
    Field Q = Field::rationals();
    Field F7 = Field::prime(7);

    auto delta_compatible = [](const AInfCategory& A, const BarFamily& b) {
        for (std::size_t len = 1; len <= 4; ++len)
            for (const Word& w : A.words(len)) {
                PairSum lhs;
                for (const auto& [v, c] : coderivation_apply(A, b, w))
                    for (std::size_t k = 1; k < v.size(); ++k)
                        pair_add(lhs, Word(v.begin(), v.begin() + k),
                                 Word(v.begin() + k, v.end()), c);
                for (std::size_t k = 1; k < w.size(); ++k) {
                    Word x(w.begin(), w.begin() + k), y(w.begin() + k, w.end());
                    for (const auto& [vx, cx] : coderivation_apply(A, b, x))
                        pair_add(lhs, vx, y, -cx);
                    Scalar sx = sdeg(A, x) % 2 == 0 ? Scalar::one(A.field) : -Scalar::one(A.field);
                    for (const auto& [vy, cy] : coderivation_apply(A, b, y))
                        pair_add(lhs, x, vy, -(cy * sx));
                }
                if (!lhs.empty())
                    return false;
            }
        return true;
    };

    AInfCategory E = fixture_E(Q);
    CHECK(delta_compatible(E, bar_of_ops(E)));

    /* The lift is a coderivation for any degree-correct component family,
     * structure identities or not. */
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        AInfCategory D = random_dg_algebra(rng, Q);
        CHECK(delta_compatible(D, bar_of_ops(D)));
        AInfCategory R = random_op_family(rng, F7, 3, 3);
        CHECK(delta_compatible(R, bar_of_ops(R)));
    }
}

TEST_CASE("squared coderivation detects a single mutated coefficient")
{
    Field Q = Field::rationals();
    Rng rng(11);
    AInfCategory A = random_dg_algebra(rng, Q);
    BarFamily b = bar_of_ops(A);
    CHECK(b_square_check(A, b).pass());

    REQUIRE(b.comp(2) != nullptr);
    MultiOp& b2 = b.comps.at(2);
    const auto& [w, out] = *b2.entries.begin();
    b2.add(w, out.begin()->first, Scalar::one(Q));
    CheckReport rep = b_square_check(A, b);
    REQUIRE(!rep.pass());
    int first = rep.defects.front().n;
    for (const Defect& d : rep.defects)
        first = std::min(first, d.n);
    CHECK(first <= 3);
}

TEST_CASE("signed identities hold exactly when the squared coderivation vanishes")
{
    for (const Field& field : {Field::rationals(), Field::prime(7)}) {
        int agree = 0, passing = 0, failing = 0;
        auto tally = [&](const AInfCategory& A) {
            bool lhs = check_stasheff(A).pass();
            bool rhs = b_square_check(A, bar_of_ops(A)).pass();
            CHECK(lhs == rhs);
            agree += lhs == rhs;
            (lhs ? passing : failing) += 1;
        };
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            Rng rng(seed);
            AInfCategory A = random_dg_algebra(rng, field);
            tally(A);
            AInfCategory M = A;
            if (mutate_until_defect(rng, M) > 0)
                tally(M);
            tally(random_op_family(rng, field, 3, 4));
            tally(random_op_family(rng, field, 2, 3));
        }
        CHECK(agree >= 40);
        CHECK(passing >= 10);
        CHECK(failing >= 10);
    }
}

TEST_CASE("bar-side morphism identity agrees with the signed one")
{
    for (const Field& field : {Field::rationals(), Field::prime(5)}) {
        int mutated_failures = 0;
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            Rng rng(seed);
            MinimalPair P = random_minimal_pair(rng, field);
            BarFamily bA = bar_of_ops(P.A), bB = bar_of_ops(P.B);
            CHECK(bar_morphism_check(P.A, P.B, bA, bB, bar_of_morphism(P.A, P.f)).pass());

            AInfMorphism g = P.f;
            MultiOp& g1 = g.comps.at(1);
            const auto& [w, out] = *g1.entries.begin();
            g1.add(w, out.begin()->first, Scalar::one(field));
            bool signed_ok = check_morphism(P.A, P.B, g).pass();
            bool bar_ok = bar_morphism_check(P.A, P.B, bA, bB, bar_of_morphism(P.A, g)).pass();
            CHECK(signed_ok == bar_ok);
            mutated_failures += !bar_ok;
        }
        CHECK(mutated_failures >= 6);
    }
}

TEST_CASE("homotopy identities: zero homotopy separates equal from unequal morphisms")
{
    Field Q = Field::rationals();
    AInfCategory D4 = fixture_D4cat(Q);
    BarFamily bD = bar_of_ops(D4);
    AInfMorphism id = AInfMorphism::identity(D4);
    BarFamily F = bar_of_morphism(D4, id);
    BarFamily H;
    H.bar_degree = -1;

    CHECK(bar_morphism_and_homotopy(D4, D4, bD, bD, F, F, H).pass());
    AInfHomotopy h0;
    CHECK(check_homotopy(D4, D4, id, id, h0).pass());

    AInfMorphism two = id;
    for (auto& [w, out] : two.comps.at(1).entries)
        for (auto& [y, c] : out)
            c += Scalar::one(Q);
    BarFamily G = bar_of_morphism(D4, two);
    CHECK(!bar_morphism_and_homotopy(D4, D4, bD, bD, F, G, H).pass());
    CHECK(!check_homotopy(D4, D4, id, two, h0).pass());
}

TEST_CASE("a morphism corrected by a homotopy is homotopic to the original")
{
    for (const Field& field : {Field::rationals(), Field::prime(5)}) {
        int nonzero_h = 0;
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            Rng rng(seed);
            MinimalPair P = random_minimal_pair(rng, field);
            BarFamily bA = bar_of_ops(P.A), bB = bar_of_ops(P.B);
            BarFamily G = bar_of_morphism(P.A, P.f);
            int top = std::max(P.A.arity_bound + P.B.arity_bound, 3);

            /* Random degree -1 family H with outputs across the object map. */
            BarFamily H;
            H.bar_degree = -1;
            H.arity_bound = 3;
            for (int n = 1; n <= 3; ++n) {
                MultiOp hn;
                hn.arity = n;
                hn.degree = -1;
                for (const Word& w : P.A.words(static_cast<std::size_t>(n))) {
                    int want = P.A.word_degree(w) - n;
                    std::size_t ws = P.f.object_map[P.A.word_src(w)];
                    std::size_t wd = P.f.object_map[P.A.word_dst(w)];
                    for (BasisId y = 0; y < P.B.basis.size(); ++y)
                        if (P.B.basis[y].degree == want && P.B.basis[y].src == ws &&
                            P.B.basis[y].dst == wd && rng.coin())
                            hn.add(w, y, rng.nonzero_scalar(field));
                }
                if (!hn.is_zero())
                    H.comps.emplace(n, std::move(hn));
            }
            nonzero_h += !H.comps.empty();

            /* Assemble F arity by arity so that F - G = b o H + H o b holds
             * by construction; the checker must then accept (F, G, H). */
            BarFamily F;
            F.bar_degree = 0;
            F.arity_bound = top;
            for (int n = 1; n <= top; ++n) {
                MultiOp fn;
                fn.arity = n;
                fn.degree = 0;
                for (const Word& w : P.A.words(static_cast<std::size_t>(n))) {
                    LinComb val;
                    if (const MultiOp* gn = G.comp(n))
                        lin_add(val, gn->apply(w), Scalar::one(field));
                    for (const auto& [v, c] : fg_coderivation_apply(P.A, F, G, H, w))
                        if (const MultiOp* bk = bB.comp(static_cast<int>(v.size())))
                            lin_add(val, bk->apply(v), c);
                    for (int r = 0; r < n; ++r)
                        for (int s = 1; r + s <= n; ++s) {
                            const MultiOp* bs = bA.comp(s);
                            const MultiOp* hu = H.comp(n - s + 1);
                            if (!bs || !hu)
                                continue;
                            for (const auto& [w2, c] :
                                 block_apply(P.A, *bs, static_cast<std::size_t>(r), w, -1))
                                lin_add(val, hu->apply(w2), c);
                        }
                    fn.add(w, val);
                }
                if (!fn.is_zero())
                    F.comps.emplace(n, std::move(fn));
            }

            CHECK(bar_morphism_and_homotopy(P.A, P.B, bA, bB, F, G, H).pass());

            AInfMorphism f2;
            f2.object_map = P.f.object_map;
            f2.arity_bound = top;
            f2.comps = from_bar(P.A, F);
            AInfHomotopy h;
            h.arity_bound = H.arity_bound;
            h.comps = from_bar(P.A, H);
            CHECK(check_homotopy(P.A, P.B, f2, P.f, h).pass());
        }
        CHECK(nonzero_h >= 4);
    }

    /* Morphisms over different object maps cannot be compared. */
    Field Q = Field::rationals();
    AInfCategory E = fixture_E(Q);
    AInfMorphism id = AInfMorphism::identity(E);
    AInfMorphism moved = id;
    std::swap(moved.object_map[0], moved.object_map[1]);
    CHECK_THROWS_AS(check_homotopy(E, E, id, moved, AInfHomotopy{}), input_error);
}
