#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graded.h"
#include "rng.h"

using namespace ainf;

namespace {

const Field Q = Field::rationals();

GradedMap random_map(Rng& rng, const Field& f, const GradedSpace& src, const GradedSpace& dst,
                     int degree)
{
    GradedMap m = GradedMap::zero(f, src, dst, degree);
    for (const auto& [q, names] : src.by_degree) {
        std::size_t rows = dst.dim(q + degree), cols = names.size();
        if (rows == 0 || cols == 0)
            continue;
        Matrix b(f, rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                b.at(i, j) = rng.scalar(f);
        m.set_block(q, std::move(b));
    }
    return m;
}

/* Independent Koszul-sign oracle: lay out the symbols f_1..f_k x_1..x_k and
 * bubble each map rightward to sit just left of its argument, counting each
 * transposition of a map past an element as deg(map)*deg(element). */
int sign_oracle(const std::vector<int>& map_degs, const std::vector<int>& elem_degs)
{
    struct Sym {
        bool is_map;
        std::size_t id;
    };
    std::vector<Sym> line;
    for (std::size_t j = 0; j < map_degs.size(); ++j)
        line.push_back({true, j});
    for (std::size_t i = 0; i < elem_degs.size(); ++i)
        line.push_back({false, i});

    long exponent = 0;
    /* Move maps right to left: f_k first, to just before x_k, and so on. */
    for (std::size_t j = map_degs.size(); j-- > 0;) {
        std::size_t pos = 0;
        while (!(line[pos].is_map && line[pos].id == j))
            ++pos;
        std::size_t target = 0;
        while (!(!line[target].is_map && line[target].id == j))
            ++target;
        while (pos + 1 < target) {
            if (!line[pos + 1].is_map)
                exponent += static_cast<long>(map_degs[j]) * elem_degs[line[pos + 1].id];
            std::swap(line[pos], line[pos + 1]);
            ++pos;
        }
    }
    return exponent % 2 == 0 ? 1 : -1;
}

}  // namespace

TEST_CASE("graded space basics and suspension")
{
    GradedSpace v;
    v.add(0, "x");
    v.add(1, "y");
    v.add(1, "z");
    CHECK(v.total_dim() == 3);
    CHECK(v.dim(1) == 2);
    CHECK(v.find("z") == std::pair<int, std::size_t>{1, 1});
    CHECK_THROWS_AS(v.add(2, "x"), input_error);
    CHECK_THROWS_AS(v.find("nope"), input_error);

    GradedSpace sv = suspend(v, 1);
    CHECK(sv.dim(-1) == 1);
    CHECK(sv.dim(0) == 2);
    CHECK(suspend(sv, -1) == v);
    CHECK(suspend(v, 0) == v);
    CHECK(suspend(suspend(v, 2), -2) == v);
}

TEST_CASE("graded map compose, identity, suspension")
{
    Rng rng(11);
    Field F5 = Field::prime(5);
    GradedSpace v;
    v.add(0, "a0");
    v.add(0, "a1");
    v.add(1, "b0");
    v.add(2, "c0");

    GradedMap id = GradedMap::identity(F5, v);
    GradedMap f = random_map(rng, F5, v, v, 1);
    CHECK(f.compose(id) == f);
    CHECK(id.compose(f) == f);
    CHECK(GradedMap::zero(F5, v, v, 0).compose(f).is_zero());

    /* Composition equals per-basis evaluation. */
    GradedMap g = random_map(rng, F5, v, v, 1);
    GradedMap fg = f.compose(g);
    for (const auto& [q, names] : v.by_degree)
        for (std::size_t k = 0; k < names.size(); ++k) {
            GSElem e = GSElem::basis(F5, v, q, k);
            Vec via_g = g.block(q).apply(e.coords);
            Vec direct = fg.block(q).apply(e.coords);
            Vec two_step = f.block(q + 1).apply(via_g);
            CHECK(direct == two_step);
        }

    /* Suspension of maps is invertible and shifts blocks. */
    GradedMap sf = suspend(f, 1);
    CHECK(sf.src == suspend(v, 1));
    CHECK(suspend(sf, -1) == f);
    CHECK(sf.block(-1) == f.block(0));
}

TEST_CASE("koszul_apply matches the tensor differential formula")
{
    /* V: x in degree 1, y in degree 2, plus images mx (deg 2), my (deg 3). */
    GradedSpace v;
    v.add(1, "x");
    v.add(2, "y");
    v.add(2, "mx");
    v.add(3, "my");
    GradedMap m1 = GradedMap::zero(Q, v, v, 1);
    {
        Matrix b1(Q, 2, 1);  /* deg 1: x -> mx */
        b1.at(1, 0) = Scalar::one(Q);
        m1.set_block(1, b1);
        Matrix b2(Q, 1, 2);  /* deg 2: y -> my, mx -> 0 */
        b2.at(0, 0) = Scalar::one(Q);
        m1.set_block(2, b2);
    }
    GradedMap one = GradedMap::identity(Q, v);

    GSElem x = GSElem::basis(Q, v, 1, 0);
    GSElem y = GSElem::basis(Q, v, 2, 0);

    /* (m1 (x) 1)(x (x) y) = m1(x) (x) y, no sign. */
    TensorComb t1 = koszul_apply({m1, one}, {x, y});
    REQUIRE(t1.size() == 1);
    {
        PureTensor key{{2, 1}, {2, 0}};  /* mx (x) y */
        REQUIRE(t1.count(key) == 1);
        CHECK(t1[key].is_one());
    }

    /* (1 (x) m1)(x (x) y) = (-1)^{|x|} x (x) m1(y) = -(x (x) my). */
    TensorComb t2 = koszul_apply({one, m1}, {x, y});
    REQUIRE(t2.size() == 1);
    {
        PureTensor key{{1, 0}, {3, 0}};  /* x (x) my */
        REQUIRE(t2.count(key) == 1);
        CHECK(t2[key].str() == "-1");
    }

    /* (1 (x) 1) is the identity with sign +1. */
    TensorComb t3 = koszul_apply({one, one}, {x, y});
    REQUIRE(t3.size() == 1);
    PureTensor key{{1, 0}, {2, 0}};
    CHECK(t3[key].is_one());
}

TEST_CASE("koszul sign equals the permutation-count oracle")
{
    Rng rng(97);
    Field F7 = Field::prime(7);
    /* One basis vector in each degree 0..3 so every (map degree, word) pair is
     * realizable with unit coefficients. */
    GradedSpace v;
    for (int q = 0; q <= 5; ++q)
        v.add(q, "e" + std::to_string(q));

    for (int trial = 0; trial < 200; ++trial) {
        std::size_t k = 2 + rng.below(2); /* 2 or 3 factors */
        std::vector<int> map_degs, elem_degs;
        std::vector<GradedMap> fs;
        std::vector<GSElem> word;
        for (std::size_t j = 0; j < k; ++j) {
            int ed = static_cast<int>(rng.below(3));
            int md = static_cast<int>(rng.below(3) % 3);
            if (ed + md > 5)
                md = 0;
            elem_degs.push_back(ed);
            map_degs.push_back(md);
            GradedMap f = GradedMap::zero(F7, v, v, md);
            Matrix b(F7, 1, 1);
            b.at(0, 0) = Scalar::one(F7);
            f.set_block(ed, b);  /* e_ed -> e_{ed+md} */
            fs.push_back(f);
            word.push_back(GSElem::basis(F7, v, ed, 0));
        }
        TensorComb res = koszul_apply(fs, word);
        REQUIRE(res.size() == 1);
        int expected = sign_oracle(map_degs, elem_degs);
        CHECK(res.begin()->second == Scalar::from_int(F7, expected));
    }
}

TEST_CASE("homology of the zero differential is the space itself")
{
    GradedSpace v;
    v.add(0, "x");
    v.add(2, "y");
    GradedMap d = GradedMap::zero(Q, v, v, 1);
    Homology hom = complex_homology(d);
    CHECK(hom.H.dim(0) == 1);
    CHECK(hom.H.dim(2) == 1);
    CHECK(hom.H.total_dim() == 2);
    CHECK(hom.p.compose(hom.i) == GradedMap::identity(Q, hom.H));
    CHECK(hom.h.is_zero());
    /* i p = identity here as well since nothing is contractible. */
    CHECK(hom.i.compose(hom.p) == GradedMap::identity(Q, v));
}

TEST_CASE("homology of a contractible two-term complex vanishes")
{
    GradedSpace v;
    v.add(0, "x");
    v.add(1, "y");
    GradedMap d = GradedMap::zero(Q, v, v, 1);
    Matrix b(Q, 1, 1);
    b.at(0, 0) = Scalar::one(Q);
    d.set_block(0, b);
    Homology hom = complex_homology(d);
    CHECK(hom.H.total_dim() == 0);
    /* 1 - i p = d h + h d with i p = 0. */
    GradedMap lhs = GradedMap::identity(Q, v);
    GradedMap rhs = d.compose(hom.h) + hom.h.compose(d);
    CHECK(lhs == rhs);
}

TEST_CASE("homology splitting identities on a three-term complex")
{
    /* u0,u1 (deg 0) -> v0,v1 (deg 1) -> w0 (deg 2): d u0 = v0, d v1 = w0. */
    GradedSpace v;
    v.add(0, "u0");
    v.add(0, "u1");
    v.add(1, "v0");
    v.add(1, "v1");
    v.add(2, "w0");
    GradedMap d = GradedMap::zero(Q, v, v, 1);
    {
        Matrix b0(Q, 2, 2);
        b0.at(0, 0) = Scalar::one(Q);
        d.set_block(0, b0);
        Matrix b1(Q, 1, 2);
        b1.at(0, 1) = Scalar::one(Q);
        d.set_block(1, b1);
    }
    Homology hom = complex_homology(d);
    CHECK(hom.H.total_dim() == 1);
    CHECK(hom.H.dim(0) == 1);

    CHECK(hom.p.compose(hom.i) == GradedMap::identity(Q, hom.H));
    GradedMap defect = GradedMap::identity(Q, v) - hom.i.compose(hom.p);
    CHECK(defect == d.compose(hom.h) + hom.h.compose(d));
    CHECK(hom.h.compose(hom.i).is_zero());
    CHECK(hom.p.compose(hom.h).is_zero());
    CHECK(hom.h.compose(hom.h).is_zero());

    /* On cycles, i p - 1 lands in boundaries (p computes the class). */
    for (const auto& [q, names] : v.by_degree) {
        Matrix bmat = Matrix::from_cols(Q, names.size(), hom.boundaries[q]);
        Matrix def = defect.block(q);
        for (const Vec& z : hom.cycles[q])
            CHECK(bmat.solve(def.apply(z)).has_value());
    }
}

TEST_CASE("homology splitting identities on random complexes")
{
    Rng rng(1234);
    Field F3 = Field::prime(3);
    for (int trial = 0; trial < 25; ++trial) {
        GradedSpace v;
        for (int q = 0; q <= 3; ++q) {
            std::size_t dim = rng.below(3);
            for (std::size_t k = 0; k < dim; ++k)
                v.add(q, "e" + std::to_string(q) + "_" + std::to_string(k));
        }
        if (v.total_dim() == 0)
            continue;
        /* Sample d with d^2 = 0 degree by degree: block at q must kill the
         * image of the block at q-1, i.e. columns of d_{q-1} solve to zero. */
        GradedMap d = GradedMap::zero(F3, v, v, 1);
        for (int q = 0; q <= 3; ++q) {
            std::size_t rows = v.dim(q + 1), cols = v.dim(q);
            if (rows == 0 || cols == 0)
                continue;
            Matrix prev = d.block(q - 1); /* already chosen */
            /* Random candidates until d_q * d_{q-1} = 0 (retry; spaces are tiny). */
            for (;;) {
                Matrix b(F3, rows, cols);
                for (std::size_t i = 0; i < rows; ++i)
                    for (std::size_t j = 0; j < cols; ++j)
                        b.at(i, j) = rng.scalar(F3);
                if ((b * prev).is_zero()) {
                    d.set_block(q, b);
                    break;
                }
            }
        }
        Homology hom = complex_homology(d);
        CHECK(hom.p.compose(hom.i) == GradedMap::identity(F3, hom.H));
        GradedMap defect = GradedMap::identity(F3, v) - hom.i.compose(hom.p);
        CHECK(defect == d.compose(hom.h) + hom.h.compose(d));
        CHECK(hom.h.compose(hom.i).is_zero());
        CHECK(hom.p.compose(hom.h).is_zero());
        CHECK(hom.h.compose(hom.h).is_zero());
    }
}

TEST_CASE("homology rejects non-squaring differentials and honors preferences")
{
    GradedSpace v;
    v.add(0, "x");
    v.add(1, "y");
    v.add(2, "z");
    GradedMap bad = GradedMap::zero(Q, v, v, 1);
    Matrix b(Q, 1, 1);
    b.at(0, 0) = Scalar::one(Q);
    bad.set_block(0, b);
    bad.set_block(1, b);
    CHECK_THROWS_AS(complex_homology(bad), input_error);

    /* Preferred representative is honored and named. */
    GradedSpace w;
    w.add(0, "x0");
    w.add(0, "x1");
    GradedMap zero = GradedMap::zero(Q, w, w, 1);
    Vec pref{Scalar::from_int(Q, 2), Scalar::from_int(Q, 3)};
    Homology hom = complex_homology(zero, {{0, {{"unit", pref}}}});
    CHECK(hom.H.dim(0) == 2);
    CHECK(hom.H.by_degree.at(0)[0] == "unit");
    CHECK(hom.i.block(0).col(0) == pref);

    /* Non-cycles are rejected as preferences. */
    GradedMap d = GradedMap::zero(Q, v, v, 1);
    d.set_block(0, b);
    Vec notcycle{Scalar::one(Q)};
    CHECK_THROWS_AS(complex_homology(d, {{0, {{"bad", notcycle}}}}), input_error);
}
