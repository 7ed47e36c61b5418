#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "matrix.h"
#include "rng.h"
#include "scalar.h"

using namespace ainf;

TEST_CASE("field parsing and validation")
{
    CHECK(Field::parse("Q").is_rational());
    CHECK(Field::parse("F5").p == 5);
    CHECK(Field::parse("F2").p == 2);
    CHECK(Field::parse("F101").p == 101);
    CHECK_THROWS_AS(Field::parse("F4"), input_error);
    CHECK_THROWS_AS(Field::parse("F1"), input_error);
    CHECK_THROWS_AS(Field::parse("F0"), input_error);
    CHECK_THROWS_AS(Field::parse("R"), input_error);
    CHECK_THROWS_AS(Field::parse("F"), input_error);
    CHECK_THROWS_AS(Field::parse("Fx"), input_error);
    CHECK(Field::rationals().name() == "Q");
    CHECK(Field::prime(7).name() == "F7");
}

TEST_CASE("rational scalar arithmetic")
{
    Field Q = Field::rationals();
    Scalar a = Scalar::parse(Q, "1/3");
    Scalar b = Scalar::parse(Q, "1/6");
    CHECK((a + b).str() == "1/2");
    CHECK((a - b).str() == "1/6");
    CHECK((a * b).str() == "1/18");
    CHECK((a / b).str() == "2");
    CHECK((-a).str() == "-1/3");
    CHECK(a.inverse().str() == "3");
    CHECK(Scalar::parse(Q, "-5/10").str() == "-1/2");
    CHECK(Scalar::parse(Q, "4/2").str() == "2");
    CHECK(Scalar::parse(Q, "-2").str() == "-2");
    CHECK(Scalar::zero(Q).is_zero());
    CHECK(Scalar::one(Q).is_one());
    CHECK(Scalar::from_int(Q, -7).str() == "-7");
    CHECK_THROWS_AS(Scalar::parse(Q, "1/0"), input_error);
    CHECK_THROWS_AS(Scalar::parse(Q, "a"), input_error);
    CHECK_THROWS_AS(Scalar::parse(Q, ""), input_error);
    CHECK_THROWS_AS(Scalar::zero(Q).inverse(), internal_error);
}

TEST_CASE("prime field scalar arithmetic")
{
    Field F7 = Field::prime(7);
    Scalar three = Scalar::from_int(F7, 3);
    Scalar five = Scalar::from_int(F7, 5);
    CHECK((three * five).is_one());
    CHECK(three.inverse() == five);
    CHECK((three + five).str() == "1");
    CHECK((three - five).str() == "5");
    CHECK((-three).str() == "4");
    CHECK(Scalar::from_int(F7, -1).str() == "6");
    CHECK(Scalar::parse(F7, "2/3").str() == "3");  /* 2 * 3^{-1} = 2 * 5 = 10 = 3 */
    CHECK(Scalar::parse(F7, "-1/2").str() == "3"); /* 6 * 4 = 24 = 3 */
    CHECK_THROWS_AS(Scalar::parse(F7, "1/7"), input_error);

    /* Products near 2^64 must not overflow. */
    Field Fbig = Field::prime(2147483647ULL);
    Scalar m1 = Scalar::from_int(Fbig, -1);
    CHECK((m1 * m1).is_one());
}

TEST_CASE("mixing fields is an internal error")
{
    Scalar q = Scalar::one(Field::rationals());
    Scalar f = Scalar::one(Field::prime(5));
    CHECK_THROWS_AS((void)(q + f), internal_error);
}

TEST_CASE("rref pivots are the earliest independent columns")
{
    Field Q = Field::rationals();
    /* Columns: c0, c1 = 2*c0, c2 independent, c3 = c0 + c2. */
    Matrix m(Q, 3, 4);
    auto set = [&](std::size_t i, std::size_t j, long v) { m.at(i, j) = Scalar::from_int(Q, v); };
    set(0, 0, 1); set(0, 1, 2); set(0, 2, 0); set(0, 3, 1);
    set(1, 0, 2); set(1, 1, 4); set(1, 2, 1); set(1, 3, 3);
    set(2, 0, 3); set(2, 1, 6); set(2, 2, 0); set(2, 3, 3);
    auto r = m.rref();
    REQUIRE(r.pivots == std::vector<std::size_t>{0, 2});
    CHECK(m.rank() == 2);

    auto ker = m.kernel_basis();
    REQUIRE(ker.size() == 2);
    /* Every kernel vector really is in the kernel. */
    for (const auto& v : ker) {
        Vec image = m.apply(v);
        for (const auto& x : image)
            CHECK(x.is_zero());
    }
    /* Free columns are 1 and 3; each basis vector has a unit there. */
    CHECK(ker[0][1].is_one());
    CHECK(ker[1][3].is_one());
}

TEST_CASE("solve and inverse")
{
    Field Q = Field::rationals();
    Matrix a(Q, 2, 2);
    a.at(0, 0) = Scalar::from_int(Q, 1);
    a.at(0, 1) = Scalar::from_int(Q, 2);
    a.at(1, 0) = Scalar::from_int(Q, 3);
    a.at(1, 1) = Scalar::from_int(Q, 4);

    Matrix inv = a.inverse();
    CHECK(a * inv == Matrix::identity(Q, 2));
    CHECK(inv * a == Matrix::identity(Q, 2));
    CHECK(inv.at(0, 0).str() == "-2");
    CHECK(inv.at(0, 1).str() == "1");
    CHECK(inv.at(1, 0).str() == "3/2");
    CHECK(inv.at(1, 1).str() == "-1/2");

    Vec b{Scalar::from_int(Q, 5), Scalar::from_int(Q, 6)};
    auto x = a.solve(b);
    REQUIRE(x.has_value());
    CHECK(a.apply(*x) == b);

    /* Inconsistent system. */
    Matrix s(Q, 2, 1);
    s.at(0, 0) = Scalar::one(Q);
    s.at(1, 0) = Scalar::from_int(Q, 2);
    Vec bad{Scalar::one(Q), Scalar::from_int(Q, 3)};
    CHECK(!s.solve(bad).has_value());
    Vec good{Scalar::from_int(Q, 2), Scalar::from_int(Q, 4)};
    auto y = s.solve(good);
    REQUIRE(y.has_value());
    CHECK((*y)[0].str() == "2");

    CHECK_THROWS_AS(Matrix(Q, 2, 2).inverse(), internal_error);
}

TEST_CASE("matrix algebra over a prime field")
{
    Field F5 = Field::prime(5);
    Matrix a(F5, 2, 2);
    a.at(0, 0) = Scalar::from_int(F5, 2);
    a.at(0, 1) = Scalar::from_int(F5, 3);
    a.at(1, 0) = Scalar::from_int(F5, 1);
    a.at(1, 1) = Scalar::from_int(F5, 1); /* det = 2 - 3 = 4 mod 5 */
    CHECK(a.rank() == 2);
    CHECK(a * a.inverse() == Matrix::identity(F5, 2));

    Matrix singular(F5, 2, 2);
    singular.at(0, 0) = Scalar::from_int(F5, 1);
    singular.at(0, 1) = Scalar::from_int(F5, 2);
    singular.at(1, 0) = Scalar::from_int(F5, 3);
    singular.at(1, 1) = Scalar::from_int(F5, 1); /* det = 1 - 6 = 0 mod 5 */
    CHECK(singular.rank() == 1);
    CHECK(singular.kernel_basis().size() == 1);
}

TEST_CASE("rng determinism")
{
    Rng r1(42), r2(42);
    for (int i = 0; i < 100; ++i)
        CHECK(r1.next() == r2.next());
    Rng r3(42);
    for (int i = 0; i < 1000; ++i) {
        std::uint64_t v = r3.below(17);
        CHECK(v < 17);
    }
    Rng r4(7);
    for (int i = 0; i < 100; ++i) {
        std::int64_t v = r4.range(-3, 3);
        CHECK(v >= -3);
        CHECK(v <= 3);
    }
    Rng r5(1);
    CHECK(!r5.nonzero_scalar(Field::prime(2)).is_zero());
}
