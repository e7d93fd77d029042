#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ltower/conic.hpp"
#include "ltower/error.hpp"
#include "ltower/factor.hpp"
#include "oracles.hpp"

using namespace ltower;

namespace {

ConicPoint random_conic_point(const ConicParams& c, Rng& rng) {
    for (;;)
        if (auto pt = conic_point_with_x(c.field.random(rng), c)) return *pt;
}

ConicPoint repeated_add(const ConicPoint& pt, std::size_t n, const ConicParams& c) {
    ConicPoint acc = conic_neutral;
    for (std::size_t k = 0; k < n; ++k) acc = conic_add(acc, pt, c);
    return acc;
}

// Elements a + b Y of F_p[x][Y]/(Y^2 - x Y + 1), where Y + 1/Y = x.
struct Laurent {
    DensePoly a, b;
};

Laurent laurent_mul(const Laurent& u, const Laurent& v) {
    const DensePoly x = DensePoly::x(u.a.field());
    // Y^2 = x Y - 1
    DensePoly bb = u.b * v.b;
    return {u.a * v.a - bb, u.a * v.b + u.b * v.a + x * bb};
}

Laurent laurent_pow(const Laurent& u, std::size_t n) {
    const PrimeField& f = u.a.field();
    Laurent r{DensePoly::constant(f, 1), DensePoly(f)};
    for (std::size_t k = 0; k < n; ++k) r = laurent_mul(r, u);
    return r;
}

}  // namespace

TEST_CASE("conic group law examples") {
    PrimeField f(5);
    ConicParams c = ConicParams::make(f);
    CHECK(c.delta == 2);
    ConicPoint pt{1, 1};
    REQUIRE(on_conic(pt, c));
    CHECK(conic_add(pt, conic_neutral, c) == pt);
    CHECK(conic_add(pt, pt, c) == ConicPoint{4, 1});
    CHECK(conic_add(pt, conic_neg(pt, c), c) == conic_neutral);
    CHECK(repeated_add(pt, 3, c) == ConicPoint{3, 0});
}

TEST_CASE("abscissa arithmetic examples") {
    PrimeField f(5);
    CHECK(double_x(f, 2) == 2);
    CHECK(double_x(f, 1) == 4);
    CHECK(double_x(f, f.neg(2)) == 2);
    CHECK(diffadd_x(f, 4, 1, 1) == 3);
    CHECK(diffadd_x(f, 3, 3, 2) == double_x(f, 3));
    CHECK(diffadd_x(f, 3, 2, 3) == 3);
    CHECK(ladder_x(f, BigExponent(1), 3) == 3);
    CHECK(ladder_x(f, BigExponent(2), 3) == double_x(f, 3));
    CHECK(ladder_x(f, BigExponent(6), 1) == 2);
    CHECK(ladder_x(f, BigExponent(0), 1) == 2);
}

TEST_CASE("group axioms on sampled points") {
    Rng rng(1);
    for (u64 p : {5ull, 13ull, 101ull, 1000003ull}) {
        PrimeField f(p);
        ConicParams c = ConicParams::make(f);
        for (int t = 0; t < 1000; ++t) {
            ConicPoint a = random_conic_point(c, rng), b = random_conic_point(c, rng), d = random_conic_point(c, rng);
            ConicPoint ab = conic_add(a, b, c);
            REQUIRE(on_conic(ab, c));
            REQUIRE(ab == conic_add(b, a, c));
            REQUIRE(conic_add(ab, d, c) == conic_add(a, conic_add(b, d, c), c));
            REQUIRE(conic_add(a, conic_neg(a, c), c) == conic_neutral);
        }
    }
}

TEST_CASE("torus order and ladder against repeated addition") {
    Rng rng(2);
    for (u64 p : {5ull, 13ull, 101ull, 1000003ull}) {
        PrimeField f(p);
        ConicParams c = ConicParams::make(f);
        for (int t = 0; t < 100; ++t) {
            ConicPoint pt = random_conic_point(c, rng);
            REQUIRE(ladder_x(f, BigExponent(p + 1), pt.x) == 2);
            ConicPoint acc = conic_neutral;
            for (std::size_t n = 1; n <= 50; ++n) {
                acc = conic_add(acc, pt, c);
                REQUIRE(ladder_x(f, BigExponent(n), pt.x) == acc.x);
            }
        }
    }
}

TEST_CASE("division polynomials give scalar multiplication") {
    Rng rng(3);
    PrimeField f(101);
    ConicParams c = ConicParams::make(f);
    for (std::size_t n = 1; n <= 30; ++n) {
        DensePoly pn = pell_poly(f, n), rn = pell_ordinate_poly(f, n);
        for (int t = 0; t < 5; ++t) {
            ConicPoint pt = random_conic_point(c, rng);
            ConicPoint want = repeated_add(pt, n, c);
            CHECK(pn.evaluate(pt.x) == want.x);
            CHECK(f.mul(pt.y, rn.evaluate(pt.x)) == want.y);
        }
    }
}

TEST_CASE("Pell polynomials") {
    PrimeField f(5);
    CHECK(pell_poly_recurrence(f, 0) == DensePoly::constant(f, 2));
    CHECK(pell_poly(f, 0) == DensePoly::constant(f, 2));
    CHECK(pell_poly(f, 1) == DensePoly::x(f));
    CHECK(pell_poly(f, 2) == DensePoly(f, {-2, 0, 1}));
    CHECK(pell_poly(f, 3) == DensePoly(f, {0, -3, 0, 1}));
    CHECK(pell_poly_recurrence(f, 4) == DensePoly(f, {2, 0, -4, 0, 1}));
    PrimeField f101(101);
    CHECK(pell_poly(f101, 5) == DensePoly(f101, {0, 5, 0, -5, 0, 1}));
    CHECK(pell_poly_recurrence(f101, 5) == DensePoly(f101, {0, 5, 0, -5, 0, 1}));
    for (u64 p : {5ull, 7ull, 101ull}) {
        PrimeField fp(p);
        for (std::size_t n = 0; n <= 200; ++n) REQUIRE(pell_poly(fp, n) == pell_poly_recurrence(fp, n));
    }
}

TEST_CASE("Laurent identity P_n(Y + 1/Y) = Y^n + Y^-n") {
    for (u64 p : {5ull, 101ull}) {
        PrimeField f(p);
        const DensePoly x = DensePoly::x(f);
        Laurent y{DensePoly(f), DensePoly::constant(f, 1)};
        Laurent y_inv{x, -DensePoly::constant(f, 1)};  // 1/Y = x - Y
        for (std::size_t n = 0; n <= 50; ++n) {
            Laurent s = laurent_pow(y, n), t = laurent_pow(y_inv, n);
            REQUIRE((s.b + t.b).is_zero());
            REQUIRE(s.a + t.a == pell_poly(f, n));
        }
    }
}

TEST_CASE("T2 generators") {
    PrimeField f5(5);
    CHECK(is_t2_generator(f5, 3, 1));
    CHECK_FALSE(is_t2_generator(f5, 3, 2));
    // Exhaustive check of the two predicates over F_5.
    ConicParams c = ConicParams::make(f5);
    for (u64 a = 0; a < 5; ++a) {
        auto pt = conic_point_with_x(a, c);
        bool nonres = (a * a + 21) % 5 != 0 && oracle::powmod((a * a + 21) % 5, 2, 5) == 4;
        bool ok = pt && nonres && !(repeated_add(*pt, 2, c) == conic_neutral);
        CHECK(is_t2_generator(f5, 3, a) == ok);
    }
    for (u64 seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        for (auto [p, ell] : {std::pair<u64, u64>{5, 3}, {13, 7}, {101, 17}}) {
            PrimeField f(p);
            T2Init init = find_t2_generator(f, ell, rng);
            u64 disc = f.sub(f.mul(init.alpha, init.alpha), 4);
            REQUIRE(disc != 0);
            REQUIRE(oracle::powmod(disc, (p - 1) / 2, p) == p - 1);
            REQUIRE(ladder_x(f, BigExponent((p + 1) / ell), init.alpha) != 2);
        }
    }
    Rng rng(0);
    CHECK_THROWS_AS(find_t2_generator(PrimeField(7), 3, rng), Error);
}

TEST_CASE("T2 tower polynomials") {
    PrimeField f(5);
    T2Init init{ConicParams::make(f), 1, 3};
    DensePoly q1 = t2_level_poly(init, 1);
    CHECK(q1 == DensePoly(f, {-1, -3, 0, 1}));
    for (u64 x = 0; x < 5; ++x) CHECK(q1.evaluate(x) != 0);
    CHECK(t2_level_poly(init, 0) == DensePoly(f, {-1, 1}));

    FiberRelation rel = t2_relation(init);
    CHECK(rel.f == DensePoly(f, {0, -3, 0, 1}));
    CHECK(rel.g == DensePoly::constant(f, 1));

    for (std::size_t i = 1; i <= 4; ++i) {
        DensePoly qi = t2_level_poly(init, i);
        CHECK(qi.degree() == static_cast<long>(std::pow(3, i)));
        CHECK(is_irreducible(qi));
        DensePoly prev = t2_level_poly(init, i - 1);
        const std::size_t n = static_cast<std::size_t>(prev.degree()) + 1;
        CHECK(compose(BiPoly::from_x_poly(prev, n, 3), rel.f, rel.g, n).monic() == qi);
    }

    Rng rng(5);
    PrimeField f13(13);
    T2Init init13 = find_t2_generator(f13, 7, rng);
    for (std::size_t i = 1; i <= 4; ++i) CHECK(is_irreducible(t2_level_poly(init13, i)));
}
