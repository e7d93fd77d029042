#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ltower/conic.hpp"
#include "ltower/error.hpp"
#include "ltower/factor.hpp"
#include "ltower/liftpush.hpp"
#include "oracles.hpp"

using namespace ltower;

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
}

// sum_i P_i f^i g^{n-1-i} with plain repeated products.
DensePoly naive_compose(const BiPoly& p, const DensePoly& f, const DensePoly& g, std::size_t n) {
    const u64 q = f.field().modulus();
    oracle::Vec acc;
    for (std::size_t i = 0; i < n; ++i) {
        oracle::Vec term = p.row(i).coeffs();
        for (std::size_t k = 0; k < i; ++k) term = oracle::mul(term, f.coeffs(), q);
        for (std::size_t k = 0; k + 1 + i < n; ++k) term = oracle::mul(term, g.coeffs(), q);
        acc = oracle::add(acc, term, q);
    }
    return DensePoly(f.field(), acc);
}

DensePoly random_monic(const PrimeField& f, std::size_t deg, Rng& rng) {
    return DensePoly::random(f, deg, rng) + DensePoly::monomial(f, 1, deg);
}

// A random relation with deg g = ell - 1 and gcd(f, g) = 1.
FiberRelation random_relation(const PrimeField& f, std::size_t ell, Rng& rng) {
    for (;;) {
        DensePoly fp = random_monic(f, ell, rng);
        DensePoly gp = DensePoly::random(f, ell, rng);
        if (gp.is_zero() || gp.degree() >= static_cast<long>(ell)) continue;
        if (!gcd(fp, gp).is_one()) continue;
        return FiberRelation::make(fp, gp);
    }
}

// Product of two grids reduced modulo <prev(X), f(Y) - X g(Y)>, computed in
// F_p[X][Y] directly: the independent side of the homomorphism check.
BiPoly bivariate_mul(const BiPoly& a, const BiPoly& b, const DensePoly& prev, const FiberRelation& rel) {
    const PrimeField& fld = a.field();
    const std::size_t ell = rel.ell, n = a.rows();
    std::vector<DensePoly> ya(ell, DensePoly(fld)), yb(ell, DensePoly(fld));
    for (std::size_t j = 0; j < ell; ++j) {
        ya[j] = a.column(j);
        yb[j] = b.column(j);
    }
    std::vector<DensePoly> prod(2 * ell - 1, DensePoly(fld));
    for (std::size_t i = 0; i < ell; ++i)
        for (std::size_t j = 0; j < ell; ++j) prod[i + j] += ya[i] * yb[j];
    // T as a polynomial in Y with coefficients in F_p[X]: f_k - X g_k.
    const DensePoly x = DensePoly::x(fld);
    std::vector<DensePoly> t(ell + 1, DensePoly(fld));
    for (std::size_t k = 0; k <= ell; ++k)
        t[k] = DensePoly::constant(fld, rel.f[k]) - x * DensePoly::constant(fld, rel.g[k]);
    for (std::size_t k = prod.size(); k-- > ell;) {
        DensePoly c = prod[k];
        for (std::size_t s = 0; s <= ell; ++s) prod[k - ell + s] -= c * t[s];
    }
    BiPoly out(fld, n, ell);
    for (std::size_t j = 0; j < ell; ++j) {
        DensePoly r = prod[j] % prev;
        for (std::size_t i = 0; i < n; ++i) out.set(i, j, r[i]);
    }
    return out;
}

}  // namespace

TEST_CASE("compose examples") {
    PrimeField f(5);
    Rng rng(1);
    DensePoly fy(f, {0, -3, 0, 1}), one = DensePoly::constant(f, 1);
    BiPoly single = BiPoly::random(f, 1, 3, rng);
    CHECK(compose(single, fy, one, 1) == single.row(0));

    BiPoly px(f, 2, 3);
    px.set(1, 0, 1);  // P = X
    DensePoly g = DensePoly::random(f, 3, rng);
    CHECK(compose(px, fy, g, 2) == fy);

    BiPoly p(f, 2, 3);
    p.set(0, 1, 1);  // Y
    p.set(1, 0, 1);  // X
    DensePoly q = compose(p, fy, one, 2);
    CHECK(q == DensePoly(f, {0, -2, 0, 1}));
    CHECK(decompose(q, FiberRelation::make(fy, one), 2) == p);
}

TEST_CASE("fiber relation validation") {
    PrimeField f(7);
    CHECK_THROWS_AS(FiberRelation::make(DensePoly(f, {1, 2}), DensePoly::constant(f, 1)), Error);
    CHECK_THROWS_AS(FiberRelation::make(DensePoly(f, {0, 0, 1}), DensePoly(f, {0, 1})), Error);
    FiberRelation rel = FiberRelation::make(DensePoly(f, {1, 0, 1}), DensePoly(f, {3, 1}));
    CHECK(((rel.h * rel.g) % rel.f).is_one());
}

TEST_CASE("compose agrees with the naive sum and is linear") {
    Rng rng(2);
    for (u64 p : {5ull, 101ull}) {
        PrimeField f(p);
        for (std::size_t ell : {3u, 5u}) {
            for (std::size_t n : {1u, 2u, 3u, 7u, 10u}) {
                FiberRelation rel = random_relation(f, ell, rng);
                BiPoly a = BiPoly::random(f, n, ell, rng), b = BiPoly::random(f, n, ell, rng);
                DensePoly ca = compose(a, rel.f, rel.g, n);
                CHECK(ca == naive_compose(a, rel.f, rel.g, n));
                u64 s = f.random(rng), t = f.random(rng);
                BiPoly comb(f, n, ell);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < ell; ++j)
                        comb.set(i, j, f.add(f.mul(s, a.at(i, j)), f.mul(t, b.at(i, j))));
                CHECK(compose(comb, rel.f, rel.g, n) == scale(ca, s) + scale(compose(b, rel.f, rel.g, n), t));
            }
        }
    }
}

TEST_CASE("compose and decompose are mutually inverse") {
    Rng rng(3);
    PrimeField f(101);
    for (std::size_t ell : {3u, 5u, 7u}) {
        for (std::size_t e = 1; e <= 3; ++e) {
            const std::size_t n = ipow(ell, e);
            for (int t = 0; t < 50; ++t) {
                FiberRelation rel = t % 5 == 0 ? FiberRelation::make(random_monic(f, ell, rng), DensePoly::constant(f, 1 + rng() % 100))
                                               : random_relation(f, ell, rng);
                BiPoly a = BiPoly::random(f, n, ell, rng);
                DensePoly q = compose(a, rel.f, rel.g, n);
                REQUIRE(q.degree() < static_cast<long>(ell * n));
                BiPoly back = decompose(q, rel, n);
                REQUIRE(back.rows() == n);
                REQUIRE(back.cols() == ell);
                REQUIRE(back == a);
                DensePoly r = DensePoly::random(f, ell * n, rng);
                REQUIRE(compose(decompose(r, rel, n), rel.f, rel.g, n) == r);
            }
        }
    }
    FiberRelation rel = random_relation(f, 3, rng);
    CHECK_THROWS_AS(decompose(DensePoly::monomial(f, 1, 9), rel, 3), Error);
}

TEST_CASE("lift and push on a Pell-conic tower") {
    PrimeField f(5);
    Rng rng(4);
    T2Init init{ConicParams::make(f), 1, 3};
    FiberRelation rel = t2_relation(init);
    for (std::size_t i = 1; i <= 4; ++i) {
        const std::size_t n = ipow(3, i - 1);
        DensePoly prev = t2_level_poly(init, i - 1);
        ModulusContext s(t2_level_poly(init, i));
        FiberScaling sc = fiber_scaling(rel, s, n);

        BiPoly constant(f, n, 3);
        constant.set(0, 0, 3);
        CHECK(lift_fiber(constant, rel, s, n, sc) == DensePoly::constant(f, 3));
        CHECK(push_fiber(DensePoly::constant(f, 3), rel, s, n, sc) == constant);

        // x_{i-1} lifts to a root of Q_{i-1}.
        BiPoly xprev(f, n, 3);
        if (n > 1) xprev.set(1, 0, 1);
        else xprev.set(0, 0, prev[0] == 0 ? 0 : f.neg(prev[0]));
        CHECK(s.compose(prev, lift_fiber(xprev, rel, s, n, sc)).is_zero());

        for (int t = 0; t < 100; ++t) {
            BiPoly a = BiPoly::random(f, n, 3, rng), b = BiPoly::random(f, n, 3, rng);
            DensePoly la = lift_fiber(a, rel, s, n, sc);
            REQUIRE(push_fiber(la, rel, s, n, sc) == a);
            if (t < 20) {
                DensePoly lab = lift_fiber(bivariate_mul(a, b, prev, rel), rel, s, n, sc);
                REQUIRE(lab == s.mul(la, lift_fiber(b, rel, s, n, sc)));
            }
        }
        // An element of the subfield pushes to a Y-free grid.
        BiPoly sub = BiPoly::from_x_poly(DensePoly::random(f, n, rng), n, 3);
        CHECK(push_fiber(lift_fiber(sub, rel, s, n, sc), rel, s, n, sc).y_free());
    }
}

TEST_CASE("lift and push with a non-constant denominator") {
    Rng rng(5);
    PrimeField f(101);
    for (std::size_t ell : {3u, 5u}) {
        for (std::size_t n : {1u, 4u, 9u}) {
            FiberRelation rel = random_relation(f, ell, rng);
            DensePoly prev = random_monic(f, n, rng);
            BiPoly prev_grid = BiPoly::from_x_poly(prev, n + 1, ell);
            DensePoly sm = compose(prev_grid, rel.f, rel.g, n + 1).monic();
            REQUIRE(sm.degree() == static_cast<long>(ell * n));
            ModulusContext s(sm);
            FiberScaling sc{DensePoly(f), DensePoly(f)};
            try {
                sc = fiber_scaling(rel, s, n);
            } catch (const Error&) {
                continue;  // g shares a factor with S for this random draw
            }
            for (int t = 0; t < 30; ++t) {
                BiPoly a = BiPoly::random(f, n, ell, rng), b = BiPoly::random(f, n, ell, rng);
                DensePoly la = lift_fiber(a, rel, s, n, sc);
                REQUIRE(push_fiber(la, rel, s, n, sc) == a);
                REQUIRE(lift_fiber(bivariate_mul(a, b, prev, rel), rel, s, n, sc) ==
                        s.mul(la, lift_fiber(b, rel, s, n, sc)));
            }
        }
    }
}

TEST_CASE("radical fast paths agree with the general algorithms") {
    PrimeField f(7);
    Rng rng(6);
    const std::size_t ell = 3, n = 27;
    DensePoly fy = DensePoly::monomial(f, 1, ell);
    FiberRelation rel = FiberRelation::make(fy, DensePoly::constant(f, 1));
    ModulusContext s(DensePoly::monomial(f, 1, ell * n) - DensePoly::constant(f, 3));

    BiPoly entry(f, n, ell);
    entry.set(5, 2, 1);
    CHECK(t1_lift(entry, ell, n) == DensePoly::monomial(f, 1, 5 * ell + 2));

    BiPoly c(f, n, ell);
    c.set(0, 0, 4);
    CHECK(t1_lift(c, ell, n) == DensePoly::constant(f, 4));
    CHECK(t1_push(DensePoly::constant(f, 4), ell, n) == c);

    for (int t = 0; t < 100; ++t) {
        BiPoly a = BiPoly::random(f, n, ell, rng);
        DensePoly fast = t1_lift(a, ell, n);
        REQUIRE(fast == lift_fiber(a, rel, s, n));
        REQUIRE(fast == compose(a, rel.f, rel.g, n));
        DensePoly u = DensePoly::random(f, ell * n, rng);
        REQUIRE(t1_push(u, ell, n) == push_fiber(u, rel, s, n));
    }
}
