#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <thread>

#include "ltower/error.hpp"
#include "ltower/tower.hpp"
#include "oracles.hpp"

using namespace ltower;
using oracle::Vec;

namespace {

struct Fixture {
    u64 p;
    u64 ell;
    Strategy strategy;
    unsigned levels;  // checked here; the acceptance run goes further
};

const Fixture fixtures[] = {
    {7, 3, Strategy::t1, 3},       {31, 5, Strategy::t1, 2},       {5, 3, Strategy::t2, 3},
    {13, 7, Strategy::t2, 2},      {101, 3, Strategy::elliptic, 3}, {13, 7, Strategy::elliptic, 2},
    {11, 7, Strategy::general, 2}, {13, 5, Strategy::general, 2},
};

std::string fixture_name(const Fixture& fx) {
    return std::string(strategy_name(fx.strategy)) + " p=" + std::to_string(fx.p) + " ell=" + std::to_string(fx.ell);
}

std::vector<Vec> columns(const BiPoly& m) {
    std::vector<Vec> out;
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.column(j).coeffs());
    return out;
}

BiPoly from_columns(const PrimeField& f, const std::vector<Vec>& cols, std::size_t rows) {
    BiPoly out(f, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < cols[j].size(); ++i) out.set(i, j, cols[j][i]);
    return out;
}

// T_i rebuilt from the stored relation f - x_{i-1} g; general towers expose only the library form.
std::vector<Vec> fiber_columns(const Tower& t, unsigned i) {
    const LevelRecord rec = t.record(i);
    if (rec.f.is_zero()) return columns(t.fiber_poly(i));
    const u64 p = t.field().modulus();
    const Vec q0 = t.record(0).minpoly.coeffs();
    const u64 x0 = (p - q0[0]) % p;
    std::vector<Vec> cols;
    for (std::size_t s = 0; s <= t.ell(); ++s) {
        Vec c = i == 1 ? Vec{(rec.f[s] + p - oracle::mulmod(x0, rec.g[s], p)) % p} : Vec{rec.f[s], (p - rec.g[s]) % p};
        oracle::trim(c);
        cols.push_back(c);
    }
    return cols;
}

Vec x_prev(const Tower& t, unsigned i) {
    if (i > 1) return {0, 1};
    Vec root{(t.field().modulus() - t.record(0).minpoly[0]) % t.field().modulus()};
    oracle::trim(root);
    return root;
}

}  // namespace

TEST_CASE("strategy selection") {
    Rng rng(1);
    CHECK(Tower::create(PrimeField(7), 3, std::nullopt, rng).strategy() == Strategy::t1);
    CHECK(Tower::create(PrimeField(5), 3, std::nullopt, rng).strategy() == Strategy::t2);
    CHECK(Tower::create(PrimeField(101), 3, std::nullopt, rng).strategy() == Strategy::t2);
    CHECK(Tower::create(PrimeField(11), 7, std::nullopt, rng).strategy() == Strategy::elliptic);
    // 11 exceeds p + 1 + 2 sqrt(p) for p = 5: no curve has a point of order 11.
    Tower general = Tower::create(PrimeField(5), 11, std::nullopt, rng);
    CHECK(general.strategy() == Strategy::general);
    CHECK(std::get<K0Context>(general.init()).degree == 5);

    CHECK_THROWS_AS(Tower::create(PrimeField(3), 5, std::nullopt, rng), Error);
    CHECK_THROWS_AS(Tower::create(PrimeField(7), 7, std::nullopt, rng), Error);
    CHECK_THROWS_AS(Tower::create(PrimeField(7), 9, std::nullopt, rng), Error);
    CHECK_THROWS_AS(Tower::create(PrimeField(7), 2, std::nullopt, rng), Error);
    CHECK_THROWS_AS(Tower::create(PrimeField(5), 3, Strategy::t1, rng), Error);
    CHECK_THROWS_AS(Tower::create(PrimeField(7), 3, Strategy::t2, rng), Error);
    CHECK_THROWS_AS(Tower::create(PrimeField(7), 3, Strategy::elliptic, rng), Error);
    CHECK(parse_strategy("general") == Strategy::general);
    CHECK_THROWS_AS(parse_strategy("t3"), Error);
}

TEST_CASE("level polynomials") {
    SUBCASE("radical seed is a non-cube mod 7") {
        std::set<u64> cubes;
        for (u64 a = 1; a < 7; ++a) cubes.insert(a * a * a % 7);
        CHECK(cubes == std::set<u64>{1, 6});
        for (u64 seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            Tower t = Tower::create(PrimeField(7), 3, std::nullopt, rng);
            CHECK(cubes.count(std::get<T1Init>(t.init()).seed) == 0);
        }
        Tower t = Tower::restore(PrimeField(7), 3, T1Init{3}, {});
        CHECK(t.level(2)->minpoly == DensePoly(PrimeField(7), {-3, 0, 0, 0, 0, 0, 0, 0, 0, 1}));
    }
    SUBCASE("Pell levels over F_5") {
        Rng rng(2);
        Tower t = Tower::create(PrimeField(5), 3, Strategy::t2, rng);
        const u64 alpha = std::get<T2Init>(t.init()).alpha;
        // P_3 = X^3 - 3X
        CHECK(t.level(1)->minpoly == DensePoly(PrimeField(5), {-static_cast<std::int64_t>(alpha), -3, 0, 1}));
        CHECK(oracle::irreducible_by_trial_division(t.level(1)->minpoly.coeffs(), 5));
        // Every alpha with X^3 - 3X - alpha irreducible is a valid generator, and alpha = 1 is one of them.
        for (u64 a = 0; a < 5; ++a)
            CHECK(oracle::irreducible_by_trial_division({(5 - a) % 5, 2, 0, 1}, 5) == is_t2_generator(PrimeField(5), 3, a));
        CHECK(is_t2_generator(PrimeField(5), 3, 1));
    }
    for (const auto& fx : fixtures) {
        CAPTURE(fixture_name(fx));
        Rng rng(3);
        Tower t = Tower::create(PrimeField(fx.p), fx.ell, fx.strategy, rng);
        CHECK(t.strategy() == fx.strategy);
        for (unsigned i = 0; i <= fx.levels; ++i) {
            const DensePoly& q = t.level(i)->minpoly;
            CHECK(q.is_monic());
            CHECK(q.degree() == static_cast<long>(t.degree(i)));
            if (i > 0) CHECK(q.degree() == static_cast<long>(fx.ell) * t.level(i - 1)->minpoly.degree());
            // Trial division tries about p^(deg/2) divisors; keep it to cases that finish quickly.
            if (std::pow(double(fx.p), double(q.degree() / 2)) <= 2e5)
                CHECK(oracle::irreducible_by_trial_division(q.coeffs(), fx.p));
        }
        CHECK(t.built_levels() == fx.levels + 1);
    }
}

TEST_CASE("element arithmetic") {
    for (const auto& fx : fixtures) {
        CAPTURE(fixture_name(fx));
        const u64 p = fx.p;
        Rng rng(4);
        Tower t = Tower::create(PrimeField(p), fx.ell, fx.strategy, rng);
        for (unsigned i = 0; i <= std::min(fx.levels, 2u); ++i) {
            const Vec& q = t.level(i)->minpoly.coeffs();
            for (int k = 0; k < 100; ++k) {
                LevelElement a = t.random(i, rng);
                if (a.value.is_zero()) continue;
                REQUIRE(t.mul(a, t.inverse(a)) == t.constant(i, 1));
            }
            for (int k = 0; k < 20; ++k) {
                LevelElement a = t.random(i, rng), b = t.random(i, rng), c = t.random(i, rng);
                REQUIRE(t.mul(a, b).value.coeffs() == oracle::mulmod_poly(a.value.coeffs(), b.value.coeffs(), q, p));
                REQUIRE(t.mul(t.mul(a, b), c) == t.mul(a, t.mul(b, c)));
            }
            if (t.degree(i) <= 49) {
                // Frobenius has order ell^i: repeated p-th powers by the schoolbook oracle.
                LevelElement a = t.random(i, rng);
                Vec v = a.value.coeffs();
                for (std::size_t k = 0; k < t.degree(i); ++k) v = oracle::powmod_poly(v, p, q, p);
                CHECK(v == a.value.coeffs());
                CHECK(t.pow(a, big_pow(p, t.degree(i))) == a);
                // Newton: the conjugates of x_i sum to minus the subleading coefficient of Q_i.
                Vec x = t.generator(i).value.coeffs(), trace;
                for (std::size_t k = 0; k < t.degree(i); ++k) {
                    trace = oracle::add(trace, x, p);
                    x = oracle::powmod_poly(x, p, q, p);
                }
                Vec expected{(p - q[t.degree(i) - 1]) % p};
                oracle::trim(expected);
                CHECK(trace == expected);
            }
        }
        CHECK_THROWS_AS(t.inverse(t.constant(1, 0)), Error);
    }
}

TEST_CASE("lift and push") {
    for (const auto& fx : fixtures) {
        CAPTURE(fixture_name(fx));
        const u64 p = fx.p;
        const PrimeField f(p);
        Rng rng(5);
        Tower t = Tower::create(f, fx.ell, fx.strategy, rng);
        for (unsigned i = 1; i <= fx.levels; ++i) {
            const std::size_t n = t.degree(i - 1);
            const Vec& q = t.level(i)->minpoly.coeffs();
            const Vec& prev = t.level(i - 1)->minpoly.coeffs();
            for (int k = 0; k < 100; ++k) {
                BiPoly a = BiPoly::random(f, n, fx.ell, rng);
                REQUIRE(t.push(t.lift(a, i)) == a);
            }
            BiPoly one(f, n, fx.ell);
            one.set(0, 0, 1);
            CHECK(t.lift(one, i) == t.constant(i, 1));
            CHECK(t.push(t.constant(i, 1)) == one);
            const Vec lifted = t.lift(t.bivariate_generator(i), i).value.coeffs();
            CHECK(oracle::eval_at_poly(prev, lifted, q, p).empty());
            CHECK(columns(t.bivariate_generator(i)).front() == x_prev(t, i));

            const std::vector<Vec> fiber = fiber_columns(t, i);
            CHECK(fiber.back() == Vec{1});
            if (t.strategy() != Strategy::general) CHECK(columns(t.fiber_poly(i)) == fiber);
            for (int k = 0; k < 30; ++k) {
                BiPoly a = BiPoly::random(f, n, fx.ell, rng), b = BiPoly::random(f, n, fx.ell, rng);
                BiPoly ab = from_columns(f, oracle::bivariate_mul(columns(a), columns(b), fiber, prev, p), n);
                REQUIRE(t.bivariate_mul(a, b, i) == ab);
                REQUIRE(t.lift(ab, i).value.coeffs() ==
                        oracle::mulmod_poly(t.lift(a, i).value.coeffs(), t.lift(b, i).value.coeffs(), q, p));
            }
        }
        CHECK_THROWS_AS(t.lift(BiPoly(f, 1, fx.ell), 0), Error);
        CHECK_THROWS_AS(t.lift(BiPoly(f, 2, fx.ell), 1), Error);
    }
}

TEST_CASE("embeddings and projections") {
    for (const auto& fx : fixtures) {
        CAPTURE(fixture_name(fx));
        const u64 p = fx.p;
        Rng rng(6);
        Tower t = Tower::create(PrimeField(p), fx.ell, fx.strategy, rng);
        const unsigned top = fx.levels;
        for (unsigned j = 0; j <= top; ++j) {
            LevelElement a = t.random(j, rng);
            CHECK(t.embed(a, j) == a);
            for (unsigned i = j + 1; i <= top; ++i) {
                const Vec& qi = t.level(i)->minpoly.coeffs();
                // The image of x_j is a root of Q_j.
                CHECK(oracle::eval_at_poly(t.level(j)->minpoly.coeffs(), t.embed(t.generator(j), i).value.coeffs(), qi,
                                           p)
                          .empty());
                LevelElement b = t.random(j, rng);
                CHECK(t.embed(t.mul(a, b), i) == t.mul(t.embed(a, i), t.embed(b, i)));
                CHECK(t.embed(t.add(a, b), i) == t.add(t.embed(a, i), t.embed(b, i)));
                CHECK(t.project(t.embed(a, i), j) == a);
                for (unsigned k = i + 1; k <= top; ++k) CHECK(t.embed(a, k) == t.embed(t.embed(a, i), k));
            }
        }
        CHECK(t.embed(t.constant(0, 1), top) == t.constant(top, 1));
        CHECK(t.project(t.constant(top, 1), 0) == t.constant(0, 1));
        int failures = 0;
        for (int k = 0; k < 20; ++k) {
            try {
                t.project(t.random(top, rng), top - 1);
            } catch (const Error& e) {
                CHECK(e.code() == Errc::not_in_subfield);
                ++failures;
            }
        }
        CHECK(failures >= 18);
    }
}

TEST_CASE("verification report") {
    for (const auto& fx : fixtures) {
        CAPTURE(fixture_name(fx));
        Rng rng(7);
        Tower t = Tower::create(PrimeField(fx.p), fx.ell, fx.strategy, rng);
        for (unsigned i = 0; i <= fx.levels; ++i) {
            VerifyReport r = t.verify_level(i, rng, 5);
            CHECK(r.passed());
            CHECK(r.level == i);
            for (const auto& c : r.checks) {
                CAPTURE(c.name);
                CHECK(c.passed);
                CHECK(c.seconds >= 0);
            }
            std::set<std::string> names;
            for (const auto& c : r.checks) names.insert(c.name);
            CHECK(names.count("irreducible"));
            if (i > 0) CHECK(names.count("homomorphism"));
        }
    }
    SUBCASE("a corrupted level fails") {
        const PrimeField f(7);
        Tower good = Tower::restore(f, 3, T1Init{3}, {});
        std::vector<LevelRecord> recs{good.record(0), good.record(1), good.record(2)};
        recs[2].minpoly = DensePoly(f, {-1, 0, 0, 0, 0, 0, 0, 0, 0, 1});  // X^9 - 1 has the root 1
        Tower bad = Tower::restore(f, 3, T1Init{3}, recs);
        Rng rng(8);
        VerifyReport r = bad.verify_level(2, rng);
        CHECK_FALSE(r.passed());
        bool irreducible_failed = false;
        for (const auto& c : r.checks)
            if (c.name == "irreducible") irreducible_failed = !c.passed;
        CHECK(irreducible_failed);
        CHECK(bad.verify_level(1, rng).passed());
        recs[2].minpoly = DensePoly(f, {-3, 0, 0, 1});
        CHECK_THROWS_AS(Tower::restore(f, 3, T1Init{3}, recs), Error);
    }
}

TEST_CASE("concurrent level construction") {
    Rng rng(9);
    Tower serial = Tower::create(PrimeField(101), 3, Strategy::elliptic, rng);
    Rng rng2(9);
    Tower shared = Tower::create(PrimeField(101), 3, Strategy::elliptic, rng2);
    std::vector<std::thread> threads;
    std::vector<DensePoly> seen(8, DensePoly(PrimeField(101)));
    for (unsigned k = 0; k < 8; ++k)
        threads.emplace_back([&, k] { seen[k] = shared.level(2 + k % 4)->minpoly; });
    for (auto& th : threads) th.join();
    for (unsigned k = 0; k < 8; ++k) CHECK(seen[k] == serial.level(2 + k % 4)->minpoly);
    CHECK(shared.built_levels() == 6);
}
