#include "ltower/conic.hpp"

#include "ltower/error.hpp"

namespace ltower {

ConicParams ConicParams::make(const PrimeField& field) { return {field, smallest_non_residue(field)}; }

bool on_conic(const ConicPoint& pt, const ConicParams& c) {
    const PrimeField& f = c.field;
    return f.sub(f.mul(pt.x, pt.x), f.mul(c.delta, f.mul(pt.y, pt.y))) == f.reduce(u64{4});
}

ConicPoint conic_add(const ConicPoint& a, const ConicPoint& b, const ConicParams& c) {
    const PrimeField& f = c.field;
    const u64 half = f.inv(2);
    u64 x = f.add(f.mul(a.x, b.x), f.mul(c.delta, f.mul(a.y, b.y)));
    u64 y = f.add(f.mul(a.x, b.y), f.mul(b.x, a.y));
    return {f.mul(x, half), f.mul(y, half)};
}

ConicPoint conic_neg(const ConicPoint& a, const ConicParams& c) { return {a.x, c.field.neg(a.y)}; }

std::optional<ConicPoint> conic_point_with_x(u64 x, const ConicParams& c) {
    const PrimeField& f = c.field;
    // y^2 = (x^2 - 4) / delta
    u64 rhs = f.div(f.sub(f.mul(x, x), 4), c.delta);
    if (rhs == 0) return ConicPoint{x, 0};
    FieldElement r(f, rhs);
    if (!is_quadratic_residue(r)) return std::nullopt;
    return ConicPoint{x, sqrt(r).value()};
}

u64 double_x(const PrimeField& f, u64 alpha) { return f.sub(f.mul(alpha, alpha), 2); }

u64 diffadd_x(const PrimeField& f, u64 alpha, u64 alpha2, u64 gamma) { return f.sub(f.mul(alpha, alpha2), gamma); }

u64 ladder_x(const PrimeField& f, const BigExponent& n, u64 alpha) {
    alpha = f.reduce(alpha);
    u64 lo = 2, hi = alpha;  // x([k]P), x([k+1]P), difference P
    for (std::size_t i = bit_length(n); i-- > 0;) {
        if (bit_test(n, i)) {
            lo = diffadd_x(f, lo, hi, alpha);
            hi = double_x(f, hi);
        } else {
            hi = diffadd_x(f, lo, hi, alpha);
            lo = double_x(f, lo);
        }
    }
    return lo;
}

namespace {

// Integer t = p^v * unit; returns {v, unit mod p}.
std::pair<unsigned, u64> split_valuation(u64 t, u64 p) {
    unsigned v = 0;
    while (t % p == 0) {
        t /= p;
        ++v;
    }
    return {v, t % p};
}

DensePoly linear_recurrence(const PrimeField& f, std::size_t n, DensePoly u0, DensePoly u1) {
    if (n == 0) return u0;
    const DensePoly x = DensePoly::x(f);
    for (std::size_t k = 1; k < n; ++k) {
        DensePoly next = x * u1 - u0;
        u0 = std::move(u1);
        u1 = std::move(next);
    }
    return u1;
}

}  // namespace

DensePoly pell_poly(const PrimeField& f, std::size_t n) {
    if (n == 0) return DensePoly::constant(f, 2);
    // P_n = sum_k c_{n,2k} X^{n-2k} with c_{n,0} = 1 and
    // c_{n,2k+2} / c_{n,2k} = -(n-2k)(n-2k-1) / ((n-k-1)(k+1)).
    // The c's are integers; carry them as p^v * unit so factors of p in the
    // ratio do not lose information.
    const u64 p = f.modulus();
    std::vector<u64> coeffs(n + 1, 0);
    coeffs[n] = 1;
    long val = 0;
    u64 unit = 1;
    for (std::size_t k = 0; 2 * k + 2 <= n; ++k) {
        const u64 nn = n, kk = k;
        auto [v1, u1] = split_valuation(nn - 2 * kk, p);
        auto [v2, u2] = split_valuation(nn - 2 * kk - 1, p);
        auto [v3, u3] = split_valuation(nn - kk - 1, p);
        auto [v4, u4] = split_valuation(kk + 1, p);
        val += static_cast<long>(v1 + v2) - static_cast<long>(v3 + v4);
        unit = f.mul(f.mul(unit, f.mul(u1, u2)), f.inv(f.mul(u3, u4)));
        unit = f.neg(unit);
        if (val < 0) throw Error(Errc::corrupted_state, "pell_poly: negative valuation");
        coeffs[n - 2 * k - 2] = val == 0 ? unit : 0;
    }
    return DensePoly(f, std::move(coeffs));
}

DensePoly pell_poly_recurrence(const PrimeField& f, std::size_t n) {
    return linear_recurrence(f, n, DensePoly::constant(f, 2), DensePoly::x(f));
}

DensePoly pell_ordinate_poly(const PrimeField& f, std::size_t n) {
    return linear_recurrence(f, n, DensePoly(f), DensePoly::constant(f, 1));
}

bool is_t2_generator(const PrimeField& f, u64 ell, u64 alpha) {
    alpha = f.reduce(alpha);
    u64 disc = f.sub(f.mul(alpha, alpha), 4);
    if (disc == 0 || is_quadratic_residue(FieldElement(f, disc))) return false;
    return ladder_x(f, BigExponent((f.modulus() + 1) / ell), alpha) != 2;
}

T2Init find_t2_generator(const PrimeField& f, u64 ell, Rng& rng, std::size_t cap) {
    if (ell < 3 || !is_prime_u64(ell) || ell == f.modulus())
        throw Error(Errc::invalid_parameter, "T2: ell must be an odd prime different from p");
    if ((f.modulus() + 1) % ell != 0) throw Error(Errc::invalid_parameter, "T2: ell must divide p + 1");
    for (std::size_t t = 0; t < cap; ++t) {
        u64 alpha = f.random(rng);
        if (is_t2_generator(f, ell, alpha)) return {ConicParams::make(f), alpha, ell};
    }
    throw Error(Errc::iteration_cap, "T2: generator search exceeded iteration cap");
}

DensePoly t2_level_poly(const T2Init& init, std::size_t i) {
    const PrimeField& f = init.params.field;
    std::size_t n = 1;
    for (std::size_t k = 0; k < i; ++k) n *= init.ell;
    DensePoly q = i == 0 ? DensePoly::x(f) : pell_poly(f, n);
    return q - DensePoly::constant(f, init.alpha);
}

FiberRelation t2_relation(const T2Init& init) {
    const PrimeField& f = init.params.field;
    return FiberRelation::make(pell_poly(f, init.ell), DensePoly::constant(f, 1));
}

}  // namespace ltower
