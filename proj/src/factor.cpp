#include "ltower/factor.hpp"

#include <algorithm>

#include "ltower/error.hpp"

namespace ltower {

namespace {

std::vector<u64> prime_divisors(u64 n) {
    std::vector<u64> out;
    for (u64 t = 2; t * t <= n; ++t) {
        if (n % t) continue;
        out.push_back(t);
        while (n % t == 0) n /= t;
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

DensePoly frobenius_power(const ModulusContext& ctx, u64 k) {
    const PrimeField& f = ctx.field();
    const DensePoly x = ctx.reduce(DensePoly::x(f));
    if (k == 0) return x;
    const DensePoly frob = ctx.pow(x, f.modulus());
    DensePoly acc = frob;  // X^{p^j} for j = the processed prefix of k's bits
    for (int bit = 62 - __builtin_clzll(k) + 1; bit-- > 0;) {
        acc = ctx.compose(acc, acc);
        if ((k >> bit) & 1) acc = ctx.compose(frob, acc);
    }
    return acc;
}

bool is_irreducible(const DensePoly& q) {
    if (q.degree() < 1) return false;
    if (q.degree() == 1) return true;
    const PrimeField& f = q.field();
    ModulusContext ctx(q.monic());
    const u64 n = static_cast<u64>(q.degree());
    const DensePoly x = DensePoly::x(f);
    for (u64 t : prime_divisors(n)) {
        DensePoly h = frobenius_power(ctx, n / t) - x;
        if (!gcd(h, ctx.modulus()).is_one()) return false;
    }
    return frobenius_power(ctx, n) == ctx.reduce(x);
}

DensePoly cyclotomic(const PrimeField& field, u64 ell) {
    if (ell == field.modulus()) throw Error(Errc::invalid_parameter, "cyclotomic: ell = p excluded");
    if (!is_prime_u64(ell)) throw Error(Errc::invalid_parameter, "cyclotomic: ell must be prime");
    return DensePoly(field, std::vector<u64>(ell, 1));
}

DensePoly factor_equal_degree(const DensePoly& f, std::size_t r, Rng& rng, std::size_t cap) {
    if (f.degree() < 1 || r == 0 || static_cast<std::size_t>(f.degree()) % r != 0)
        throw Error(Errc::invalid_parameter, "factor_equal_degree: degree not a multiple of r");
    const PrimeField& field = f.field();
    const BigExponent e = (big_pow(field.modulus(), r) - 1) / 2;
    DensePoly cur = f.monic();
    std::size_t tries = 0;
    while (static_cast<std::size_t>(cur.degree()) > r) {
        if (++tries > cap) throw Error(Errc::iteration_cap, "factor_equal_degree: iteration cap exceeded");
        ModulusContext ctx(cur);
        DensePoly a = DensePoly::random(field, ctx.degree(), rng);
        if (a.degree() < 1) continue;
        DensePoly b = ctx.pow(a, e) - DensePoly::constant(field, 1);
        DensePoly g = gcd(b, cur);
        if (g.degree() < 1 || g.degree() == cur.degree()) continue;
        DensePoly other = cur / g;
        cur = g.degree() <= other.degree() ? g : other.monic();
    }
    return cur;
}

std::vector<u64> roots_in_base_field(const DensePoly& f, Rng& rng) {
    if (f.is_zero()) throw Error(Errc::invalid_parameter, "roots of the zero polynomial");
    const PrimeField& field = f.field();
    std::vector<u64> roots;
    if (f.degree() < 1) return roots;
    ModulusContext ctx(f.monic());
    const DensePoly x = DensePoly::x(field);
    DensePoly split = gcd(ctx.pow(x, field.modulus()) - x, ctx.modulus());
    std::vector<DensePoly> stack{split};
    const u64 half = (field.modulus() - 1) / 2;
    std::size_t tries = 0;
    while (!stack.empty()) {
        DensePoly g = std::move(stack.back());
        stack.pop_back();
        if (g.degree() < 1) continue;
        if (g.degree() == 1) {
            roots.push_back(field.neg(g[0]));
            continue;
        }
        for (;;) {
            if (++tries > default_iteration_cap) throw Error(Errc::iteration_cap, "root finding: cap exceeded");
            ModulusContext gc(g);
            DensePoly shifted = DensePoly(field, {0, 1}) + DensePoly::constant(field, field.random(rng));
            DensePoly h = gcd(gc.pow(shifted, half) - DensePoly::constant(field, 1), g);
            if (h.degree() >= 1 && h.degree() < g.degree()) {
                stack.push_back(g / h);
                stack.push_back(h);
                break;
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

DensePoly linear_minpoly(const PrimeField& field, const std::vector<std::vector<u64>>& powers) {
    // Incremental echelon form; each basis row remembers which combination of
    // the input vectors produced it.
    struct Row {
        std::vector<u64> v;
        std::vector<u64> combo;
        std::size_t pivot;
    };
    std::vector<Row> basis;
    for (std::size_t k = 0; k < powers.size(); ++k) {
        std::vector<u64> v = powers[k];
        std::vector<u64> combo(powers.size(), 0);
        combo[k] = 1;
        for (const Row& row : basis) {
            u64 c = v[row.pivot];
            if (c == 0) continue;
            for (std::size_t t = 0; t < v.size(); ++t) v[t] = field.sub(v[t], field.mul(c, row.v[t]));
            for (std::size_t t = 0; t <= k; ++t) combo[t] = field.sub(combo[t], field.mul(c, row.combo[t]));
        }
        auto it = std::find_if(v.begin(), v.end(), [](u64 c) { return c != 0; });
        if (it == v.end()) {
            combo.resize(k + 1);
            return DensePoly(field, std::move(combo)).monic();
        }
        std::size_t pivot = static_cast<std::size_t>(it - v.begin());
        u64 inv = field.inv(v[pivot]);
        for (auto& c : v) c = field.mul(c, inv);
        for (auto& c : combo) c = field.mul(c, inv);
        // Keep the basis reduced so later pivots are eliminated in one pass.
        for (Row& row : basis) {
            u64 c = row.v[pivot];
            if (c == 0) continue;
            for (std::size_t t = 0; t < v.size(); ++t) row.v[t] = field.sub(row.v[t], field.mul(c, v[t]));
            for (std::size_t t = 0; t <= k; ++t) row.combo[t] = field.sub(row.combo[t], field.mul(c, combo[t]));
        }
        basis.push_back({std::move(v), std::move(combo), pivot});
    }
    return DensePoly(field);
}

DensePoly minpoly_in_quotient(const DensePoly& alpha, const ModulusContext& ctx, std::size_t bound) {
    const PrimeField& f = ctx.field();
    const std::size_t n = ctx.degree();
    bound = std::min(bound, n);
    std::vector<std::vector<u64>> powers;
    DensePoly cur = ctx.reduce(DensePoly::constant(f, 1));
    const DensePoly a = ctx.reduce(alpha);
    for (std::size_t k = 0; k <= bound; ++k) {
        std::vector<u64> v(cur.coeffs());
        v.resize(n, 0);
        powers.push_back(std::move(v));
        cur = ctx.mul(cur, a);
    }
    return linear_minpoly(f, powers);
}

}  // namespace ltower
