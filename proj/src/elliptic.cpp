#include "ltower/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "ltower/error.hpp"
#include "ltower/factor.hpp"

namespace ltower {

namespace {

constexpr u64 kExhaustiveLimit = 10'000;

u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

u64 rhs(const Curve& e, u64 x) {
    const PrimeField& f = e.field;
    return f.add(f.mul(f.add(f.mul(x, x), e.a), x), e.b);
}

Rng curve_rng(const Curve& e) { return Rng(e.field.modulus() * 0x9E3779B97F4A7C15ull ^ (e.a << 21) ^ e.b); }

}  // namespace

Curve Curve::make(const PrimeField& field, u64 a, u64 b) {
    a = field.reduce(a);
    b = field.reduce(b);
    u64 disc = field.add(field.mul(4, field.mul(a, field.mul(a, a))), field.mul(27, field.mul(b, b)));
    if (disc == 0) throw Error(Errc::invalid_parameter, "singular curve: 4a^3 + 27b^2 = 0");
    return {field, a, b};
}

u64 Curve::j_invariant() const {
    const PrimeField& f = field;
    u64 a3 = f.mul(4, f.mul(a, f.mul(a, a)));
    u64 disc = f.add(a3, f.mul(27, f.mul(b, b)));
    return f.div(f.mul(1728, a3), disc);
}

bool on_curve(const ECPoint& pt, const Curve& e) {
    if (pt.infinity) return true;
    return e.field.mul(pt.y, pt.y) == rhs(e, pt.x);
}

ECPoint ec_neg(const ECPoint& pt, const Curve& e) {
    if (pt.infinity) return pt;
    return ECPoint::affine(pt.x, e.field.neg(pt.y));
}

ECPoint ec_add(const ECPoint& a, const ECPoint& b, const Curve& e) {
    if (a.infinity) return b;
    if (b.infinity) return a;
    const PrimeField& f = e.field;
    u64 lambda;
    if (a.x == b.x) {
        if (f.add(a.y, b.y) == 0) return ECPoint::at_infinity();
        lambda = f.div(f.add(f.mul(3, f.mul(a.x, a.x)), e.a), f.add(a.y, a.y));
    } else {
        lambda = f.div(f.sub(b.y, a.y), f.sub(b.x, a.x));
    }
    u64 x = f.sub(f.sub(f.mul(lambda, lambda), a.x), b.x);
    u64 y = f.sub(f.mul(lambda, f.sub(a.x, x)), a.y);
    return ECPoint::affine(x, y);
}

ECPoint ec_mul(const ECPoint& pt, const BigExponent& n, const Curve& e) {
    ECPoint r = ECPoint::at_infinity();
    for (std::size_t i = bit_length(n); i-- > 0;) {
        r = ec_add(r, r, e);
        if (bit_test(n, i)) r = ec_add(r, pt, e);
    }
    return r;
}

ECPoint ec_mul(const ECPoint& pt, u64 n, const Curve& e) {
    ECPoint r = ECPoint::at_infinity(), base = pt;
    while (n) {
        if (n & 1) r = ec_add(r, base, e);
        n >>= 1;
        if (n) base = ec_add(base, base, e);
    }
    return r;
}

ECPoint random_point(const Curve& e, Rng& rng) {
    for (;;) {
        u64 x = e.field.random(rng);
        FieldElement r(e.field, rhs(e, x));
        if (r.is_zero()) return ECPoint::affine(x, 0);
        if (!is_quadratic_residue(r)) continue;
        u64 y = sqrt(r).value();
        if (rng() & 1) y = e.field.neg(y);
        return ECPoint::affine(x, y);
    }
}

u64 point_count_exhaustive(const Curve& e) {
    const u64 p = e.field.modulus();
    std::vector<std::uint8_t> roots(p, 0);  // number of square roots of each value
    for (u64 y = 0; y < p; ++y) ++roots[e.field.mul(y, y)];
    u64 count = 1;
    for (u64 x = 0; x < p; ++x) count += roots[rhs(e, x)];
    return count;
}

namespace {

// All k in [lo, lo + width] with [k]P = infinity.
std::vector<u64> annihilators_in_interval(const ECPoint& pt, u64 lo, u64 width, const Curve& e) {
    const u64 s = isqrt(width) + 1;
    std::unordered_map<u64, std::vector<std::pair<u64, ECPoint>>> baby;  // keyed by x (infinity -> p)
    ECPoint cur = ECPoint::at_infinity();
    for (u64 j = 0; j < s; ++j) {
        baby[cur.infinity ? e.field.modulus() : cur.x].push_back({j, cur});
        cur = ec_add(cur, pt, e);
    }
    const ECPoint giant = ec_neg(ec_mul(pt, s, e), e);
    // Want [lo + i s + j]P = O, i.e. [j]P = -[lo]P - [i s]P.
    ECPoint target = ec_neg(ec_mul(pt, lo, e), e);
    std::vector<u64> out;
    for (u64 i = 0; i * s <= width; ++i) {
        auto it = baby.find(target.infinity ? e.field.modulus() : target.x);
        if (it != baby.end()) {
            for (const auto& [j, q] : it->second) {
                u64 k = i * s + j;
                if (q == target && k <= width) out.push_back(lo + k);
            }
        }
        target = ec_add(target, giant, e);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

u64 point_count_bsgs(const Curve& e) {
    const u64 p = e.field.modulus();
    const u64 w = isqrt(4 * p) + 1;  // ceil(2 sqrt p)
    const u64 lo = p + 1 > w ? p + 1 - w : 0;
    const u64 width = 2 * w;
    Rng rng = curve_rng(e);
    std::set<u64> candidates;
    for (int sample = 0; sample < 40; ++sample) {
        ECPoint pt = random_point(e, rng);
        auto ks = annihilators_in_interval(pt, lo, width, e);
        std::set<u64> next(ks.begin(), ks.end());
        if (sample == 0) {
            candidates = std::move(next);
        } else {
            std::set<u64> both;
            std::set_intersection(candidates.begin(), candidates.end(), next.begin(), next.end(),
                                  std::inserter(both, both.begin()));
            candidates = std::move(both);
        }
        if (candidates.size() == 1) return *candidates.begin();
    }
    // Ambiguous (the group is far from cyclic); fall back to counting.
    return point_count_exhaustive(e);
}

u64 point_count(const Curve& e) {
    return e.field.modulus() <= kExhaustiveLimit ? point_count_exhaustive(e) : point_count_bsgs(e);
}

bool ell_within_hasse_bound(u64 p, u64 ell) {
    if (ell <= p + 1) return true;
    const u64 d = ell - p - 1;  // need d <= 2 sqrt p
    return static_cast<u128>(d) * d <= static_cast<u128>(4) * p;
}

Curve find_curve(const PrimeField& field, u64 ell, Rng& rng, std::size_t cap) {
    const u64 p = field.modulus();
    if (ell < 3 || !is_prime_u64(ell) || ell == p)
        throw Error(Errc::invalid_parameter, "elliptic: ell must be an odd prime different from p");
    if ((p - 1) % ell == 0) throw Error(Errc::invalid_parameter, "elliptic: ell must not divide p - 1");
    if (!ell_within_hasse_bound(p, ell))
        throw Error(Errc::invalid_parameter, "elliptic: ell exceeds the Hasse bound p + 2 sqrt(p) + 1");
    auto accept = [&](u64 a, u64 b) -> std::optional<Curve> {
        if (a == 0 || b == 0) return std::nullopt;  // j = 1728 or 0
        u64 disc = field.add(field.mul(4, field.mul(a, field.mul(a, a))), field.mul(27, field.mul(b, b)));
        if (disc == 0) return std::nullopt;
        Curve e{field, a, b};
        if (point_count(e) % ell != 0) return std::nullopt;
        return e;
    };
    if (p < 1000) {
        std::vector<std::pair<u64, u64>> all;
        for (u64 a = 1; a < p; ++a)
            for (u64 b = 1; b < p; ++b) all.emplace_back(a, b);
        std::shuffle(all.begin(), all.end(), rng);
        for (const auto& [a, b] : all)
            if (auto e = accept(a, b)) return *e;
        throw Error(Errc::iteration_cap, "elliptic: no curve over F_p has ell | #E with j not in {0, 1728}");
    }
    for (std::size_t t = 0; t < cap; ++t)
        if (auto e = accept(field.random(rng), field.random(rng))) return *e;
    throw Error(Errc::iteration_cap, "elliptic: curve search exceeded iteration cap");
}

unsigned ell_valuation(u64 n, u64 ell) {
    unsigned v = 0;
    while (n != 0 && n % ell == 0) {
        n /= ell;
        ++v;
    }
    return v;
}

ECPoint torsion_point(const Curve& e, u64 ell, unsigned exponent, u64 n, Rng& rng, std::size_t cap) {
    u64 le = 1;
    for (unsigned k = 0; k < exponent; ++k) le *= ell;
    if (exponent == 0 || n % le != 0 || (n / le) % ell == 0)
        throw Error(Errc::invalid_parameter, "torsion: ell^e must exactly divide the group order");
    for (std::size_t t = 0; t < cap; ++t) {
        ECPoint pt = ec_mul(random_point(e, rng), n / le, e);
        if (!ec_mul(pt, le / ell, e).infinity) return pt;
    }
    throw Error(Errc::iteration_cap, "torsion: iteration cap exceeded");
}

u64 torsion_abscissa(const Curve& e, u64 ell, unsigned exponent, u64 n, Rng& rng) {
    return torsion_point(e, ell, exponent, n, rng).x;
}

DensePoly kernel_poly(const Curve& e, u64 ell, u64 n, Rng& rng) {
    if (n % ell != 0) throw Error(Errc::invalid_parameter, "kernel: ell must divide the group order");
    ECPoint t = torsion_point(e, ell, ell_valuation(n, ell), n, rng);
    while (!ec_mul(t, ell, e).infinity) t = ec_mul(t, ell, e);
    const PrimeField& f = e.field;
    DensePoly h = DensePoly::constant(f, 1);
    ECPoint kt = t;
    for (u64 k = 1; 2 * k < ell; ++k) {
        h = h * DensePoly(f, std::vector<u64>{f.neg(kt.x), 1});
        kt = ec_add(kt, t, e);
    }
    return h;
}

IsogenyStep velu(const Curve& e, const DensePoly& kernel, u64 ell) {
    const PrimeField& f = e.field;
    if (kernel.degree() != static_cast<long>((ell - 1) / 2) || !kernel.is_monic())
        throw Error(Errc::invalid_parameter, "velu: kernel polynomial must be monic of degree (ell-1)/2");
    Rng rng = curve_rng(e);
    auto roots = roots_in_base_field(kernel, rng);
    if (roots.size() != static_cast<std::size_t>(kernel.degree()))
        throw Error(Errc::invalid_parameter, "velu: kernel polynomial must split with distinct roots");
    const DensePoly x = DensePoly::x(f);
    const DensePoly h2 = square(kernel);
    DensePoly num = x * h2;
    u64 sum_v = 0, sum_w = 0;
    for (u64 xq : roots) {
        u64 vq = f.add(f.mul(6, f.mul(xq, xq)), f.mul(2, e.a));
        u64 uq = f.mul(4, rhs(e, xq));
        sum_v = f.add(sum_v, vq);
        sum_w = f.add(sum_w, f.add(uq, f.mul(xq, vq)));
        DensePoly cof = kernel / DensePoly(f, std::vector<u64>{f.neg(xq), 1});
        DensePoly term = DensePoly(f, std::vector<u64>{f.sub(uq, f.mul(vq, xq)), vq});  // v (x - xq) + u
        num += term * square(cof);
    }
    Curve codomain = Curve::make(f, f.sub(e.a, f.mul(5, sum_v)), f.sub(e.b, f.mul(7, sum_w)));
    IsogenyStep step{e, codomain, num, h2, kernel, 1};
    // Codomain validation on a few sampled points.
    for (int t = 0; t < 4; ++t) {
        ECPoint pt = random_point(e, rng);
        if (!on_curve(apply_isogeny(step, pt), codomain))
            throw Error(Errc::corrupted_state, "velu: image point not on the codomain");
    }
    return step;
}

ECPoint apply_isogeny(const IsogenyStep& step, const ECPoint& pt) {
    if (pt.infinity) return pt;
    const PrimeField& f = step.domain.field;
    u64 gv = step.g.evaluate(pt.x);
    if (gv == 0) return ECPoint::at_infinity();
    u64 fv = step.f.evaluate(pt.x);
    // (f/g)' = (f' g - f g') / g^2
    u64 dnum = f.sub(f.mul(step.f.derivative().evaluate(pt.x), gv), f.mul(fv, step.g.derivative().evaluate(pt.x)));
    u64 x = f.div(fv, gv);
    u64 y = f.mul(step.y_scale, f.mul(pt.y, f.div(dnum, f.mul(gv, gv))));
    return ECPoint::affine(x, y);
}

IsogenyCycle build_cycle(const Curve& e0, u64 ell, u64 order, std::size_t cap) {
    const PrimeField& f = e0.field;
    const u64 p = f.modulus();
    if (cap == 0) {
        u64 log2p = 64 - static_cast<u64>(__builtin_clzll(p));
        cap = static_cast<std::size_t>(4 * (isqrt(p) + 1) * log2p);
    }
    IsogenyCycle cycle;
    cycle.ell = ell;
    Rng rng = curve_rng(e0);
    std::set<u64> seen{e0.j_invariant()};
    Curve cur = e0;
    for (std::size_t k = 0; k < cap; ++k) {
        cycle.steps.push_back(velu(cur, kernel_poly(cur, ell, order, rng), ell));
        cur = cycle.steps.back().codomain;
        u64 j = cur.j_invariant();
        if (j == e0.j_invariant()) {
            // (x, y) -> (u^2 x, u^3 y) maps the closing curve onto E_0.
            u64 u2 = f.div(f.mul(e0.b, cur.a), f.mul(cur.b, e0.a));
            FieldElement u2e(f, u2);
            // Supersingular curves can close on the quadratic twist of E_0; walking on
            // through the twisted half of the cycle comes back to E_0 itself.
            if (!is_quadratic_residue(u2e)) {
                cycle.repeated_j = true;
                continue;
            }
            u64 u = sqrt(u2e).value();
            IsogenyStep& last = cycle.steps.back();
            last.g = scale(last.g, f.inv(u2));
            last.y_scale = u;
            last.codomain = e0;
            cycle.twist_scalar = u;
            return cycle;
        }
        if (!seen.insert(j).second) cycle.repeated_j = true;
    }
    throw Error(Errc::iteration_cap, "isogeny cycle exceeded its length cap");
}

std::size_t backward_step_index(const IsogenyCycle& cycle, std::size_t i) {
    const std::size_t n = cycle.length();
    return (n - (i % n)) % n;
}

FiberRelation backward_relation(const IsogenyCycle& cycle, std::size_t i) {
    const IsogenyStep& step = cycle.steps.at(backward_step_index(cycle, i));
    return FiberRelation::make(step.f, step.g);
}

EllipticInit elliptic_init(const PrimeField& field, u64 ell, Rng& rng) {
    const u64 p = field.modulus();
    if (p < 5) throw Error(Errc::invalid_parameter, "elliptic: p must be at least 5");
    Error last(Errc::iteration_cap, "elliptic: no usable curve found");
    for (int attempt = 0; attempt < 16; ++attempt) {
        Curve e0 = find_curve(field, ell, rng);
        const u64 order = point_count(e0);
        try {
            EllipticInit init;
            init.order = order;
            init.exponent = ell_valuation(order, ell);
            init.cycle = build_cycle(e0, ell, order);
            init.eta_point = torsion_point(e0, ell, init.exponent, order, rng);
            init.eta = init.eta_point.x;
            return init;
        } catch (const Error& err) {
            last = err;
        }
    }
    throw last;
}

}  // namespace ltower
