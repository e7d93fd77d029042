#include "ltower/cyclodescent.hpp"

#include <algorithm>

#include "ltower/error.hpp"

namespace ltower {

namespace {

std::size_t ipow(std::size_t base, unsigned e) {
    std::size_t r = 1;
    while (e--) r *= base;
    return r;
}

}  // namespace

// ---------------------------------------------------------------- RadicalField

RadicalField::RadicalField(DensePoly p0, u64 ell, unsigned level)
    : p0_(std::move(p0)), ell_(ell), level_(level) {
    if (!p0_.is_monic() || p0_.degree() < 1) throw Error(Errc::invalid_parameter, "radical field: P_0 must be monic");
    r_ = static_cast<std::size_t>(p0_.degree());
    span_ = ipow(static_cast<std::size_t>(ell), level);
    if (level == 0) return;
    const BigExponent order = big_pow(field().modulus(), r_) - 1;
    if (order % ell != 0) return;
    const ModulusContext base(p0_);
    const DensePoly zeta = base.pow(DensePoly::x(field()) % p0_, BigExponent(order / ell));
    if (zeta.is_one()) return;
    zeta_powers_.push_back(DensePoly::constant(field(), 1));
    for (u64 k = 1; k < ell; ++k) zeta_powers_.push_back(base.mul(zeta_powers_.back(), zeta));
}

bool RadicalField::is_one(std::span<const u64> a) const {
    return a[0] == 1 && is_prime_field_constant(a);
}

// sigma^k: the coefficient of y_j^e picks up zeta^{k e}.
RadicalElem RadicalField::conjugate(std::span<const u64> a, std::size_t k) const {
    const PrimeField& f = field();
    RadicalElem out = zero();
    std::vector<u64> prod(2 * r_);
    for (std::size_t e = 0; e < span_; ++e) {
        const DensePoly& z = zeta_powers_[(k * e) % ell_];
        std::fill(prod.begin(), prod.end(), 0);
        for (std::size_t d = 0; d < r_; ++d) {
            if (a[e * r_ + d] == 0) continue;
            for (std::size_t t = 0; t < z.size(); ++t) prod[d + t] = f.add(prod[d + t], f.mul(a[e * r_ + d], z[t]));
        }
        for (std::size_t d = 2 * r_ - 1; d >= r_; --d) {
            const u64 c = prod[d];
            if (c == 0) continue;
            for (std::size_t t = 0; t < r_; ++t) prod[d - r_ + t] = f.sub(prod[d - r_ + t], f.mul(c, p0_[t]));
        }
        std::copy_n(prod.begin(), r_, out.begin() + static_cast<std::ptrdiff_t>(e * r_));
    }
    return out;
}

RadicalElem RadicalField::constant(u64 c) const {
    RadicalElem a = zero();
    a[0] = field().reduce(c);
    return a;
}

RadicalElem RadicalField::generator() const {
    if (level_ > 0) {
        RadicalElem a = zero();
        a[r_] = 1;
        return a;
    }
    return from_base(DensePoly::x(field()));
}

RadicalElem RadicalField::random(Rng& rng) const {
    RadicalElem a(dimension());
    for (auto& c : a) c = field().random(rng);
    return a;
}

RadicalElem RadicalField::from_base(const DensePoly& a) const {
    DensePoly red = a % p0_;
    RadicalElem out = zero();
    for (std::size_t d = 0; d < red.size(); ++d) out[d] = red[d];
    return out;
}

bool RadicalField::is_zero(std::span<const u64> a) const {
    return std::all_of(a.begin(), a.end(), [](u64 c) { return c == 0; });
}

bool RadicalField::is_prime_field_constant(std::span<const u64> a) const {
    return std::all_of(a.begin() + 1, a.end(), [](u64 c) { return c == 0; });
}

RadicalElem RadicalField::add(std::span<const u64> a, std::span<const u64> b) const {
    RadicalElem out(dimension());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = field().add(a[k], b[k]);
    return out;
}

RadicalElem RadicalField::sub(std::span<const u64> a, std::span<const u64> b) const {
    RadicalElem out(dimension());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = field().sub(a[k], b[k]);
    return out;
}

RadicalElem RadicalField::neg(std::span<const u64> a) const {
    RadicalElem out(dimension());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = field().neg(a[k]);
    return out;
}

// Packs each coefficient as a block of (2m-1) x (2r-1) slots so no carries collide,
// multiplies once over F_p, then folds y^{e >= m} = y_0 y^{e-m} = Z y^{e-m} and reduces mod P_0.
std::vector<u64> RadicalField::packed_product(std::span<const u64> a, std::size_t na, std::span<const u64> b,
                                              std::size_t nb) const {
    const PrimeField& f = field();
    const std::size_t dim = dimension(), m = span_, r = r_;
    const std::size_t zs = 2 * r - 1, block = (2 * m - 1) * zs;
    auto pack = [&](std::span<const u64> src, std::size_t n) {
        std::vector<u64> out(n * block, 0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t e = 0; e < m; ++e)
                for (std::size_t d = 0; d < r; ++d) out[k * block + e * zs + d] = src[k * dim + e * r + d];
        return out;
    };
    const std::vector<u64> pa = pack(a, na), pb = pack(b, nb);
    const std::vector<u64> prod = detail::mul_auto(pa, pb, f);

    const std::size_t nc = na + nb - 1;
    std::vector<u64> out(nc * dim, 0);
    std::vector<u64> buf(m * 2 * r);
    for (std::size_t k = 0; k < nc; ++k) {
        std::fill(buf.begin(), buf.end(), 0);
        bool any = false;
        for (std::size_t e = 0; e + 1 < 2 * m; ++e) {
            const std::size_t base = k * block + e * zs;
            if (base >= prod.size()) break;
            u64* row = e < m ? &buf[e * 2 * r] : &buf[(e - m) * 2 * r + 1];
            for (std::size_t d = 0; d < zs && base + d < prod.size(); ++d) {
                if (prod[base + d] == 0) continue;
                row[d] = f.add(row[d], prod[base + d]);
                any = true;
            }
        }
        if (!any) continue;
        for (std::size_t e = 0; e < m; ++e) {
            u64* row = &buf[e * 2 * r];
            for (std::size_t d = 2 * r - 1; d >= r; --d) {
                const u64 c = row[d];
                if (c == 0) continue;
                for (std::size_t t = 0; t < r; ++t) row[d - r + t] = f.sub(row[d - r + t], f.mul(c, p0_[t]));
            }
            std::copy(row, row + r, out.begin() + static_cast<std::ptrdiff_t>(k * dim + e * r));
        }
    }
    return out;
}

RadicalElem RadicalField::mul(std::span<const u64> a, std::span<const u64> b) const {
    return packed_product(a, 1, b, 1);
}

RadicalElem RadicalField::pow(std::span<const u64> a, const BigExponent& e) const {
    RadicalElem result = one();
    RadicalElem base(a.begin(), a.end());
    const std::size_t bits = bit_length(e);
    for (std::size_t k = bits; k-- > 0;) {
        result = mul(result, result);
        if (bit_test(e, k)) result = mul(result, base);
    }
    return result;
}

RadicalElem RadicalField::inverse(std::span<const u64> a) const {
    if (is_zero(a)) throw Error(Errc::division_by_zero, "inverse of zero in a radical extension");
    if (level_ == 0) {
        Xgcd g = xgcd(DensePoly(field(), std::vector<u64>(a.begin(), a.end())), p0_);
        if (!g.g.is_one()) throw Error(Errc::corrupted_state, "P_0 is not irreducible");
        return from_base(g.u);
    }
    if (is_one(a)) return one();
    if (zeta_powers_.empty()) return pow(a, big_pow(field().modulus(), dimension()) - 2);
    // a^{-1} = (prod_{k>0} sigma^k a) / N(a), with the norm N(a) in K_{j-1}.
    RadicalElem others = conjugate(a, 1);
    for (std::size_t k = 2; k < ell_; ++k) others = mul(others, conjugate(a, k));
    const RadicalElem norm = mul(a, others);
    const RadicalField below(p0_, ell_, level_ - 1);
    RadicalElem norm_below = below.zero();
    for (std::size_t e = 0; e < below.span(); ++e)
        for (std::size_t d = 0; d < r_; ++d) norm_below[e * r_ + d] = norm[e * ell_ * r_ + d];
    return mul(others, embed_from_below(below.inverse(norm_below)));
}

RadicalElem RadicalField::embed_from_below(std::span<const u64> a) const {
    RadicalElem out = zero();
    const std::size_t below = span_ / static_cast<std::size_t>(ell_);
    for (std::size_t e = 0; e < below; ++e)
        for (std::size_t d = 0; d < r_; ++d) out[e * ell_ * r_ + d] = a[e * r_ + d];
    return out;
}

std::vector<RadicalElem> RadicalField::split_below(std::span<const u64> a) const {
    const std::size_t below = span_ / static_cast<std::size_t>(ell_);
    std::vector<RadicalElem> parts(ell_, RadicalElem(below * r_, 0));
    for (std::size_t e = 0; e < span_; ++e)
        for (std::size_t d = 0; d < r_; ++d) parts[e % ell_][(e / ell_) * r_ + d] = a[e * r_ + d];
    return parts;
}

// ---------------------------------------------------------------- K_j[X]

void RadicalField::normalize(KPoly& a) const {
    const std::size_t dim = dimension();
    std::size_t n = a.flat.size() / dim;
    while (n > 0 && is_zero(std::span<const u64>(a.flat).subspan((n - 1) * dim, dim))) --n;
    a.flat.resize(n * dim);
}

long RadicalField::degree(const KPoly& a) const {
    return static_cast<long>(a.flat.size() / dimension()) - 1;
}

std::span<const u64> RadicalField::coeff(const KPoly& a, std::size_t k) const {
    return std::span<const u64>(a.flat).subspan(k * dimension(), dimension());
}

RadicalElem RadicalField::coeff_or_zero(const KPoly& a, std::size_t k) const {
    if (static_cast<long>(k) > degree(a)) return zero();
    auto c = coeff(a, k);
    return {c.begin(), c.end()};
}

KPoly RadicalField::poly_from(std::vector<u64> flat) const {
    KPoly a{std::move(flat)};
    normalize(a);
    return a;
}

KPoly RadicalField::poly_x_minus(std::span<const u64> c) const {
    std::vector<u64> flat(2 * dimension(), 0);
    for (std::size_t k = 0; k < dimension(); ++k) flat[k] = field().neg(c[k]);
    flat[dimension()] = 1;
    return KPoly{std::move(flat)};
}

KPoly RadicalField::poly_add(const KPoly& a, const KPoly& b) const {
    const KPoly& lo = a.flat.size() < b.flat.size() ? a : b;
    KPoly out = a.flat.size() < b.flat.size() ? b : a;
    for (std::size_t k = 0; k < lo.flat.size(); ++k) out.flat[k] = field().add(out.flat[k], lo.flat[k]);
    normalize(out);
    return out;
}

KPoly RadicalField::poly_sub(const KPoly& a, const KPoly& b) const {
    KPoly out = a;
    if (out.flat.size() < b.flat.size()) out.flat.resize(b.flat.size(), 0);
    for (std::size_t k = 0; k < b.flat.size(); ++k) out.flat[k] = field().sub(out.flat[k], b.flat[k]);
    normalize(out);
    return out;
}

KPoly RadicalField::poly_mul(const KPoly& a, const KPoly& b) const {
    if (a.flat.empty() || b.flat.empty()) return {};
    const std::size_t dim = dimension();
    return poly_from(packed_product(a.flat, a.flat.size() / dim, b.flat, b.flat.size() / dim));
}

KPoly RadicalField::poly_scale(const KPoly& a, std::span<const u64> c) const {
    if (a.flat.empty() || is_zero(c)) return {};
    return poly_from(packed_product(a.flat, a.flat.size() / dimension(), c, 1));
}

KPoly RadicalField::poly_pow(const KPoly& a, u64 e) const {
    KPoly result = poly_constant(one());
    KPoly base = a;
    while (e) {
        if (e & 1) result = poly_mul(result, base);
        e >>= 1;
        if (e) base = poly_mul(base, base);
    }
    return result;
}

KPoly RadicalField::truncated(const KPoly& a, std::size_t k) const {
    if (a.flat.size() <= k * dimension()) return a;
    return poly_from(std::vector<u64>(a.flat.begin(), a.flat.begin() + static_cast<std::ptrdiff_t>(k * dimension())));
}

KPoly RadicalField::reversed(const KPoly& a, std::size_t n) const {
    const std::size_t dim = dimension();
    const std::size_t na = a.flat.size() / dim;
    std::vector<u64> flat(n * dim, 0);
    for (std::size_t k = 0; k < na && k < n; ++k)
        std::copy_n(a.flat.begin() + static_cast<std::ptrdiff_t>(k * dim), dim,
                    flat.begin() + static_cast<std::ptrdiff_t>((n - 1 - k) * dim));
    return poly_from(std::move(flat));
}

KPoly RadicalField::monic(const KPoly& a) const {
    if (a.flat.empty()) throw Error(Errc::division_by_zero, "monic normalization of zero");
    return poly_scale(a, inverse(coeff(a, static_cast<std::size_t>(degree(a)))));
}

// Newton iteration g <- g + g (1 - a g) mod X^k.
KPoly RadicalField::inv_series(const KPoly& a, std::size_t k) const {
    KPoly g = poly_constant(inverse(coeff_or_zero(a, 0)));
    const KPoly unit = poly_constant(one());
    for (std::size_t prec = 1; prec < k;) {
        prec = std::min(2 * prec, k);
        KPoly err = poly_sub(unit, truncated(poly_mul(truncated(a, prec), g), prec));
        g = poly_add(g, truncated(poly_mul(g, err), prec));
    }
    return truncated(g, k);
}

std::pair<KPoly, KPoly> RadicalField::divrem(const KPoly& a, const KPoly& b) const {
    if (b.flat.empty()) throw Error(Errc::division_by_zero, "polynomial division by zero");
    const long da = degree(a), db = degree(b);
    if (da < db) return {KPoly{}, a};
    const RadicalElem u = inverse(coeff(b, static_cast<std::size_t>(db)));
    const KPoly bm = poly_scale(b, u);
    const std::size_t qlen = static_cast<std::size_t>(da - db + 1);
    KPoly qrev = truncated(poly_mul(truncated(reversed(a, static_cast<std::size_t>(da + 1)), qlen),
                                    inv_series(reversed(bm, static_cast<std::size_t>(db + 1)), qlen)),
                           qlen);
    KPoly q = reversed(qrev, qlen);
    KPoly rem = truncated(poly_sub(a, poly_mul(q, bm)), static_cast<std::size_t>(db));
    return {poly_scale(q, u), rem};
}

KPoly RadicalField::exact_div(const KPoly& a, const KPoly& b) const {
    auto [q, r] = divrem(a, b);
    if (!r.flat.empty()) throw Error(Errc::corrupted_state, "inexact division in the subresultant sequence");
    return q;
}

KPoly RadicalField::inverse_mod(const KPoly& a, const KPoly& m) const {
    KPoly r0 = m, r1 = divrem(a, m).second;
    KPoly s0{}, s1 = poly_constant(one());
    while (!r1.flat.empty()) {
        auto [q, rr] = divrem(r0, r1);
        KPoly s2 = poly_sub(s0, poly_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(rr);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (degree(r0) != 0) throw Error(Errc::corrupted_state, "element is not invertible modulo the relative minimal polynomial");
    return divrem(poly_scale(s0, inverse(coeff(r0, 0))), m).second;
}

RadicalElem RadicalField::evaluate(const KPoly& a, std::span<const u64> x) const {
    RadicalElem acc = zero();
    for (long k = degree(a); k >= 0; --k) acc = add(mul(acc, x), coeff(a, static_cast<std::size_t>(k)));
    return acc;
}

// ---------------------------------------------------------------- KPolyModulus

KPolyModulus::KPolyModulus(RadicalField ring, KPoly modulus, std::size_t max_input_size)
    : ring_(std::move(ring)), modulus_(std::move(modulus)) {
    const long d = ring_.degree(modulus_);
    if (d < 1 || !ring_.is_zero(ring_.sub(ring_.coeff(modulus_, static_cast<std::size_t>(d)), ring_.one())))
        throw Error(Errc::invalid_parameter, "relative modulus must be monic of positive degree");
    n_ = static_cast<std::size_t>(d);
    const std::size_t qmax = std::max<std::size_t>(max_input_size, n_ + 1) - n_;
    recip_ = ring_.inv_series(ring_.reversed(modulus_, n_ + 1), qmax);
}

KPoly KPolyModulus::reduce(const KPoly& a) const {
    const long da = ring_.degree(a);
    if (da < static_cast<long>(n_)) return a;
    const std::size_t qlen = static_cast<std::size_t>(da + 1) - n_;
    if (qlen > static_cast<std::size_t>(ring_.degree(recip_) + 1) && qlen > 1)
        return ring_.divrem(a, modulus_).second;
    KPoly qrev = ring_.truncated(
        ring_.poly_mul(ring_.truncated(ring_.reversed(a, static_cast<std::size_t>(da + 1)), qlen),
                       ring_.truncated(recip_, qlen)),
        qlen);
    KPoly q = ring_.reversed(qrev, qlen);
    return ring_.truncated(ring_.poly_sub(a, ring_.poly_mul(q, modulus_)), n_);
}

// ---------------------------------------------------------------- subresultants

namespace {

void trim(YPoly& a) {
    while (!a.empty() && a.back().flat.empty()) a.pop_back();
}

long ydeg(const YPoly& a) { return static_cast<long>(a.size()) - 1; }

YPoly yscale(const RadicalField& k, const YPoly& a, const KPoly& c) {
    YPoly out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = k.poly_mul(a[i], c);
    trim(out);
    return out;
}

// lc(b)^{deg a - deg b + 1} a mod b
YPoly pseudo_remainder(const RadicalField& k, YPoly a, const YPoly& b) {
    const KPoly& lb = b.back();
    long remaining = ydeg(a) - ydeg(b) + 1;
    while (!a.empty() && ydeg(a) >= ydeg(b)) {
        const KPoly lr = a.back();
        const std::size_t shift = static_cast<std::size_t>(ydeg(a) - ydeg(b));
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = k.poly_mul(a[i], lb);
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = k.poly_sub(a[i + shift], k.poly_mul(b[i], lr));
        trim(a);
        --remaining;
    }
    if (remaining > 0 && !a.empty()) a = yscale(k, a, k.poly_pow(lb, static_cast<u64>(remaining)));
    return a;
}

}  // namespace

// Subresultant sequence for the resultant over the domain K_j[X], without content removal.
SubresultantResult resultant_and_degree_one(const RadicalField& k, YPoly a, YPoly b) {
    trim(a);
    trim(b);
    SubresultantResult out;
    if (a.empty() || b.empty()) return out;
    bool negate = false;
    if (ydeg(a) < ydeg(b)) {
        std::swap(a, b);
        if (ydeg(a) % 2 == 1 && ydeg(b) % 2 == 1) negate = true;
    }
    if (ydeg(b) == 1) out.degree_one = b;
    if (ydeg(b) == 0) {
        out.resultant = k.poly_pow(b[0], static_cast<u64>(ydeg(a)));
        return out;
    }
    KPoly g = k.poly_constant(k.one()), h = g;
    for (;;) {
        const long delta = ydeg(a) - ydeg(b);
        if (ydeg(a) % 2 == 1 && ydeg(b) % 2 == 1) negate = !negate;
        YPoly rem = pseudo_remainder(k, a, b);
        a = std::move(b);
        if (rem.empty()) return out;  // common factor: the resultant vanishes
        const KPoly divisor = k.poly_mul(g, k.poly_pow(h, static_cast<u64>(delta)));
        b.resize(rem.size());
        for (std::size_t i = 0; i < rem.size(); ++i) b[i] = k.exact_div(rem[i], divisor);
        trim(b);
        if (ydeg(b) == 1) out.degree_one = b;
        g = a.back();
        // h <- g^delta / h^{delta - 1}
        if (delta == 1)
            h = g;
        else if (delta > 1)
            h = k.exact_div(k.poly_pow(g, static_cast<u64>(delta)), k.poly_pow(h, static_cast<u64>(delta - 1)));
        if (ydeg(b) > 0) continue;
        const long da = ydeg(a);
        KPoly res = k.exact_div(k.poly_pow(b[0], static_cast<u64>(da)), k.poly_pow(h, static_cast<u64>(da - 1)));
        out.resultant = negate ? k.poly_sub(KPoly{}, res) : res;
        return out;
    }
}

// ---------------------------------------------------------------- K_0 and x_i

bool nonresidue_test(const ModulusContext& ctx, const DensePoly& alpha, u64 ell) {
    DensePoly a = ctx.reduce(alpha);
    if (a.is_zero()) throw Error(Errc::invalid_parameter, "residuosity of zero");
    const BigExponent order = big_pow(ctx.field().modulus(), ctx.degree()) - 1;
    if (order % ell != 0) return false;  // every element is an ell-th power
    return !ctx.pow(a, BigExponent(order / ell)).is_one();
}

K0Context general_init(const PrimeField& field, u64 ell, Rng& rng, std::size_t cap) {
    const u64 p = field.modulus();
    if (ell < 3 || !is_prime_u64(ell) || ell == p)
        throw Error(Errc::invalid_parameter, "general: ell must be an odd prime different from p");
    const std::size_t r = static_cast<std::size_t>(multiplicative_order(p % ell, ell));
    DensePoly phi = cyclotomic(field, ell);
    DensePoly factor = r == ell - 1 ? phi : factor_equal_degree(phi, r, rng, cap);
    ModulusContext ctx(factor);
    for (std::size_t attempt = 0; attempt < cap; ++attempt) {
        DensePoly y = DensePoly::random(field, r, rng);
        if (y.is_zero() || !nonresidue_test(ctx, y, ell)) continue;
        // A non-residue cannot lie in a proper subfield (those are all ell-th powers), but check anyway.
        DensePoly p0 = minpoly_in_quotient(y, ctx, r);
        if (p0.degree() != static_cast<long>(r)) continue;
        return K0Context{field, ell, r, std::move(factor), std::move(y), std::move(p0), big_pow(p, r) - 1};
    }
    throw Error(Errc::iteration_cap, "general: no non-residue seed found");
}

RadicalElem xi_element(const K0Context& ctx, unsigned i) {
    const RadicalField k = ctx.level(i);
    const RadicalField k0 = ctx.level(0);
    const ModulusContext base(ctx.base_modulus);
    const BigExponent span = big_pow(ctx.ell, i);
    const BigExponent modulus = span * ctx.group_order;
    const DensePoly z = DensePoly::x(ctx.field);
    RadicalElem out = k.zero();
    for (std::size_t j = 0; j < ctx.degree; ++j) {
        // y_i^E with E = p^{ell^i j} mod ell^i (p^r - 1), split as y_i^{E mod ell^i} y_0^{E div ell^i}.
        const BigExponent e = boost::multiprecision::powm(BigExponent(ctx.field.modulus()), span * j, modulus);
        const std::size_t lo = static_cast<std::size_t>(e % span);
        const BigExponent hi = e / span;
        const RadicalElem c = k0.from_base(base.pow(z, hi));
        for (std::size_t d = 0; d < ctx.degree; ++d)
            out[lo * ctx.degree + d] = ctx.field.add(out[lo * ctx.degree + d], c[d]);
    }
    return out;
}

// ---------------------------------------------------------------- descent

const RadicalField& DescentData::field_at(unsigned j) const {
    return relative_minpoly(j).ring();
}

const KPolyModulus& DescentData::relative_minpoly(unsigned j) const {
    if (j == level) return top;
    return steps.at(level - 1 - j).minpoly;
}

DensePoly to_prime_field(const RadicalField& k0, const KPoly& a) {
    const std::size_t dim = k0.dimension();
    std::vector<u64> c(a.flat.size() / dim);
    for (std::size_t k = 0; k < c.size(); ++k) {
        auto e = k0.coeff(a, k);
        if (!k0.is_prime_field_constant(e))
            throw Error(Errc::corrupted_state, "descent produced a coefficient outside the prime field");
        c[k] = e[0];
    }
    return DensePoly(k0.field(), std::move(c));
}

KPoly from_prime_field(const RadicalField& k0, const DensePoly& a) {
    std::vector<u64> flat(a.size() * k0.dimension(), 0);
    for (std::size_t k = 0; k < a.size(); ++k) flat[k * k0.dimension()] = a[k];
    return k0.poly_from(std::move(flat));
}

namespace {

// The coefficient of Y^t in each coefficient of w, as polynomials over K_{j-1}.
std::vector<KPoly> split_coefficients(const RadicalField& upper, const RadicalField& below, const KPoly& w) {
    const std::size_t ell = static_cast<std::size_t>(upper.ell());
    const std::size_t n = static_cast<std::size_t>(upper.degree(w) + 1);
    std::vector<std::vector<u64>> flats(ell, std::vector<u64>(n * below.dimension(), 0));
    for (std::size_t k = 0; k < n; ++k) {
        auto parts = upper.split_below(upper.coeff(w, k));
        for (std::size_t t = 0; t < ell; ++t)
            std::copy(parts[t].begin(), parts[t].end(),
                      flats[t].begin() + static_cast<std::ptrdiff_t>(k * below.dimension()));
    }
    std::vector<KPoly> out;
    out.reserve(ell);
    for (auto& fl : flats) out.push_back(below.poly_from(std::move(fl)));
    return out;
}

// Psi_{i,j}: substitute y_j = S(X) by Horner's scheme modulo Q_{i,j-1}.
KPoly psi_step(const DescentData& data, std::size_t step, const KPoly& w) {
    const unsigned j = data.level - static_cast<unsigned>(step);
    const DescentStep& s = data.steps[step];
    const RadicalField& below = s.minpoly.ring();
    std::vector<KPoly> parts = split_coefficients(data.field_at(j), below, w);
    KPoly acc = parts.back();
    for (std::size_t t = parts.size() - 1; t-- > 0;) acc = below.poly_add(s.minpoly.mul(acc, s.section), parts[t]);
    return acc;
}

// Psi_{i,j}^{-1}: view the coefficients in K_j and reduce modulo Q_{i,j}.
KPoly psi_step_inverse(const DescentData& data, unsigned j, const KPoly& w) {
    const RadicalField& upper = data.field_at(j);
    const RadicalField& below = data.field_at(j - 1);
    const std::size_t n = static_cast<std::size_t>(below.degree(w) + 1);
    std::vector<u64> flat(n * upper.dimension(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        RadicalElem e = upper.embed_from_below(below.coeff(w, k));
        std::copy(e.begin(), e.end(), flat.begin() + static_cast<std::ptrdiff_t>(k * upper.dimension()));
    }
    return data.relative_minpoly(j).reduce(upper.poly_from(std::move(flat)));
}

}  // namespace

DescentData descend(const K0Context& ctx, unsigned i) {
    const std::size_t ell = static_cast<std::size_t>(ctx.ell);
    RadicalField top_ring = ctx.level(i);
    RadicalElem x = xi_element(ctx, i);
    KPoly current = top_ring.poly_x_minus(x);
    DescentData data{i, x, KPolyModulus(top_ring, current, ell), {}, DensePoly(ctx.field)};
    for (unsigned j = i; j >= 1; --j) {
        const RadicalField upper = ctx.level(j);
        const RadicalField below = ctx.level(j - 1);
        const std::size_t n = static_cast<std::size_t>(upper.degree(current));
        // Q*: the coefficients of Q_{i,j} split along Y_j, against Y_j^ell - y_{j-1}.
        YPoly star = split_coefficients(upper, below, current);
        YPoly radical(ell + 1);
        radical[0] = below.poly_constant(below.neg(below.generator()));
        radical[ell] = below.poly_constant(below.one());
        SubresultantResult sr = resultant_and_degree_one(below, std::move(radical), std::move(star));
        if (sr.resultant.flat.empty() || below.degree(sr.resultant) != static_cast<long>(ell * n))
            throw Error(Errc::corrupted_state, "descent: resultant has the wrong degree");
        KPoly q = below.monic(sr.resultant);
        if (sr.degree_one.size() != 2)
            throw Error(Errc::corrupted_state, "descent: degree-1 subresultant vanishes");
        KPolyModulus mod(below, q, ell * ell * n);
        KPoly lead_inv = below.inverse_mod(sr.degree_one[1], q);
        KPoly section = mod.reduce(below.poly_sub(KPoly{}, below.poly_mul(sr.degree_one[0], lead_inv)));
        data.steps.push_back(DescentStep{std::move(mod), std::move(section)});
        current = std::move(q);
    }
    data.minpoly = to_prime_field(data.field_at(0), current);
    if (!data.minpoly.is_monic() || data.minpoly.degree() != static_cast<long>(ipow(ell, i)))
        throw Error(Errc::corrupted_state, "descent: Q_i has the wrong shape");
    return data;
}

KPoly psi_apply(const DescentData& data, std::span<const u64> v) {
    KPoly w = data.field_at(data.level).poly_constant(v);
    for (std::size_t step = 0; step < data.steps.size(); ++step) w = psi_step(data, step, w);
    return w;
}

RadicalElem psi_invert(const DescentData& data, const KPoly& w) {
    KPoly cur = data.relative_minpoly(0).reduce(w);
    for (unsigned j = 1; j <= data.level; ++j) cur = psi_step_inverse(data, j, cur);
    return data.field_at(data.level).coeff_or_zero(cur, 0);
}

BiPoly general_fiber_poly(const DescentData& data, const DescentData& below) {
    const std::size_t ell = static_cast<std::size_t>(data.field_at(0).ell());
    const RadicalField& k = data.field_at(data.level - 1);
    const KPoly& rel = data.relative_minpoly(data.level - 1).modulus();
    const std::size_t n = static_cast<std::size_t>(below.minpoly.degree());
    BiPoly out(data.minpoly.field(), n, ell + 1);
    for (std::size_t t = 0; t <= ell; ++t) {
        DensePoly col = to_prime_field(below.field_at(0), psi_apply(below, k.coeff_or_zero(rel, t)));
        for (std::size_t s = 0; s < col.size(); ++s) out.set(s, t, col[s]);
    }
    return out;
}

DensePoly general_lift(const BiPoly& a, const DescentData& data, const DescentData& below) {
    const RadicalField& k0 = data.field_at(0);
    const RadicalField& prev = data.field_at(data.level - 1);
    const std::size_t ell = a.cols();
    std::vector<u64> flat(ell * prev.dimension(), 0);
    for (std::size_t t = 0; t < ell; ++t) {
        RadicalElem c = psi_invert(below, from_prime_field(k0, a.column(t)));
        std::copy(c.begin(), c.end(), flat.begin() + static_cast<std::ptrdiff_t>(t * prev.dimension()));
    }
    KPoly v = psi_step_inverse(data, data.level, prev.poly_from(std::move(flat)));
    return to_prime_field(k0, psi_apply(data, data.field_at(data.level).coeff_or_zero(v, 0)));
}

BiPoly general_push(const DensePoly& a, const DescentData& data, const DescentData& below) {
    const RadicalField& k0 = data.field_at(0);
    const RadicalField& prev = data.field_at(data.level - 1);
    const std::size_t ell = static_cast<std::size_t>(k0.ell());
    const std::size_t n = static_cast<std::size_t>(below.minpoly.degree());
    RadicalElem v = psi_invert(data, from_prime_field(k0, a));
    KPoly w = psi_step(data, 0, data.field_at(data.level).poly_constant(v));
    BiPoly out(a.field(), n, ell);
    for (std::size_t t = 0; t < ell; ++t) {
        DensePoly col = to_prime_field(k0, psi_apply(below, prev.coeff_or_zero(w, t)));
        for (std::size_t s = 0; s < col.size(); ++s) out.set(s, t, col[s]);
    }
    return out;
}

}  // namespace ltower
