#include "ltower/poly.hpp"

#include <algorithm>
#include <ostream>

#include "ltower/error.hpp"

namespace ltower {

DensePoly::DensePoly(const PrimeField& field, std::vector<u64> coeffs) : field_(field), c_(std::move(coeffs)) {
    for (auto& v : c_) v = field_.reduce(v);
    normalize();
}

DensePoly::DensePoly(const PrimeField& field, std::initializer_list<std::int64_t> coeffs) : field_(field) {
    c_.reserve(coeffs.size());
    for (auto v : coeffs) c_.push_back(field_.from_int(v));
    normalize();
}

DensePoly DensePoly::constant(const PrimeField& field, u64 c) { return DensePoly(field, std::vector<u64>{c}); }

DensePoly DensePoly::monomial(const PrimeField& field, u64 c, std::size_t k) {
    std::vector<u64> v(k + 1, 0);
    v[k] = c;
    return DensePoly(field, std::move(v));
}

DensePoly DensePoly::random(const PrimeField& field, std::size_t size, Rng& rng) {
    std::vector<u64> v(size);
    for (auto& x : v) x = field.random(rng);
    return DensePoly(field, std::move(v));
}

void DensePoly::normalize() noexcept {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void DensePoly::set_coeff(std::size_t i, u64 v) {
    v = field_.reduce(v);
    if (i >= c_.size()) {
        if (v == 0) return;
        c_.resize(i + 1, 0);
    }
    c_[i] = v;
    normalize();
}

DensePoly& DensePoly::operator+=(const DensePoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_.add(c_[i], o.c_[i]);
    normalize();
    return *this;
}

DensePoly& DensePoly::operator-=(const DensePoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_.sub(c_[i], o.c_[i]);
    normalize();
    return *this;
}

u64 DensePoly::evaluate(u64 x) const noexcept {
    x = field_.reduce(x);
    u64 acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = field_.add(field_.mul(acc, x), *it);
    return acc;
}

DensePoly DensePoly::monic() const {
    if (c_.empty() || c_.back() == 1) return *this;
    return scale(*this, field_.inv(c_.back()));
}

DensePoly DensePoly::derivative() const {
    if (c_.size() <= 1) return DensePoly(field_);
    std::vector<u64> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = field_.mul(c_[i], field_.reduce(static_cast<u64>(i)));
    return DensePoly(field_, std::move(v));
}

DensePoly DensePoly::reversed(std::size_t n) const {
    if (c_.size() > n) throw Error(Errc::invalid_parameter, "reversed: degree too large");
    std::vector<u64> v(n, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) v[n - 1 - i] = c_[i];
    return DensePoly(field_, std::move(v));
}

DensePoly DensePoly::truncated(std::size_t k) const {
    if (c_.size() <= k) return *this;
    return DensePoly(field_, std::vector<u64>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(k)));
}

DensePoly DensePoly::shifted_up(std::size_t k) const {
    if (c_.empty()) return *this;
    std::vector<u64> v(c_.size() + k, 0);
    std::copy(c_.begin(), c_.end(), v.begin() + static_cast<std::ptrdiff_t>(k));
    DensePoly r(field_);
    r.c_ = std::move(v);
    return r;
}

DensePoly DensePoly::shifted_down(std::size_t k) const {
    if (c_.size() <= k) return DensePoly(field_);
    DensePoly r(field_);
    r.c_.assign(c_.begin() + static_cast<std::ptrdiff_t>(k), c_.end());
    return r;
}

std::ostream& operator<<(std::ostream& os, const DensePoly& a) {
    if (a.is_zero()) return os << "0";
    bool first = true;
    for (long i = a.degree(); i >= 0; --i) {
        u64 c = a[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0 || c != 1) os << c;
        if (i >= 1) os << (c != 1 ? "*X" : "X");
        if (i >= 2) os << "^" << i;
    }
    return os;
}

DensePoly operator+(DensePoly a, const DensePoly& b) { return a += b; }
DensePoly operator-(DensePoly a, const DensePoly& b) { return a -= b; }
DensePoly operator-(const DensePoly& a) { return DensePoly(a.field()) - a; }
DensePoly operator*(const DensePoly& a, const DensePoly& b) { return mul(a, b); }

DensePoly scale(const DensePoly& a, u64 c) {
    const auto& f = a.field();
    c = f.reduce(c);
    std::vector<u64> v(a.coeffs());
    for (auto& x : v) x = f.mul(x, c);
    return DensePoly(f, std::move(v));
}

namespace detail {

std::vector<u64> mul_schoolbook(std::span<const u64> a, std::span<const u64> b, const PrimeField& f) {
    if (a.empty() || b.empty()) return {};
    if (a.size() < b.size()) std::swap(a, b);
    const std::size_t n = a.size() + b.size() - 1;
    std::vector<u64> out(n);
    // Products are < 2^124 for large p, so at most 16 fit in a u128 before reduction.
    const std::size_t batch = f.small() ? b.size() : 15;
    const u64 p = f.modulus();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t lo = k >= a.size() ? k - a.size() + 1 : 0;
        std::size_t hi = std::min(k, b.size() - 1);
        u128 acc = 0;
        std::size_t cnt = 0;
        for (std::size_t j = lo; j <= hi; ++j) {
            acc += static_cast<u128>(a[k - j]) * b[j];
            if (++cnt == batch) {
                acc %= p;
                cnt = 0;
            }
        }
        out[k] = static_cast<u64>(acc % p);
    }
    return out;
}

namespace {

// Karatsuba on two operands of equal length n, accumulated into out (size 2n-1).
void karatsuba_rec(const u64* a, const u64* b, std::size_t n, u64* out, const PrimeField& f) {
    if (n <= karatsuba_threshold) {
        auto r = mul_schoolbook({a, n}, {b, n}, f);
        for (std::size_t i = 0; i < r.size(); ++i) out[i] = f.add(out[i], r[i]);
        return;
    }
    const std::size_t m = n / 2, h = n - m;  // low half m, high half h >= m
    std::vector<u64> z0(2 * m - 1, 0), z2(2 * h - 1, 0), z1(2 * h - 1, 0);
    karatsuba_rec(a, b, m, z0.data(), f);
    karatsuba_rec(a + m, b + m, h, z2.data(), f);
    std::vector<u64> sa(a + m, a + n), sb(b + m, b + n);
    for (std::size_t i = 0; i < m; ++i) {
        sa[i] = f.add(sa[i], a[i]);
        sb[i] = f.add(sb[i], b[i]);
    }
    karatsuba_rec(sa.data(), sb.data(), h, z1.data(), f);
    for (std::size_t i = 0; i < z0.size(); ++i) z1[i] = f.sub(z1[i], z0[i]);
    for (std::size_t i = 0; i < z2.size(); ++i) z1[i] = f.sub(z1[i], z2[i]);
    for (std::size_t i = 0; i < z0.size(); ++i) out[i] = f.add(out[i], z0[i]);
    for (std::size_t i = 0; i < z1.size(); ++i) out[i + m] = f.add(out[i + m], z1[i]);
    for (std::size_t i = 0; i < z2.size(); ++i) out[i + 2 * m] = f.add(out[i + 2 * m], z2[i]);
}

}  // namespace

std::vector<u64> mul_karatsuba(std::span<const u64> a, std::span<const u64> b, const PrimeField& f) {
    if (a.empty() || b.empty()) return {};
    if (a.size() < b.size()) std::swap(a, b);
    const std::size_t n = a.size(), m = b.size();
    std::vector<u64> out(n + m - 1, 0);
    // Split the longer operand into chunks of the shorter length.
    std::vector<u64> chunk(m), part(2 * m - 1);
    for (std::size_t off = 0; off < n; off += m) {
        std::size_t len = std::min(m, n - off);
        std::fill(chunk.begin(), chunk.end(), 0);
        std::copy(a.begin() + static_cast<std::ptrdiff_t>(off), a.begin() + static_cast<std::ptrdiff_t>(off + len),
                  chunk.begin());
        std::fill(part.begin(), part.end(), 0);
        karatsuba_rec(chunk.data(), b.data(), m, part.data(), f);
        for (std::size_t i = 0; i < part.size() && off + i < out.size(); ++i)
            out[off + i] = f.add(out[off + i], part[i]);
    }
    return out;
}

std::vector<u64> mul_auto(std::span<const u64> a, std::span<const u64> b, const PrimeField& f) {
    const std::size_t s = std::min(a.size(), b.size());
    if (s < karatsuba_threshold) return mul_schoolbook(a, b, f);
    if (s < ntt_thresholds[ntt_primes_needed(s, f.modulus()) - 1]) return mul_karatsuba(a, b, f);
    return mul_ntt(a, b, f);
}

}  // namespace detail

DensePoly mul(const DensePoly& a, const DensePoly& b, MulMethod method) {
    const auto& f = a.field();
    std::span<const u64> x(a.coeffs()), y(b.coeffs());
    std::vector<u64> r;
    switch (method) {
        case MulMethod::schoolbook: r = detail::mul_schoolbook(x, y, f); break;
        case MulMethod::karatsuba: r = detail::mul_karatsuba(x, y, f); break;
        case MulMethod::ntt: r = detail::mul_ntt(x, y, f); break;
        case MulMethod::automatic: r = detail::mul_auto(x, y, f); break;
    }
    return DensePoly(f, std::move(r));
}

DensePoly mul_trunc(const DensePoly& a, const DensePoly& b, std::size_t k) {
    return mul(a.truncated(k), b.truncated(k)).truncated(k);
}

DensePoly square(const DensePoly& a) { return mul(a, a); }

DensePoly pow(const DensePoly& a, u64 e) {
    DensePoly r = DensePoly::constant(a.field(), 1), base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        e >>= 1;
        if (e) base = square(base);
    }
    return r;
}

DensePoly inv_series(const DensePoly& a, std::size_t k) {
    const auto& f = a.field();
    if (a[0] == 0) throw Error(Errc::division_by_zero, "inv_series: constant term is zero");
    DensePoly u = DensePoly::constant(f, f.inv(a[0]));
    std::size_t prec = 1;
    while (prec < k) {
        prec = std::min(2 * prec, k);
        // u <- u + u(1 - a u) mod X^prec
        DensePoly e = mul_trunc(a, u, prec);
        e = DensePoly::constant(f, 1) - e;
        u += mul_trunc(u, e, prec);
    }
    return u.truncated(k);
}

namespace {

std::pair<DensePoly, DensePoly> divrem_schoolbook(const DensePoly& a, const DensePoly& b) {
    const auto& f = a.field();
    const std::size_t db = static_cast<std::size_t>(b.degree());
    std::vector<u64> r(a.coeffs());
    std::vector<u64> q(r.size() - db, 0);
    const u64 lc_inv = f.inv(b.leading());
    const auto& bc = b.coeffs();
    for (std::size_t i = r.size(); i-- > db;) {
        u64 c = f.mul(r[i], lc_inv);
        q[i - db] = c;
        if (c == 0) continue;
        u64 nc = f.neg(c);
        for (std::size_t j = 0; j <= db; ++j) r[i - db + j] = f.add(r[i - db + j], f.mul(nc, bc[j]));
    }
    r.resize(db);
    return {DensePoly(f, std::move(q)), DensePoly(f, std::move(r))};
}

}  // namespace

std::pair<DensePoly, DensePoly> divrem(const DensePoly& a, const DensePoly& b) {
    const auto& f = a.field();
    if (b.is_zero()) throw Error(Errc::division_by_zero, "polynomial division by zero");
    if (a.degree() < b.degree()) return {DensePoly(f), a};
    const std::size_t da = static_cast<std::size_t>(a.degree()), db = static_cast<std::size_t>(b.degree());
    const std::size_t qlen = da - db + 1;
    if (db < 64 || qlen < 64) return divrem_schoolbook(a, b);
    DensePoly ra = a.reversed(da + 1).truncated(qlen);
    DensePoly rb = b.reversed(db + 1);
    DensePoly rq = mul_trunc(ra, inv_series(rb, qlen), qlen);
    DensePoly q = rq.reversed(qlen);
    DensePoly r = a - mul(q, b);
    return {std::move(q), std::move(r)};
}

DensePoly operator/(const DensePoly& a, const DensePoly& b) { return divrem(a, b).first; }
DensePoly operator%(const DensePoly& a, const DensePoly& b) { return divrem(a, b).second; }

Xgcd xgcd(const DensePoly& a, const DensePoly& b) {
    const auto& f = a.field();
    DensePoly r0 = a, r1 = b;
    DensePoly s0 = DensePoly::constant(f, 1), s1(f);
    DensePoly t0(f), t1 = DensePoly::constant(f, 1);
    while (!r1.is_zero()) {
        auto [q, r] = divrem(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        DensePoly s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        DensePoly t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    u64 li = f.inv(r0.leading());
    return {scale(r0, li), scale(s0, li), scale(t0, li)};
}

DensePoly gcd(const DensePoly& a, const DensePoly& b) {
    DensePoly r0 = a, r1 = b;
    while (!r1.is_zero()) {
        DensePoly r = r0 % r1;
        r0 = std::move(r1);
        r1 = std::move(r);
    }
    return r0.monic();
}

}  // namespace ltower
