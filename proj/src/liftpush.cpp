#include "ltower/liftpush.hpp"

#include <map>

#include "ltower/error.hpp"

namespace ltower {

FiberRelation FiberRelation::make(DensePoly f, DensePoly g) {
    if (f.degree() < 1 || !f.is_monic()) throw Error(Errc::invalid_parameter, "fiber relation: f must be monic");
    if (g.is_zero() || g.degree() >= f.degree())
        throw Error(Errc::invalid_parameter, "fiber relation: need 0 <= deg g < deg f");
    const std::size_t ell = static_cast<std::size_t>(f.degree());
    ModulusContext ctx(f);
    DensePoly h(f.field());
    try {
        h = ctx.inverse(g);
    } catch (const Error&) {
        throw Error(Errc::invalid_parameter, "fiber relation: gcd(f, g) != 1");
    }
    return FiberRelation{std::move(f), std::move(g), ell, std::move(h)};
}

BiPoly::BiPoly(const PrimeField& field, std::size_t rows, std::size_t cols, std::vector<u64> data)
    : field_(field), rows_(rows), cols_(cols), c_(std::move(data)) {
    if (c_.size() != rows_ * cols_) throw Error(Errc::invalid_parameter, "BiPoly: data size mismatch");
    for (auto& v : c_) v = field_.reduce(v);
}

BiPoly BiPoly::random(const PrimeField& field, std::size_t rows, std::size_t cols, Rng& rng) {
    BiPoly b(field, rows, cols);
    for (auto& v : b.c_) v = field.random(rng);
    return b;
}

BiPoly BiPoly::from_x_poly(const DensePoly& a, std::size_t rows, std::size_t cols) {
    if (a.size() > rows) throw Error(Errc::invalid_parameter, "BiPoly: X-degree too large");
    BiPoly b(a.field(), rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) b.c_[i * cols] = a[i];
    return b;
}

DensePoly BiPoly::row(std::size_t i) const {
    auto first = c_.begin() + static_cast<std::ptrdiff_t>(i * cols_);
    return DensePoly(field_, std::vector<u64>(first, first + static_cast<std::ptrdiff_t>(cols_)));
}

void BiPoly::set_row(std::size_t i, const DensePoly& r) {
    if (r.size() > cols_) throw Error(Errc::invalid_parameter, "BiPoly: Y-degree too large");
    for (std::size_t j = 0; j < cols_; ++j) c_[i * cols_ + j] = r[j];
}

DensePoly BiPoly::column(std::size_t j) const {
    std::vector<u64> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = c_[i * cols_ + j];
    return DensePoly(field_, std::move(v));
}

bool BiPoly::y_free() const {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 1; j < cols_; ++j)
            if (c_[i * cols_ + j] != 0) return false;
    return true;
}

namespace {

// Powers of f and g, contexts modulo f^k and the inverses of g^k mod f^k,
// memoized per call. Each recursion depth touches at most two distinct sizes.
class PowerCache {
public:
    PowerCache(const DensePoly& f, const DensePoly& g, const DensePoly* h) : f_(f), g_(g), h_(h) {}

    const DensePoly& f_pow(std::size_t k) { return power(fpow_, f_, k); }
    const DensePoly& g_pow(std::size_t k) { return power(gpow_, g_, k); }

    const ModulusContext& f_ctx(std::size_t k) {
        auto it = fctx_.find(k);
        if (it == fctx_.end()) it = fctx_.emplace(k, ModulusContext(f_pow(k))).first;
        return it->second;
    }

    // 1 / g^e mod f^k: h^e mod f, then f-adic Newton lifting.
    const DensePoly& g_inv(std::size_t e, std::size_t k) {
        auto key = std::make_pair(e, k);
        auto it = ginv_.find(key);
        if (it != ginv_.end()) return it->second;
        DensePoly u(f_.field());
        const DensePoly& big_g = g_pow(e);
        if (k == 1) {
            u = f_ctx(1).pow(*h_, static_cast<u64>(e));
        } else {
            const std::size_t half = (k + 1) / 2;
            const ModulusContext& ctx = f_ctx(k);
            u = g_inv(e, half);
            // u <- u (2 - G u) mod f^k
            DensePoly gu = ctx.mul(ctx.reduce(big_g), u);
            DensePoly two = DensePoly::constant(f_.field(), 2);
            u = ctx.mul(u, two - gu);
        }
        return ginv_.emplace(key, std::move(u)).first->second;
    }

private:
    static const DensePoly& power(std::map<std::size_t, DensePoly>& memo, const DensePoly& base, std::size_t k) {
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        DensePoly r(base.field());
        if (k == 0) {
            r = DensePoly::constant(base.field(), 1);
        } else if (k == 1) {
            r = base;
        } else {
            const DensePoly& half = power(memo, base, k / 2);
            r = square(half);
            if (k & 1) r = mul(r, base);
        }
        return memo.emplace(k, std::move(r)).first->second;
    }

    const DensePoly& f_;
    const DensePoly& g_;
    const DensePoly* h_;
    std::map<std::size_t, DensePoly> fpow_, gpow_;
    std::map<std::size_t, ModulusContext> fctx_;
    std::map<std::pair<std::size_t, std::size_t>, DensePoly> ginv_;
};

DensePoly compose_rec(const BiPoly& p, std::size_t row0, std::size_t n, PowerCache& cache) {
    if (n == 1) return p.row(row0);
    const std::size_t m = (n + 1) / 2;
    DensePoly q0 = compose_rec(p, row0, m, cache);
    DensePoly q1 = compose_rec(p, row0 + m, n - m, cache);
    return mul(q0, cache.g_pow(n - m)) + mul(q1, cache.f_pow(m));
}

void decompose_rec(const DensePoly& q, std::size_t row0, std::size_t n, bool g_const, PowerCache& cache,
                   BiPoly& out) {
    if (n == 1) {
        out.set_row(row0, q);
        return;
    }
    const std::size_t m = (n + 1) / 2;
    const ModulusContext& fm = cache.f_ctx(m);
    DensePoly q0(q.field()), q1(q.field());
    if (g_const) {
        // g^{n-m} is a scalar c: q = q0 c + q1 f^m.
        auto [quo, rem] = fm.divrem(q);
        const DensePoly& c = cache.g_pow(n - m);
        u64 ci = q.field().inv(c[0]);
        q0 = scale(rem, ci);
        q1 = std::move(quo);
    } else {
        const DensePoly& big_g = cache.g_pow(n - m);
        q0 = fm.mul(fm.reduce(q), cache.g_inv(n - m, m));
        auto [quo, rem] = fm.divrem(q - mul(q0, big_g));
        if (!rem.is_zero()) throw Error(Errc::corrupted_state, "decompose: inexact division by f^m");
        q1 = std::move(quo);
    }
    decompose_rec(q0, row0, m, g_const, cache, out);
    decompose_rec(q1, row0 + m, n - m, g_const, cache, out);
}

}  // namespace

DensePoly compose(const BiPoly& p, const DensePoly& f, const DensePoly& g, std::size_t n) {
    if (n == 0 || p.rows() < n) throw Error(Errc::invalid_parameter, "compose: X-degree bound exceeds grid");
    PowerCache cache(f, g, nullptr);
    return compose_rec(p, 0, n, cache);
}

BiPoly decompose(const DensePoly& q, const FiberRelation& rel, std::size_t n) {
    if (n == 0) throw Error(Errc::invalid_parameter, "decompose: n must be positive");
    if (q.degree() >= static_cast<long>(rel.ell * n))
        throw Error(Errc::invalid_parameter, "decompose: degree must be below ell * n");
    PowerCache cache(rel.f, rel.g, &rel.h);
    BiPoly out(q.field(), n, rel.ell);
    decompose_rec(q, 0, n, rel.g_is_constant(), cache, out);
    return out;
}

FiberScaling fiber_scaling(const FiberRelation& rel, const ModulusContext& s, std::size_t n) {
    if (s.degree() != rel.ell * n) throw Error(Errc::invalid_parameter, "fiber scaling: modulus degree != ell * n");
    const PrimeField& f = s.field();
    if (rel.g_is_constant()) {
        u64 c = f.pow(rel.g[0], static_cast<u64>(n - 1));
        return {DensePoly::constant(f, c), DensePoly::constant(f, f.inv(c))};
    }
    try {
        DensePoly gi = s.inverse(rel.g);
        return {s.pow(rel.g, static_cast<u64>(n - 1)), s.pow(gi, static_cast<u64>(n - 1))};
    } catch (const Error&) {
        throw Error(Errc::corrupted_state, "fiber scaling: g not invertible modulo S");
    }
}

DensePoly lift_fiber(const BiPoly& a, const FiberRelation& rel, const ModulusContext& s, std::size_t n,
                     const FiberScaling& scaling) {
    if (a.rows() != n || a.cols() != rel.ell) throw Error(Errc::invalid_parameter, "lift: grid shape mismatch");
    DensePoly star = compose(a, rel.f, rel.g, n);
    if (scaling.gamma_inv.degree() == 0) return s.reduce(scale(star, scaling.gamma_inv[0]));
    return s.mul(star, scaling.gamma_inv);
}

DensePoly lift_fiber(const BiPoly& a, const FiberRelation& rel, const ModulusContext& s, std::size_t n) {
    return lift_fiber(a, rel, s, n, fiber_scaling(rel, s, n));
}

BiPoly push_fiber(const DensePoly& a, const FiberRelation& rel, const ModulusContext& s, std::size_t n,
                  const FiberScaling& scaling) {
    DensePoly ar = s.reduce(a);
    DensePoly star = scaling.gamma.degree() == 0 ? scale(ar, scaling.gamma[0]) : s.mul(ar, scaling.gamma);
    return decompose(star, rel, n);
}

BiPoly push_fiber(const DensePoly& a, const FiberRelation& rel, const ModulusContext& s, std::size_t n) {
    return push_fiber(a, rel, s, n, fiber_scaling(rel, s, n));
}

DensePoly t1_lift(const BiPoly& a, std::size_t ell, std::size_t n) {
    if (a.rows() != n || a.cols() != ell) throw Error(Errc::invalid_parameter, "t1_lift: grid shape mismatch");
    // Row-major order already is the index e * ell + j.
    return DensePoly(a.field(), a.data());
}

BiPoly t1_push(const DensePoly& a, std::size_t ell, std::size_t n) {
    if (a.size() > ell * n) throw Error(Errc::invalid_parameter, "t1_push: degree must be below ell * n");
    std::vector<u64> v(a.coeffs());
    v.resize(ell * n, 0);
    return BiPoly(a.field(), n, ell, std::move(v));
}

}  // namespace ltower
