#include "ltower/modulus.hpp"

#include <cmath>

#include "ltower/error.hpp"

namespace ltower {

namespace {
constexpr std::size_t kNewtonCutoff = 64;
}

ModulusContext::ModulusContext(DensePoly modulus) : q_(std::move(modulus)), n_(0), recip_(q_.field()) {
    if (q_.degree() < 1) throw Error(Errc::invalid_parameter, "modulus must have degree >= 1");
    if (!q_.is_monic()) throw Error(Errc::invalid_parameter, "modulus must be monic");
    n_ = static_cast<std::size_t>(q_.degree());
    recip_ = inv_series(q_.reversed(n_ + 1), n_);
}

std::pair<DensePoly, DensePoly> ModulusContext::divrem(const DensePoly& a) const {
    if (a.degree() < static_cast<long>(n_)) return {DensePoly(field()), a};
    const std::size_t da = static_cast<std::size_t>(a.degree());
    if (n_ < kNewtonCutoff || da > 2 * n_ - 1) return ltower::divrem(a, q_);
    const std::size_t qlen = da - n_ + 1;
    DensePoly ra = a.reversed(da + 1).truncated(qlen);
    DensePoly quo = mul_trunc(ra, recip_, qlen).reversed(qlen);
    DensePoly rem = (a - ltower::mul(quo, q_)).truncated(n_);
    return {std::move(quo), std::move(rem)};
}

DensePoly ModulusContext::reduce(const DensePoly& a) const {
    if (a.degree() < static_cast<long>(n_)) return a;
    return divrem(a).second;
}

DensePoly ModulusContext::pow(const DensePoly& a, u64 e) const {
    DensePoly r = DensePoly::constant(field(), 1);
    DensePoly base = reduce(a);
    while (e) {
        if (e & 1) r = mul(r, base);
        e >>= 1;
        if (e) base = sqr(base);
    }
    return r;
}

DensePoly ModulusContext::pow(const DensePoly& a, const BigExponent& e) const {
    DensePoly r = reduce(DensePoly::constant(field(), 1));
    const DensePoly base = reduce(a);
    for (long i = static_cast<long>(bit_length(e)) - 1; i >= 0; --i) {
        r = sqr(r);
        if (bit_test(e, static_cast<unsigned>(i))) r = mul(r, base);
    }
    return r;
}

DensePoly ModulusContext::inverse(const DensePoly& a) const {
    DensePoly ar = reduce(a);
    if (ar.is_zero()) throw Error(Errc::division_by_zero, "inverse of zero in quotient ring");
    Xgcd x = xgcd(ar, q_);
    if (!x.g.is_one()) throw Error(Errc::division_by_zero, "element not invertible modulo Q");
    return reduce(x.u);
}

DensePoly ModulusContext::compose(const DensePoly& g, const DensePoly& h) const {
    const PrimeField& f = field();
    if (g.degree() <= 0) return reduce(g);
    const std::size_t len = g.size();
    const std::size_t m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(len))));
    std::vector<DensePoly> baby;
    baby.reserve(m + 1);
    baby.push_back(reduce(DensePoly::constant(f, 1)));
    const DensePoly hr = reduce(h);
    for (std::size_t j = 1; j <= m; ++j) baby.push_back(mul(baby.back(), hr));
    const DensePoly giant = baby[m];
    baby.pop_back();

    const std::size_t blocks = (len + m - 1) / m;
    const u64 p = f.modulus();
    // block_k = sum_j g[k*m + j] * baby[j], accumulated as a dense matrix product.
    auto block = [&](std::size_t k) {
        std::vector<u128> acc(n_, 0);
        std::vector<u64> out(n_, 0);
        const std::size_t batch = f.small() ? m : 15;
        std::size_t cnt = 0;
        for (std::size_t j = 0; j < m && k * m + j < len; ++j) {
            u64 c = g[k * m + j];
            if (c == 0) continue;
            const auto& bc = baby[j].coeffs();
            for (std::size_t t = 0; t < bc.size(); ++t) acc[t] += static_cast<u128>(c) * bc[t];
            if (++cnt == batch) {
                for (auto& v : acc) v %= p;
                cnt = 0;
            }
        }
        for (std::size_t t = 0; t < n_; ++t) out[t] = static_cast<u64>(acc[t] % p);
        return DensePoly(f, std::move(out));
    };
    DensePoly r = block(blocks - 1);
    for (std::size_t k = blocks - 1; k-- > 0;) r = mul(r, giant) + block(k);
    return r;
}

}  // namespace ltower
