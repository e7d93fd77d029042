// Three-prime NTT multiplication with CRT reconstruction modulo p.
// Exact for p < 2^62 and product lengths below 2^26.
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ltower/error.hpp"
#include "ltower/poly.hpp"

namespace ltower::detail {

namespace {

class Montgomery {
public:
    explicit Montgomery(u64 m) : m_(m) {
        u64 inv = m;  // Newton iteration for m^{-1} mod 2^64
        for (int i = 0; i < 6; ++i) inv *= 2 - m * inv;
        neg_inv_ = ~inv + 1;
        u128 r = (static_cast<u128>(1) << 64) % m;
        r2_ = static_cast<u64>((r * r) % m);
    }

    u64 modulus() const { return m_; }
    u64 reduce(u128 t) const {
        u64 q = static_cast<u64>(t) * neg_inv_;
        u128 s = t + static_cast<u128>(q) * m_;
        u64 r = static_cast<u64>(s >> 64);
        return r >= m_ ? r - m_ : r;
    }
    u64 mul(u64 a, u64 b) const { return reduce(static_cast<u128>(a) * b); }
    u64 to(u64 a) const { return mul(a % m_, r2_); }
    u64 from(u64 a) const { return reduce(a); }
    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= m_ ? s - m_ : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + m_ - b; }
    u64 pow(u64 a, u64 e) const {  // a in Montgomery form
        u64 r = to(1);
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

private:
    u64 m_;
    u64 neg_inv_;
    u64 r2_;
};

struct NttPrime {
    u64 modulus;
    u64 generator;
};

constexpr std::array<NttPrime, 3> kPrimes = {{
    {4611686017554972673ull, 5},
    {4611686015004835841ull, 3},
    {4611686009971671041ull, 6},
}};
constexpr int kMaxLog = 26;

// Twiddle layout: table[len + j] = w_{2len}^j for 1 <= len < n, j < len.
std::vector<u64> twiddles(const Montgomery& mg, u64 root, std::size_t n) {
    std::vector<u64> t(std::max<std::size_t>(n, 2));
    const std::size_t half = n / 2;
    if (half == 0) return t;
    u64 w = mg.to(1);
    for (std::size_t j = 0; j < half; ++j) {
        t[half + j] = w;
        w = mg.mul(w, root);
    }
    for (std::size_t len = half / 2; len >= 1; len /= 2)
        for (std::size_t j = 0; j < len; ++j) t[len + j] = t[2 * len + 2 * j];
    return t;
}

void forward(std::vector<u64>& a, const Montgomery& mg, const std::vector<u64>& tw) {
    const std::size_t n = a.size();
    for (std::size_t len = n / 2; len >= 1; len >>= 1) {
        const u64* w = tw.data() + len;
        for (std::size_t i = 0; i < n; i += 2 * len) {
            u64* x = a.data() + i;
            u64* y = x + len;
            for (std::size_t j = 0; j < len; ++j) {
                u64 u = x[j], v = y[j];
                x[j] = mg.add(u, v);
                y[j] = mg.mul(mg.sub(u, v), w[j]);
            }
        }
    }
}

void inverse(std::vector<u64>& a, const Montgomery& mg, const std::vector<u64>& tw) {
    const std::size_t n = a.size();
    for (std::size_t len = 1; len < n; len <<= 1) {
        const u64* w = tw.data() + len;
        for (std::size_t i = 0; i < n; i += 2 * len) {
            u64* x = a.data() + i;
            u64* y = x + len;
            for (std::size_t j = 0; j < len; ++j) {
                u64 u = x[j], v = mg.mul(y[j], w[j]);
                x[j] = mg.add(u, v);
                y[j] = mg.sub(u, v);
            }
        }
    }
}

// Entries at index len + j only depend on len, so the table built for the largest
// size seen so far serves every smaller transform too.
struct TwiddleTables {
    std::size_t size = 0;
    std::vector<u64> fwd;
    std::vector<u64> inv;
};

const TwiddleTables& cached_twiddles(int k, const Montgomery& mg, std::size_t n) {
    thread_local std::array<TwiddleTables, 3> cache;
    TwiddleTables& t = cache[static_cast<std::size_t>(k)];
    if (t.size < n) {
        const NttPrime& pr = kPrimes[static_cast<std::size_t>(k)];
        u64 root = mg.pow(mg.to(pr.generator), (pr.modulus - 1) / n);
        t.fwd = twiddles(mg, root, n);
        t.inv = twiddles(mg, mg.pow(root, n - 1), n);
        t.size = n;
    }
    return t;
}

// Cyclic convolution modulo one NTT prime; result left in Montgomery-free form.
std::vector<u64> convolve_mod(std::span<const u64> a, std::span<const u64> b, bool same, int k, std::size_t n,
                              std::size_t out_len) {
    const NttPrime& pr = kPrimes[static_cast<std::size_t>(k)];
    Montgomery mg(pr.modulus);
    std::vector<u64> fa(n, 0);
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = mg.to(a[i]);
    const TwiddleTables& tw = cached_twiddles(k, mg, n);
    forward(fa, mg, tw.fwd);
    if (same) {
        for (auto& v : fa) v = mg.mul(v, v);
    } else {
        std::vector<u64> fb(n, 0);
        for (std::size_t i = 0; i < b.size(); ++i) fb[i] = mg.to(b[i]);
        forward(fb, mg, tw.fwd);
        for (std::size_t i = 0; i < n; ++i) fa[i] = mg.mul(fa[i], fb[i]);
    }
    inverse(fa, mg, tw.inv);
    // from(x * n^{-1} R) = x * n^{-1}: one Montgomery multiply both scales and leaves the domain.
    const u64 n_inv = mg.pow(mg.to(n), pr.modulus - 2);
    const u64 n_inv_plain = mg.from(n_inv);
    std::vector<u64> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) out[i] = mg.mul(fa[i], n_inv_plain);
    return out;
}

u64 plain_mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 plain_inv(u64 a, u64 m) {
    u64 r = 1, e = m - 2;
    a %= m;
    while (e) {
        if (e & 1) r = plain_mulmod(r, a, m);
        a = plain_mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

int ntt_primes_needed(std::size_t min_len, u64 p) {
    // Exact integer coefficients are below min_len * (p - 1)^2.
    const double bits = std::log2(static_cast<double>(std::max<std::size_t>(min_len, 1))) +
                        2.0 * std::log2(static_cast<double>(p - 1)) + 1.0;
    return bits < 61.5 ? 1 : bits < 123.0 ? 2 : 3;
}

std::vector<u64> mul_ntt(std::span<const u64> a, std::span<const u64> b, const PrimeField& f) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out_len = a.size() + b.size() - 1;
    std::size_t n = 1;
    int lg = 0;
    while (n < out_len) {
        n <<= 1;
        ++lg;
    }
    if (lg > kMaxLog) throw Error(Errc::invalid_parameter, "polynomial product too large for NTT");

    const bool same = a.data() == b.data() && a.size() == b.size();
    const int primes = ntt_primes_needed(std::min(a.size(), b.size()), f.modulus());
    std::array<std::vector<u64>, 3> r;
    for (int k = 0; k < primes; ++k) r[k] = convolve_mod(a, b, same, k, n, out_len);

    std::vector<u64> out(out_len);
    if (primes == 1) {
        for (std::size_t i = 0; i < out_len; ++i) out[i] = f.reduce(r[0][i]);
        return out;
    }

    const u64 m1 = kPrimes[0].modulus, m2 = kPrimes[1].modulus, m3 = kPrimes[2].modulus;
    const Montgomery mg2(m2), mg3(m3);
    // Montgomery-form constants: mg.mul(x, to(c)) = x * c mod m.
    const u64 c12 = mg2.to(plain_inv(m1 % m2, m2));
    const u64 c13 = mg3.to(m1 % m3);
    const u64 c123 = mg3.to(plain_inv(plain_mulmod(m1 % m3, m2 % m3, m3), m3));
    const u64 m1_p = m1 % f.modulus();
    const u64 m1m2_p = f.mul(m1_p, m2 % f.modulus());

    for (std::size_t i = 0; i < out_len; ++i) {
        const u64 t1 = r[0][i];  // m1 > m2 > m3 and the gaps are tiny, so one subtraction reduces
        const u64 t1_2 = t1 >= m2 ? t1 - m2 : t1;
        const u64 t2 = mg2.mul(mg2.sub(r[1][i], t1_2), c12);
        u64 v = f.add(f.reduce(t1), f.mul(f.reduce(t2), m1_p));
        if (primes == 3) {
            const u64 t1_3 = t1 >= m3 ? t1 - m3 : t1;
            const u64 base3 = mg3.add(t1_3, mg3.mul(t2 >= m3 ? t2 - m3 : t2, c13));
            const u64 t3 = mg3.mul(mg3.sub(r[2][i], base3), c123);
            v = f.add(v, f.mul(f.reduce(t3), m1m2_p));
        }
        out[i] = v;
    }
    return out;
}

}  // namespace ltower::detail
