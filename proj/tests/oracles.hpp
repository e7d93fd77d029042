// Naive reference arithmetic shared by the test binaries. Deliberately written
// without the library so it can serve as an independent oracle.
#ifndef LTOWER_TESTS_ORACLES_HPP
#define LTOWER_TESTS_ORACLES_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<std::uint64_t>;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    for (; e; e >>= 1, a = mulmod(a, a, p))
        if (e & 1) r = mulmod(r, a, p);
    return r;
}

// Fermat inverse; p prime.
inline std::uint64_t inv(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

inline void trim(Vec& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// Products for p < 2^32 are summed in 128 bits and reduced once per coefficient.
inline bool lazy_ok(std::uint64_t p) { return p < (std::uint64_t{1} << 32); }

inline Vec mul(const Vec& a, const Vec& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Vec r(a.size() + b.size() - 1, 0);
    if (lazy_ok(p)) {
        std::vector<unsigned __int128> acc(r.size(), 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += a[i] * b[j];
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = static_cast<std::uint64_t>(acc[k] % p);
    } else {
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    trim(r);
    return r;
}

inline Vec sub(Vec a, const Vec& b, std::uint64_t p) {
    if (b.size() > a.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

inline Vec add(Vec a, const Vec& b, std::uint64_t p) {
    if (b.size() > a.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % p;
    trim(a);
    return a;
}

// Long division by a nonzero divisor; returns {quotient, remainder}.
inline std::pair<Vec, Vec> divmod(Vec a, Vec b, std::uint64_t p) {
    trim(a);
    trim(b);
    if (a.size() < b.size()) return {{}, a};
    Vec q(a.size() - b.size() + 1, 0);
    std::uint64_t li = inv(b.back(), p);
    if (lazy_ok(p)) {
        // Subtraction is done as addition of (p - c) b[j]; only the leading entry is reduced per step.
        std::vector<unsigned __int128> acc(a.begin(), a.end());
        for (std::size_t s = q.size(); s-- > 0;) {
            const std::uint64_t top = static_cast<std::uint64_t>(acc[s + b.size() - 1] % p);
            const std::uint64_t c = mulmod(top, li, p);
            q[s] = c;
            const std::uint64_t nc = (p - c) % p;
            for (std::size_t j = 0; j + 1 < b.size(); ++j) acc[s + j] += nc * b[j];
            acc[s + b.size() - 1] = 0;
        }
        for (std::size_t k = 0; k < a.size(); ++k) a[k] = static_cast<std::uint64_t>(acc[k] % p);
    } else {
        for (std::size_t s = q.size(); s-- > 0;) {
            std::uint64_t c = mulmod(a[s + b.size() - 1], li, p);
            q[s] = c;
            for (std::size_t j = 0; j < b.size(); ++j) a[s + j] = (a[s + j] + p - mulmod(c, b[j], p)) % p;
        }
    }
    trim(q);
    trim(a);
    return {q, a};
}

inline std::uint64_t eval(const Vec& a, std::uint64_t x, std::uint64_t p) {
    std::uint64_t acc = 0;
    for (std::size_t i = a.size(); i-- > 0;) acc = (mulmod(acc, x, p) + a[i]) % p;
    return acc;
}

// Irreducibility by trial division against every monic polynomial of degree
// 1..deg/2. Only for tiny p and degree.
inline bool irreducible_by_trial_division(const Vec& f, std::uint64_t p) {
    const std::size_t d = f.size() - 1;
    if (d < 1) return false;
    for (std::size_t k = 1; 2 * k <= d; ++k) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < k; ++i) count *= p;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            Vec g(k + 1, 0);
            std::uint64_t t = idx;
            for (std::size_t i = 0; i < k; ++i) {
                g[i] = t % p;
                t /= p;
            }
            g[k] = 1;
            if (divmod(f, g, p).second.empty()) return false;
        }
    }
    return true;
}


// Determinant over F_p by Gaussian elimination.
inline std::uint64_t determinant(std::vector<Vec> m, std::uint64_t p) {
    const std::size_t n = m.size();
    std::uint64_t det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = (p - det) % p;
        }
        det = mulmod(det, m[c][c], p);
        const std::uint64_t ic = inv(m[c][c], p);
        for (std::size_t r = c + 1; r < n; ++r) {
            const std::uint64_t f = mulmod(m[r][c], ic, p);
            for (std::size_t k = c; k < n; ++k) m[r][k] = (m[r][k] + p - mulmod(f, m[c][k], p)) % p;
        }
    }
    return det;
}

// Monic polynomial of the first linear relation among v_0, v_1, ... (vectors over F_p),
// or empty if they are independent.
inline Vec first_dependency(const std::vector<Vec>& vs, std::uint64_t p) {
    for (std::size_t k = 1; k <= vs.size(); ++k) {
        // Solve sum_{i<k-1} c_i v_i = -v_{k-1} via elimination on the augmented system.
        const std::size_t rows = vs[0].size(), cols = k - 1;
        std::vector<Vec> a(rows, Vec(cols + 1, 0));
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t i = 0; i < cols; ++i) a[r][i] = vs[i][r];
            a[r][cols] = (p - vs[k - 1][r]) % p;
        }
        std::vector<std::size_t> pivot_col;
        std::size_t row = 0;
        for (std::size_t c = 0; c < cols && row < rows; ++c) {
            std::size_t piv = row;
            while (piv < rows && a[piv][c] == 0) ++piv;
            if (piv == rows) continue;
            std::swap(a[piv], a[row]);
            const std::uint64_t ic = inv(a[row][c], p);
            for (auto& x : a[row]) x = mulmod(x, ic, p);
            for (std::size_t r = 0; r < rows; ++r) {
                if (r == row || a[r][c] == 0) continue;
                const std::uint64_t f = a[r][c];
                for (std::size_t t = 0; t <= cols; ++t) a[r][t] = (a[r][t] + p - mulmod(f, a[row][t], p)) % p;
            }
            pivot_col.push_back(c);
            ++row;
        }
        bool consistent = true;
        for (std::size_t r = row; r < rows; ++r)
            if (a[r][cols] != 0) consistent = false;
        if (!consistent) continue;
        if (pivot_col.size() < cols) return {};  // earlier vectors already dependent
        Vec poly(k, 0);
        for (std::size_t r = 0; r < row; ++r) poly[pivot_col[r]] = a[r][cols];
        poly[k - 1] = 1;
        return poly;
    }
    return {};
}

// K_j = F_p[Z, Y]/(P_0(Z), Y^m - Z) with naive bivariate products. Elements are flat
// vectors indexed e * r + d for Y^e Z^d.
struct RadicalOracle {
    std::uint64_t p;
    Vec p0;  // monic, degree r
    std::size_t m;

    std::size_t r() const { return p0.size() - 1; }

    Vec mul(const Vec& a, const Vec& b) const {
        const std::size_t rr = r();
        std::vector<Vec> grid(2 * m, Vec(2 * rr + 1, 0));
        for (std::size_t e1 = 0; e1 < m; ++e1)
            for (std::size_t d1 = 0; d1 < rr; ++d1) {
                const std::uint64_t x = a[e1 * rr + d1];
                if (x == 0) continue;
                for (std::size_t e2 = 0; e2 < m; ++e2)
                    for (std::size_t d2 = 0; d2 < rr; ++d2)
                        grid[e1 + e2][d1 + d2] = (grid[e1 + e2][d1 + d2] + mulmod(x, b[e2 * rr + d2], p)) % p;
            }
        Vec out(m * rr, 0);
        for (std::size_t e = 0; e < 2 * m; ++e) {
            Vec z = grid[e];
            std::size_t target = e;
            if (e >= m) {  // Y^m = Z
                z.insert(z.begin(), 0);
                target = e - m;
            }
            trim(z);
            Vec red = divmod(z, p0, p).second;
            for (std::size_t d = 0; d < red.size(); ++d) out[target * rr + d] = (out[target * rr + d] + red[d]) % p;
        }
        return out;
    }

    Vec one() const {
        Vec o(m * r(), 0);
        o[0] = 1;
        return o;
    }

    Vec pow(Vec a, std::uint64_t e) const {
        Vec res = one();
        for (; e; e >>= 1, a = mul(a, a))
            if (e & 1) res = mul(res, a);
        return res;
    }
};

inline Vec gcd(Vec a, Vec b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Vec r = divmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const std::uint64_t li = inv(a.back(), p);
        for (auto& c : a) c = mulmod(c, li, p);
    }
    return a;
}

// Rabin's test for a monic q of degree n: X^{p^n} = X mod q and gcd(X^{p^{n/r}} - X, q) = 1 for each
// prime r | n. Frobenius acts on F_p[X]/(q) through the matrix whose row k is X^{pk} mod q. Needs p < 2^32.
inline bool rabin_irreducible(const Vec& q, std::uint64_t p) {
    if (q.size() < 2 || q.back() != 1) return false;
    const std::size_t n = q.size() - 1;
    // v X mod q in place, v of length n.
    auto times_x = [&](Vec& v) {
        const std::uint64_t top = v[n - 1];
        for (std::size_t j = n - 1; j > 0; --j) v[j] = v[j - 1];
        v[0] = 0;
        for (std::size_t j = 0; j < n; ++j) v[j] = (v[j] + (p - top) % p * q[j]) % p;
    };
    std::vector<Vec> rows(n, Vec(n, 0));
    rows[0][0] = 1;
    for (std::size_t k = 1; k < n; ++k) {
        rows[k] = rows[k - 1];
        for (std::uint64_t t = 0; t < p; ++t) times_x(rows[k]);
    }
    auto frobenius = [&](const Vec& v) {
        std::vector<unsigned __int128> acc(n, 0);
        for (std::size_t k = 0; k < n; ++k) {
            if (v[k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) acc[j] += v[k] * rows[k][j];
        }
        Vec out(n);
        for (std::size_t j = 0; j < n; ++j) out[j] = static_cast<std::uint64_t>(acc[j] % p);
        return out;
    };
    Vec x(n, 0);
    if (n == 1)
        x[0] = (p - q[0]) % p;
    else
        x[1] = 1;
    std::vector<std::size_t> cofactors;
    std::size_t m = n;
    for (std::size_t r = 2; r <= m; ++r) {
        if (m % r) continue;
        cofactors.push_back(n / r);
        while (m % r == 0) m /= r;
    }
    Vec y = x;
    for (std::size_t t = 1; t <= n; ++t) {
        y = frobenius(y);
        for (std::size_t c : cofactors) {
            if (c != t) continue;
            Vec d = sub(y, x, p);
            if (d.empty() || gcd(d, q, p).size() != 1) return false;
        }
    }
    return y == x;
}

// Arithmetic in F_p[X]/(q) by schoolbook division.
inline Vec mulmod_poly(const Vec& a, const Vec& b, const Vec& q, std::uint64_t p) {
    return divmod(mul(a, b, p), q, p).second;
}

inline Vec powmod_poly(Vec a, std::uint64_t e, const Vec& q, std::uint64_t p) {
    Vec acc = divmod(Vec{1}, q, p).second;
    a = divmod(a, q, p).second;
    for (; e; e >>= 1) {
        if (e & 1) acc = mulmod_poly(acc, a, q, p);
        a = mulmod_poly(a, a, q, p);
    }
    return acc;
}

// f(x) mod q by Horner.
inline Vec eval_at_poly(const Vec& f, const Vec& x, const Vec& q, std::uint64_t p) {
    Vec acc;
    for (std::size_t k = f.size(); k-- > 0;) acc = add(mulmod_poly(acc, x, q, p), Vec{f[k]}, p);
    return divmod(acc, q, p).second;
}

// Product in F_p[X, Y]/(prev(X), T(X, Y)), T monic of degree ell in Y. Index = Y-degree,
// each entry a polynomial in X; fiber has ell + 1 entries.
inline std::vector<Vec> bivariate_mul(const std::vector<Vec>& a, const std::vector<Vec>& b,
                                      const std::vector<Vec>& fiber, const Vec& prev, std::uint64_t p) {
    const std::size_t ell = fiber.size() - 1;
    std::vector<Vec> prod(2 * ell - 1);
    for (std::size_t s = 0; s < a.size(); ++s)
        for (std::size_t t = 0; t < b.size(); ++t) prod[s + t] = add(prod[s + t], mul(a[s], b[t], p), p);
    for (auto& c : prod) c = divmod(c, prev, p).second;
    for (std::size_t top = prod.size(); top-- > ell;) {
        const Vec c = prod[top];
        for (std::size_t s = 0; s < ell; ++s)
            prod[top - ell + s] = divmod(sub(prod[top - ell + s], mul(c, fiber[s], p), p), prev, p).second;
        prod[top].clear();
    }
    prod.resize(ell);
    return prod;
}

}  // namespace oracle

#endif
