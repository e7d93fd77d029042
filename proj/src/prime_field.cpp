#include "ltower/prime_field.hpp"

#include <ostream>
#include <string>

#include "ltower/error.hpp"

namespace ltower {

namespace {

u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<u128>(a) * b) % m); }

u64 powmod_u64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

// Deterministic Miller-Rabin; these bases are exact for all n < 2^64.
bool is_prime_u64(u64 n) noexcept {
    if (n < 2) return false;
    for (u64 small : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % small == 0) return n == small;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeField::PrimeField(u64 p) : p_(p), small_(p < (u64{1} << 32)) {
    if (p == 2) throw Error(Errc::invalid_parameter, "characteristic 2 is not supported");
    if (p >= max_modulus) throw Error(Errc::invalid_parameter, "modulus must be below 2^62");
    if (!is_prime_u64(p)) throw Error(Errc::invalid_parameter, std::to_string(p) + " is not prime");
}

u64 PrimeField::from_int(std::int64_t a) const noexcept {
    if (a >= 0) return static_cast<u64>(a) % p_;
    u64 m = static_cast<u64>(-(a + 1)) % p_;  // avoids overflow on INT64_MIN
    return p_ - 1 - m;
}

u64 PrimeField::inv(u64 a) const {
    if (a == 0) throw Error(Errc::division_by_zero, "inverse of zero in F_p");
    // extended Euclid on signed 128-bit cofactors
    __int128 t = 0, new_t = 1;
    __int128 r = p_, new_r = a;
    while (new_r != 0) {
        __int128 q = r / new_r;
        __int128 tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (t < 0) t += p_;
    return static_cast<u64>(t);
}

u64 PrimeField::pow(u64 a, u64 e) const noexcept {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

u64 PrimeField::pow(u64 a, const BigExponent& e) const {
    u64 r = 1;
    for (std::size_t i = bit_length(e); i-- > 0;) {
        r = mul(r, r);
        if (bit_test(e, i)) r = mul(r, a);
    }
    return r;
}

std::ostream& operator<<(std::ostream& os, const FieldElement& a) { return os << a.value(); }

Residuosity classify_square(const FieldElement& a) {
    if (a.is_zero()) return Residuosity::zero;
    const PrimeField& f = a.field();
    return f.pow(a.value(), (f.modulus() - 1) / 2) == 1 ? Residuosity::residue : Residuosity::non_residue;
}

bool is_quadratic_residue(const FieldElement& a) {
    switch (classify_square(a)) {
        case Residuosity::zero: throw Error(Errc::zero_element, "quadratic residuosity of zero");
        case Residuosity::residue: return true;
        case Residuosity::non_residue: return false;
    }
    return false;
}

u64 smallest_non_residue(const PrimeField& field) {
    for (u64 z = 2; z < field.modulus(); ++z) {
        if (classify_square(FieldElement(field, z)) == Residuosity::non_residue) return z;
    }
    throw Error(Errc::corrupted_state, "no quadratic non-residue found");
}

FieldElement sqrt(const FieldElement& a) {
    const PrimeField& f = a.field();
    const u64 p = f.modulus();
    if (a.is_zero()) return a;
    if (classify_square(a) != Residuosity::residue) throw Error(Errc::invalid_parameter, "square root of a non-residue");
    if (p % 4 == 3) return FieldElement(f, f.pow(a.value(), (p + 1) / 4));
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 c = f.pow(smallest_non_residue(f), q);
    u64 x = f.pow(a.value(), (q + 1) / 2);
    u64 t = f.pow(a.value(), q);
    int m = s;
    while (t != 1) {
        int i = 0;
        u64 tt = t;
        while (tt != 1) {
            tt = f.mul(tt, tt);
            ++i;
        }
        u64 b = c;
        for (int j = 0; j < m - i - 1; ++j) b = f.mul(b, b);
        x = f.mul(x, b);
        c = f.mul(b, b);
        t = f.mul(t, c);
        m = i;
    }
    return FieldElement(f, x);
}

u64 multiplicative_order(u64 a, u64 ell) {
    a %= ell;
    if (a == 0) throw Error(Errc::invalid_parameter, "order of a multiple of ell");
    u64 x = a, k = 1;
    while (x != 1) {
        x = mulmod_u64(x, a, ell);
        ++k;
    }
    return k;
}

}  // namespace ltower
