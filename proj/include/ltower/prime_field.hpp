#ifndef LTOWER_PRIME_FIELD_HPP
#define LTOWER_PRIME_FIELD_HPP

#include <cstdint>
#include <iosfwd>
#include <random>

#include "ltower/bigint.hpp"

namespace ltower {

using Rng = std::mt19937_64;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

bool is_prime_u64(u64 n) noexcept;

// F_p for an odd prime p < 2^62. Raw values are u64 in [0, p).
class PrimeField {
public:
    static constexpr u64 max_modulus = (u64{1} << 62);

    explicit PrimeField(u64 p);

    u64 modulus() const noexcept { return p_; }
    bool operator==(const PrimeField& o) const noexcept { return p_ == o.p_; }

    u64 reduce(u64 a) const noexcept { return a % p_; }
    u64 reduce(u128 a) const noexcept { return static_cast<u64>(a % p_); }
    u64 from_int(std::int64_t a) const noexcept;

    u64 add(u64 a, u64 b) const noexcept {
        u64 s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    u64 neg(u64 a) const noexcept { return a == 0 ? 0 : p_ - a; }
    u64 mul(u64 a, u64 b) const noexcept {
        if (small_) return (a * b) % p_;
        return static_cast<u64>((static_cast<u128>(a) * b) % p_);
    }
    u64 inv(u64 a) const;  // throws Errc::division_by_zero
    u64 div(u64 a, u64 b) const { return mul(a, inv(b)); }
    u64 pow(u64 a, u64 e) const noexcept;
    u64 pow(u64 a, const BigExponent& e) const;

    u64 random(Rng& rng) const { return std::uniform_int_distribution<u64>(0, p_ - 1)(rng); }
    u64 random_nonzero(Rng& rng) const { return std::uniform_int_distribution<u64>(1, p_ - 1)(rng); }

    // True when p < 2^32 so that products of two reduced values fit in 64 bits.
    bool small() const noexcept { return small_; }

private:
    u64 p_;
    bool small_;
};

class FieldElement {
public:
    FieldElement(const PrimeField& field, u64 value) : field_(field), value_(field.reduce(value)) {}
    static FieldElement from_int(const PrimeField& field, std::int64_t v) {
        return FieldElement(field, field.from_int(v));
    }

    u64 value() const noexcept { return value_; }
    const PrimeField& field() const noexcept { return field_; }
    bool is_zero() const noexcept { return value_ == 0; }

    FieldElement operator+(const FieldElement& o) const { return {field_, field_.add(value_, o.value_), raw_tag{}}; }
    FieldElement operator-(const FieldElement& o) const { return {field_, field_.sub(value_, o.value_), raw_tag{}}; }
    FieldElement operator*(const FieldElement& o) const { return {field_, field_.mul(value_, o.value_), raw_tag{}}; }
    FieldElement operator/(const FieldElement& o) const { return {field_, field_.div(value_, o.value_), raw_tag{}}; }
    FieldElement operator-() const { return {field_, field_.neg(value_), raw_tag{}}; }
    FieldElement inverse() const { return {field_, field_.inv(value_), raw_tag{}}; }
    FieldElement pow(u64 e) const { return {field_, field_.pow(value_, e), raw_tag{}}; }
    FieldElement pow(const BigExponent& e) const { return {field_, field_.pow(value_, e), raw_tag{}}; }

    bool operator==(const FieldElement& o) const noexcept { return field_ == o.field_ && value_ == o.value_; }

private:
    struct raw_tag {};
    FieldElement(const PrimeField& f, u64 v, raw_tag) : field_(f), value_(v) {}

    PrimeField field_;
    u64 value_;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& a);

enum class Residuosity { zero, residue, non_residue };

Residuosity classify_square(const FieldElement& a);
// Euler criterion; throws Errc::zero_element on 0.
bool is_quadratic_residue(const FieldElement& a);
// Tonelli-Shanks; throws Errc::invalid_parameter when a is a non-residue.
FieldElement sqrt(const FieldElement& a);
// Smallest quadratic non-residue in [2, p).
u64 smallest_non_residue(const PrimeField& field);

// Multiplicative order of a modulo the prime ell (a not divisible by ell).
u64 multiplicative_order(u64 a, u64 ell);

}  // namespace ltower

#endif
