#ifndef LTOWER_POLY_HPP
#define LTOWER_POLY_HPP

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "ltower/prime_field.hpp"

namespace ltower {

// Dense univariate polynomial over F_p, coefficients in ascending degree.
// No trailing zeros; the zero polynomial has no coefficients.
class DensePoly {
public:
    explicit DensePoly(const PrimeField& field) : field_(field) {}
    DensePoly(const PrimeField& field, std::vector<u64> coeffs);
    DensePoly(const PrimeField& field, std::initializer_list<std::int64_t> coeffs);

    static DensePoly constant(const PrimeField& field, u64 c);
    static DensePoly monomial(const PrimeField& field, u64 c, std::size_t k);
    static DensePoly x(const PrimeField& field) { return monomial(field, 1, 1); }
    // Uniform random polynomial of degree < size (may come out shorter).
    static DensePoly random(const PrimeField& field, std::size_t size, Rng& rng);

    const PrimeField& field() const noexcept { return field_; }
    long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
    std::size_t size() const noexcept { return c_.size(); }
    u64 operator[](std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    FieldElement coeff(std::size_t i) const { return FieldElement(field_, (*this)[i]); }
    u64 leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
    bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }
    const std::vector<u64>& coeffs() const noexcept { return c_; }
    std::vector<u64> release() && { return std::move(c_); }

    void set_coeff(std::size_t i, u64 v);

    bool operator==(const DensePoly& o) const noexcept { return field_ == o.field_ && c_ == o.c_; }

    DensePoly& operator+=(const DensePoly& o);
    DensePoly& operator-=(const DensePoly& o);

    u64 evaluate(u64 x) const noexcept;
    FieldElement evaluate(const FieldElement& x) const { return FieldElement(field_, evaluate(x.value())); }

    DensePoly monic() const;
    DensePoly derivative() const;
    // X^{n-1} * a(1/X), keeping n coefficients (a must have degree < n).
    DensePoly reversed(std::size_t n) const;
    DensePoly truncated(std::size_t k) const;       // a mod X^k
    DensePoly shifted_up(std::size_t k) const;      // a * X^k
    DensePoly shifted_down(std::size_t k) const;    // a div X^k

private:
    void normalize() noexcept;

    PrimeField field_;
    std::vector<u64> c_;
};

std::ostream& operator<<(std::ostream& os, const DensePoly& a);

DensePoly operator+(DensePoly a, const DensePoly& b);
DensePoly operator-(DensePoly a, const DensePoly& b);
DensePoly operator-(const DensePoly& a);
DensePoly operator*(const DensePoly& a, const DensePoly& b);
DensePoly scale(const DensePoly& a, u64 c);

enum class MulMethod { automatic, schoolbook, karatsuba, ntt };
inline constexpr std::size_t karatsuba_threshold = 32;
// NTT crossover depends on how many CRT primes p needs: 1, 2 or 3.
inline constexpr std::size_t ntt_thresholds[3] = {96, 384, 1024};

DensePoly mul(const DensePoly& a, const DensePoly& b, MulMethod method = MulMethod::automatic);
DensePoly mul_trunc(const DensePoly& a, const DensePoly& b, std::size_t k);
DensePoly square(const DensePoly& a);
DensePoly pow(const DensePoly& a, u64 e);

// 1/a mod X^k by Newton iteration; a(0) must be nonzero.
DensePoly inv_series(const DensePoly& a, std::size_t k);

// Euclidean division a = q*b + r, deg r < deg b. Throws division_by_zero on b = 0.
std::pair<DensePoly, DensePoly> divrem(const DensePoly& a, const DensePoly& b);
DensePoly operator/(const DensePoly& a, const DensePoly& b);
DensePoly operator%(const DensePoly& a, const DensePoly& b);

struct Xgcd {
    DensePoly g;  // monic gcd (zero only when a = b = 0)
    DensePoly u;
    DensePoly v;  // u*a + v*b = g
};
Xgcd xgcd(const DensePoly& a, const DensePoly& b);
DensePoly gcd(const DensePoly& a, const DensePoly& b);

namespace detail {
// Raw kernels on coefficient spans; output has size a.size() + b.size() - 1.
std::vector<u64> mul_schoolbook(std::span<const u64> a, std::span<const u64> b, const PrimeField& f);
std::vector<u64> mul_karatsuba(std::span<const u64> a, std::span<const u64> b, const PrimeField& f);
std::vector<u64> mul_ntt(std::span<const u64> a, std::span<const u64> b, const PrimeField& f);
int ntt_primes_needed(std::size_t min_len, u64 p);
std::vector<u64> mul_auto(std::span<const u64> a, std::span<const u64> b, const PrimeField& f);
}  // namespace detail

}  // namespace ltower

#endif
