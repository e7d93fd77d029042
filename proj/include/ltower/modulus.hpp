#ifndef LTOWER_MODULUS_HPP
#define LTOWER_MODULUS_HPP

#include "ltower/bigint.hpp"
#include "ltower/poly.hpp"

namespace ltower {

// Arithmetic in F_p[X]/<Q> for a monic Q of degree n >= 1. Remainders use a
// precomputed reciprocal of the reversed modulus to precision n.
class ModulusContext {
public:
    explicit ModulusContext(DensePoly modulus);

    const DensePoly& modulus() const noexcept { return q_; }
    const PrimeField& field() const noexcept { return q_.field(); }
    std::size_t degree() const noexcept { return n_; }
    const DensePoly& reciprocal() const noexcept { return recip_; }

    DensePoly reduce(const DensePoly& a) const;
    // (a div Q, a mod Q).
    std::pair<DensePoly, DensePoly> divrem(const DensePoly& a) const;
    DensePoly mul(const DensePoly& a, const DensePoly& b) const { return reduce(ltower::mul(a, b)); }
    DensePoly sqr(const DensePoly& a) const { return reduce(square(a)); }
    DensePoly pow(const DensePoly& a, u64 e) const;
    DensePoly pow(const DensePoly& a, const BigExponent& e) const;
    // Throws Errc::division_by_zero when gcd(a, Q) != 1.
    DensePoly inverse(const DensePoly& a) const;
    // g(h) mod Q by Brent-Kung baby-step/giant-step.
    DensePoly compose(const DensePoly& g, const DensePoly& h) const;

private:
    DensePoly q_;
    std::size_t n_;
    DensePoly recip_;
};

}  // namespace ltower

#endif
