#ifndef LTOWER_FACTOR_HPP
#define LTOWER_FACTOR_HPP

#include <vector>

#include "ltower/modulus.hpp"

namespace ltower {

inline constexpr std::size_t default_iteration_cap = 1'000'000;

// X^{p^k} mod Q, built from X^p by modular composition.
DensePoly frobenius_power(const ModulusContext& ctx, u64 k);

// Rabin test. Non-monic input is normalized first; constants are not irreducible.
bool is_irreducible(const DensePoly& q);

// Phi_ell = 1 + X + ... + X^{ell-1} over F_p; throws when ell = p.
DensePoly cyclotomic(const PrimeField& field, u64 ell);

// One monic irreducible factor of degree r of a squarefree F whose factors all
// have degree r (Cantor-Zassenhaus).
DensePoly factor_equal_degree(const DensePoly& f, std::size_t r, Rng& rng,
                              std::size_t cap = default_iteration_cap);

// All roots in F_p of a nonzero polynomial, sorted, without multiplicity.
std::vector<u64> roots_in_base_field(const DensePoly& f, Rng& rng);

// Monic minimal polynomial of the residue class alpha, searching degrees <= bound.
DensePoly minpoly_in_quotient(const DensePoly& alpha, const ModulusContext& ctx, std::size_t bound);

// Given coordinate vectors of 1, a, a^2, ..., returns the monic polynomial of the
// first linear dependency, or the zero polynomial if the vectors stay independent.
DensePoly linear_minpoly(const PrimeField& field, const std::vector<std::vector<u64>>& powers);

}  // namespace ltower

#endif
