#ifndef LTOWER_CYCLODESCENT_HPP
#define LTOWER_CYCLODESCENT_HPP

#include <span>
#include <utility>
#include <vector>

#include "ltower/bigint.hpp"
#include "ltower/factor.hpp"
#include "ltower/liftpush.hpp"

namespace ltower {

// Coefficients of an element of K_j, flattened: entry e * r + d multiplies y_j^e Z^d,
// where Z is the class of X in K_0 = F_p[Z]/(P_0) and y_0 = Z.
using RadicalElem = std::vector<u64>;

// Polynomial in X over K_j, coefficient k stored at [k * dim, (k + 1) * dim).
// Normalized: the top coefficient is nonzero, and the zero polynomial is empty.
struct KPoly {
    std::vector<u64> flat;
    bool operator==(const KPoly&) const = default;
};

// K_j = K_0[Y]/(Y^{ell^j} - y_0) together with its polynomial ring K_j[X].
// Products go through one Kronecker-packed F_p multiplication each.
class RadicalField {
public:
    RadicalField(DensePoly p0, u64 ell, unsigned level);

    const PrimeField& field() const noexcept { return p0_.field(); }
    const DensePoly& base_modulus() const noexcept { return p0_; }
    u64 ell() const noexcept { return ell_; }
    unsigned level() const noexcept { return level_; }
    std::size_t base_degree() const noexcept { return r_; }
    std::size_t span() const noexcept { return span_; }  // ell^level
    std::size_t dimension() const noexcept { return r_ * span_; }

    RadicalElem zero() const { return RadicalElem(dimension(), 0); }
    RadicalElem constant(u64 c) const;
    RadicalElem one() const { return constant(1); }
    RadicalElem generator() const;  // y_j
    RadicalElem random(Rng& rng) const;
    RadicalElem from_base(const DensePoly& a) const;  // K_0 element given as a polynomial in Z
    bool is_zero(std::span<const u64> a) const;
    bool is_prime_field_constant(std::span<const u64> a) const;

    RadicalElem add(std::span<const u64> a, std::span<const u64> b) const;
    RadicalElem sub(std::span<const u64> a, std::span<const u64> b) const;
    RadicalElem neg(std::span<const u64> a) const;
    RadicalElem mul(std::span<const u64> a, std::span<const u64> b) const;
    RadicalElem pow(std::span<const u64> a, const BigExponent& e) const;
    RadicalElem inverse(std::span<const u64> a) const;  // throws division_by_zero

    // The inclusion K_{j-1} -> K_j, y_{j-1} = y_j^ell.
    RadicalElem embed_from_below(std::span<const u64> a) const;
    // phi_j: splits a into ell elements of K_{j-1}, the coefficients of Y^0, ..., Y^{ell-1}.
    std::vector<RadicalElem> split_below(std::span<const u64> a) const;

    // K_j[X]
    long degree(const KPoly& a) const;
    std::span<const u64> coeff(const KPoly& a, std::size_t k) const;
    RadicalElem coeff_or_zero(const KPoly& a, std::size_t k) const;
    KPoly poly_from(std::vector<u64> flat) const;
    KPoly poly_constant(std::span<const u64> c) const { return poly_from({c.begin(), c.end()}); }
    KPoly poly_x_minus(std::span<const u64> c) const;
    KPoly poly_add(const KPoly& a, const KPoly& b) const;
    KPoly poly_sub(const KPoly& a, const KPoly& b) const;
    KPoly poly_mul(const KPoly& a, const KPoly& b) const;
    KPoly poly_scale(const KPoly& a, std::span<const u64> c) const;
    KPoly poly_pow(const KPoly& a, u64 e) const;
    KPoly truncated(const KPoly& a, std::size_t k) const;
    KPoly reversed(const KPoly& a, std::size_t n) const;  // X^{n-1} a(1/X), deg a < n
    KPoly monic(const KPoly& a) const;
    KPoly inv_series(const KPoly& a, std::size_t k) const;
    std::pair<KPoly, KPoly> divrem(const KPoly& a, const KPoly& b) const;
    KPoly exact_div(const KPoly& a, const KPoly& b) const;  // throws corrupted_state on a remainder
    KPoly inverse_mod(const KPoly& a, const KPoly& m) const;  // throws corrupted_state if not a unit
    RadicalElem evaluate(const KPoly& a, std::span<const u64> x) const;

private:
    std::vector<u64> packed_product(std::span<const u64> a, std::size_t na, std::span<const u64> b,
                                    std::size_t nb) const;
    void normalize(KPoly& a) const;

    bool is_one(std::span<const u64> a) const;
    RadicalElem conjugate(std::span<const u64> a, std::size_t k) const;

    DensePoly p0_;
    u64 ell_;
    unsigned level_;
    std::size_t r_;
    std::size_t span_;
    // Powers of zeta = y_0^{(p^r - 1)/ell}, a primitive ell-th root of unity in K_0 when
    // y_0 is a non-residue; empty otherwise. sigma(y_j) = zeta y_j generates Gal(K_j/K_{j-1}).
    std::vector<DensePoly> zeta_powers_;
};

// Reduction modulo a fixed monic polynomial over K_j through a precomputed reciprocal.
class KPolyModulus {
public:
    KPolyModulus(RadicalField ring, KPoly modulus, std::size_t max_input_size);

    const RadicalField& ring() const noexcept { return ring_; }
    const KPoly& modulus() const noexcept { return modulus_; }
    std::size_t degree() const noexcept { return n_; }
    KPoly reduce(const KPoly& a) const;
    KPoly mul(const KPoly& a, const KPoly& b) const { return reduce(ring_.poly_mul(a, b)); }

private:
    RadicalField ring_;
    KPoly modulus_;
    std::size_t n_;
    KPoly recip_;  // inverse of the reversed modulus as a power series
};

// A polynomial in Y with coefficients in K_j[X], index = Y-degree.
using YPoly = std::vector<KPoly>;

struct SubresultantResult {
    KPoly resultant;       // Res_Y(a, b) exactly
    YPoly degree_one;      // a nonzero multiple of the degree-1 subresultant, or empty if it vanishes
};

// Subresultant pseudo-remainder sequence over the domain K_j[X]; requires deg_Y a >= deg_Y b >= 1.
SubresultantResult resultant_and_degree_one(const RadicalField& ring, YPoly a, YPoly b);

struct K0Context {
    PrimeField field;
    u64 ell;
    std::size_t degree;       // r, the order of p mod ell
    DensePoly cyclotomic_factor;  // F_0
    DensePoly seed;           // y_0 in F_p[X]/(F_0)
    DensePoly base_modulus;   // P_0, minimal polynomial of the seed
    BigExponent group_order;  // p^r - 1

    RadicalField level(unsigned j) const { return RadicalField(base_modulus, ell, j); }
};

K0Context general_init(const PrimeField& field, u64 ell, Rng& rng, std::size_t cap = default_iteration_cap);

// True iff alpha (nonzero, in F_p[X]/(ctx modulus)) is not an ell-th power.
bool nonresidue_test(const ModulusContext& ctx, const DensePoly& alpha, u64 ell);

// x_i = sum_{k<r} y_i^{p^{ell^i k}} on the y_i basis of K_i.
RadicalElem xi_element(const K0Context& ctx, unsigned i);

struct DescentStep {
    // Eliminates y_j: minpoly = Q_{i,j-1} over K_{j-1}, and y_j = section(x_i) mod minpoly.
    KPolyModulus minpoly;
    KPoly section;
};

struct DescentData {
    unsigned level;
    RadicalElem generator;           // x_i in K_i
    KPolyModulus top;                // X - x_i over K_i
    std::vector<DescentStep> steps;  // steps[k] eliminates y_{level - k}
    DensePoly minpoly;               // Q_i over F_p, monic of degree ell^level

    const RadicalField& field_at(unsigned j) const;  // K_j, j <= level
    // Q_{i,j} over K_j, with Q_{i,level} = X - x_i.
    const KPolyModulus& relative_minpoly(unsigned j) const;
};

DescentData descend(const K0Context& ctx, unsigned i);

// Psi_i: K_i on the y_i basis -> K_0[X]/(Q_i), and its inverse.
KPoly psi_apply(const DescentData& data, std::span<const u64> v);
RadicalElem psi_invert(const DescentData& data, const KPoly& w);

// K_0[X] polynomial with prime-field coefficients -> DensePoly, throwing corrupted_state otherwise.
DensePoly to_prime_field(const RadicalField& k0, const KPoly& a);
KPoly from_prime_field(const RadicalField& k0, const DensePoly& a);

// T_i on the bivariate basis: rows index x_{i-1}, columns index x_i (ell + 1 columns, monic).
BiPoly general_fiber_poly(const DescentData& data, const DescentData& below);

DensePoly general_lift(const BiPoly& a, const DescentData& data, const DescentData& below);
BiPoly general_push(const DensePoly& a, const DescentData& data, const DescentData& below);

}  // namespace ltower

#endif
