#ifndef LTOWER_ELLIPTIC_HPP
#define LTOWER_ELLIPTIC_HPP

#include <optional>
#include <vector>

#include "ltower/liftpush.hpp"

namespace ltower {

// y^2 = x^3 + a x + b over F_p.
struct Curve {
    PrimeField field;
    u64 a;
    u64 b;

    // Throws invalid_parameter on a singular curve.
    static Curve make(const PrimeField& field, u64 a, u64 b);
    u64 j_invariant() const;
    bool operator==(const Curve& o) const noexcept { return field == o.field && a == o.a && b == o.b; }
};

struct ECPoint {
    bool infinity = true;
    u64 x = 0;
    u64 y = 0;

    static ECPoint at_infinity() { return {}; }
    static ECPoint affine(u64 x, u64 y) { return {false, x, y}; }
    bool operator==(const ECPoint&) const = default;
};

bool on_curve(const ECPoint& pt, const Curve& e);
ECPoint ec_neg(const ECPoint& pt, const Curve& e);
ECPoint ec_add(const ECPoint& a, const ECPoint& b, const Curve& e);
ECPoint ec_mul(const ECPoint& pt, const BigExponent& n, const Curve& e);
ECPoint ec_mul(const ECPoint& pt, u64 n, const Curve& e);
ECPoint random_point(const Curve& e, Rng& rng);

// #E(F_p) including infinity. Exhaustive up to p = 10^4, baby-step giant-step above.
u64 point_count(const Curve& e);
u64 point_count_exhaustive(const Curve& e);
u64 point_count_bsgs(const Curve& e);

// Hasse gate: ell <= p + 2 sqrt(p) + 1.
bool ell_within_hasse_bound(u64 p, u64 ell);
// Curve with ell | #E and j not in {0, 1728}. Requires ell not dividing p - 1.
Curve find_curve(const PrimeField& field, u64 ell, Rng& rng, std::size_t cap = 1'000'000);

unsigned ell_valuation(u64 n, u64 ell);
// A point of order exactly ell^e where ell^e || n = #E.
ECPoint torsion_point(const Curve& e, u64 ell, unsigned exponent, u64 n, Rng& rng, std::size_t cap = 1'000'000);
u64 torsion_abscissa(const Curve& e, u64 ell, unsigned exponent, u64 n, Rng& rng);
// prod_{k=1}^{(ell-1)/2} (X - x([k]T)) for a rational point T of order ell.
DensePoly kernel_poly(const Curve& e, u64 ell, u64 n, Rng& rng);

// One isogeny (x, y) -> (f/g, y_scale * y * (f/g)').
struct IsogenyStep {
    Curve domain;
    Curve codomain;
    DensePoly f;  // monic, degree ell
    DensePoly g;  // h^2 times a scalar, degree ell - 1
    DensePoly h;  // kernel polynomial
    u64 y_scale = 1;
};

IsogenyStep velu(const Curve& e, const DensePoly& kernel, u64 ell);
ECPoint apply_isogeny(const IsogenyStep& step, const ECPoint& pt);

struct IsogenyCycle {
    std::vector<IsogenyStep> steps;  // steps[k]: E_k -> E_{k+1}, last one lands on E_0
    u64 ell = 0;
    u64 twist_scalar = 1;            // u with a_n u^4 = a_0, b_n u^6 = b_0
    bool repeated_j = false;         // a j-invariant reappeared before closure (flag only)

    std::size_t length() const noexcept { return steps.size(); }
};

// Walks rational-kernel ell-isogenies from e0 until the j-invariant returns,
// then folds the closing isomorphism into the last step.
IsogenyCycle build_cycle(const Curve& e0, u64 ell, u64 order, std::size_t cap = 0);

// Relation (f, g) of the cycle step n - (i mod n), the step walked backwards at level i.
FiberRelation backward_relation(const IsogenyCycle& cycle, std::size_t i);
std::size_t backward_step_index(const IsogenyCycle& cycle, std::size_t i);

struct EllipticInit {
    IsogenyCycle cycle;
    u64 eta = 0;          // abscissa of a point of order exactly ell^e on E_0
    ECPoint eta_point;
    unsigned exponent = 0;  // e with ell^e || #E_0
    u64 order = 0;          // #E_0
};

EllipticInit elliptic_init(const PrimeField& field, u64 ell, Rng& rng);

}  // namespace ltower

#endif
