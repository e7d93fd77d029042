#ifndef LTOWER_CONIC_HPP
#define LTOWER_CONIC_HPP

#include <optional>

#include "ltower/liftpush.hpp"

namespace ltower {

// The Pell conic x^2 - delta y^2 = 4 for a quadratic non-residue delta; a model of
// the norm-one torus of F_{p^2}/F_p, of order p + 1.
struct ConicParams {
    PrimeField field;
    u64 delta;

    // Uses the smallest non-residue.
    static ConicParams make(const PrimeField& field);
};

struct ConicPoint {
    u64 x = 2;
    u64 y = 0;
    bool operator==(const ConicPoint&) const = default;
};

inline constexpr ConicPoint conic_neutral{2, 0};

bool on_conic(const ConicPoint& pt, const ConicParams& c);
ConicPoint conic_add(const ConicPoint& a, const ConicPoint& b, const ConicParams& c);
ConicPoint conic_neg(const ConicPoint& a, const ConicParams& c);
// Some point with the given abscissa, if one exists (x^2 - 4 a non-residue or zero).
std::optional<ConicPoint> conic_point_with_x(u64 x, const ConicParams& c);

// Abscissa-only arithmetic: x([2]P) = x^2 - 2, x(P + P') = x x' - x(P - P').
u64 double_x(const PrimeField& f, u64 alpha);
u64 diffadd_x(const PrimeField& f, u64 alpha, u64 alpha2, u64 gamma);
u64 ladder_x(const PrimeField& f, const BigExponent& n, u64 alpha);

// P_n with [n](x, y) = (P_n(x), y R_n(x)). pell_poly costs O(n) operations;
// pell_poly_recurrence uses u_{n+1} = X u_n - u_{n-1} and serves as oracle.
DensePoly pell_poly(const PrimeField& f, std::size_t n);
DensePoly pell_poly_recurrence(const PrimeField& f, std::size_t n);
DensePoly pell_ordinate_poly(const PrimeField& f, std::size_t n);  // R_n, same recurrence

struct T2Init {
    ConicParams params;
    u64 alpha;  // abscissa of a point that is not an ell-th multiple
    u64 ell;
};

// Requires ell | p + 1. Throws iteration_cap if the search gives up.
T2Init find_t2_generator(const PrimeField& f, u64 ell, Rng& rng, std::size_t cap = 1'000'000);
bool is_t2_generator(const PrimeField& f, u64 ell, u64 alpha);
// P_{ell^i} - alpha (X - alpha for i = 0).
DensePoly t2_level_poly(const T2Init& init, std::size_t i);
FiberRelation t2_relation(const T2Init& init);

}  // namespace ltower

#endif
