#ifndef LTOWER_LIFTPUSH_HPP
#define LTOWER_LIFTPUSH_HPP

#include <vector>

#include "ltower/modulus.hpp"

namespace ltower {

// One tower step T(X, Y) = f(Y) - X g(Y): the previous generator is f/g of the new one.
struct FiberRelation {
    DensePoly f;     // monic, degree ell
    DensePoly g;     // degree < ell, coprime to f
    std::size_t ell = 0;
    DensePoly h;     // g^{-1} mod f

    // Validates the shape and computes h. Throws invalid_parameter otherwise.
    static FiberRelation make(DensePoly f, DensePoly g);
    bool g_is_constant() const noexcept { return g.degree() == 0; }
};

// Coefficient grid of a polynomial in (X, Y): entry (i, j) multiplies X^i Y^j,
// with i < rows and j < cols. Stored row-major, so row i is a polynomial in Y.
class BiPoly {
public:
    BiPoly(const PrimeField& field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), c_(rows * cols, 0) {}
    BiPoly(const PrimeField& field, std::size_t rows, std::size_t cols, std::vector<u64> data);

    static BiPoly random(const PrimeField& field, std::size_t rows, std::size_t cols, Rng& rng);
    // Places a polynomial in X alone (degree < rows) in column 0.
    static BiPoly from_x_poly(const DensePoly& a, std::size_t rows, std::size_t cols);

    const PrimeField& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    u64 at(std::size_t i, std::size_t j) const { return c_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, u64 v) { c_[i * cols_ + j] = field_.reduce(v); }
    const std::vector<u64>& data() const noexcept { return c_; }

    DensePoly row(std::size_t i) const;            // coefficient of X^i, a polynomial in Y
    void set_row(std::size_t i, const DensePoly& r);  // requires deg r < cols
    DensePoly column(std::size_t j) const;         // coefficient of Y^j, a polynomial in X
    bool y_free() const;                           // all columns j >= 1 vanish

    bool operator==(const BiPoly& o) const noexcept {
        return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && c_ == o.c_;
    }

private:
    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<u64> c_;
};

// sum_i P_i(Y) f^i g^{n-1-i} for P with X-degree < n.
DensePoly compose(const BiPoly& p, const DensePoly& f, const DensePoly& g, std::size_t n);
// Inverse of compose for deg q < ell * n.
BiPoly decompose(const DensePoly& q, const FiberRelation& rel, std::size_t n);

// g^{n-1} mod S and its inverse, reusable across lift/push calls at one level.
struct FiberScaling {
    DensePoly gamma;
    DensePoly gamma_inv;
};
FiberScaling fiber_scaling(const FiberRelation& rel, const ModulusContext& s, std::size_t n);

DensePoly lift_fiber(const BiPoly& a, const FiberRelation& rel, const ModulusContext& s, std::size_t n);
DensePoly lift_fiber(const BiPoly& a, const FiberRelation& rel, const ModulusContext& s, std::size_t n,
                     const FiberScaling& scaling);
BiPoly push_fiber(const DensePoly& a, const FiberRelation& rel, const ModulusContext& s, std::size_t n);
BiPoly push_fiber(const DensePoly& a, const FiberRelation& rel, const ModulusContext& s, std::size_t n,
                  const FiberScaling& scaling);

// Radical steps (f = Y^ell, g = 1): x_{i-1}^e x_i^j = x_i^{e ell + j}, a pure index reshuffle.
DensePoly t1_lift(const BiPoly& a, std::size_t ell, std::size_t n);
BiPoly t1_push(const DensePoly& a, std::size_t ell, std::size_t n);

}  // namespace ltower

#endif
