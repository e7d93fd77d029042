#ifndef LTOWER_BIGINT_HPP
#define LTOWER_BIGINT_HPP

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace ltower {

// Arbitrary-precision nonnegative exponent (q^{l^i j}, q^r - 1, ...).
using BigExponent = boost::multiprecision::cpp_int;

inline BigExponent big_pow(std::uint64_t base, std::uint64_t exponent) {
    return boost::multiprecision::pow(BigExponent(base), static_cast<unsigned>(exponent));
}

inline std::size_t bit_length(const BigExponent& e) {
    return e == 0 ? 0 : boost::multiprecision::msb(e) + 1;
}

inline bool bit_test(const BigExponent& e, std::size_t i) {
    return boost::multiprecision::bit_test(e, static_cast<unsigned>(i));
}

}  // namespace ltower

#endif
