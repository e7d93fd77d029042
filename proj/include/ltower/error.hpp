#ifndef LTOWER_ERROR_HPP
#define LTOWER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ltower {

enum class Errc {
    invalid_parameter,   // bad (p, ell) combination, non-prime modulus, ...
    division_by_zero,
    zero_element,        // operation undefined on zero (residuosity of 0)
    iteration_cap,       // randomized search gave up
    not_in_subfield,     // projection of an element that does not descend
    corrupted_state,     // internal consistency check failed
    io_error,
    corrupt_file,
    version_mismatch,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace ltower

#endif
