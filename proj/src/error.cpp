#include "ltower/error.hpp"

namespace ltower {

const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_parameter: return "invalid parameter";
        case Errc::division_by_zero: return "division by zero";
        case Errc::zero_element: return "zero element";
        case Errc::iteration_cap: return "iteration cap exceeded";
        case Errc::not_in_subfield: return "not in subfield";
        case Errc::corrupted_state: return "corrupted state";
        case Errc::io_error: return "i/o error";
        case Errc::corrupt_file: return "corrupt file";
        case Errc::version_mismatch: return "version mismatch";
    }
    return "unknown error";
}

}  // namespace ltower
