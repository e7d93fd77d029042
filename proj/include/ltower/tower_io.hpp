#ifndef LTOWER_TOWER_IO_HPP
#define LTOWER_TOWER_IO_HPP

#include <string>
#include <string_view>

#include "ltower/tower.hpp"

namespace ltower {

inline constexpr int tower_file_version = 1;

// A single JSON document holding the init payload and every built level. Integers are
// written as decimal strings so files do not depend on the reader's word size.
std::string export_tower(const Tower& tower);

// Malformed documents throw corrupt_file, other versions version_mismatch, and levels of
// the wrong shape corrupted_state. Anything subtler is left for Tower::verify_level.
Tower import_tower(std::string_view text);

void save_tower(const Tower& tower, const std::string& path);  // throws io_error
Tower load_tower(const std::string& path);                       // throws io_error

}  // namespace ltower

#endif
