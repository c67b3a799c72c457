#pragma once

#include <string>

namespace selfadj {

/// 17 significant digits, lowercase scientific notation; round-trips exactly.
std::string format_real(double value);

}  // namespace selfadj
