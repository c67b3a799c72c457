#include "selfadj/io.hpp"

#include <cmath>
#include <cstdio>

namespace selfadj {

std::string format_real(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0;  // drop the sign of -0
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.16e", value);
    return buffer;
}

}  // namespace selfadj
