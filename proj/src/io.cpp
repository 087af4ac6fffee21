#include "equivibe/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace equivibe {

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round12(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(fmt12(x).c_str(), nullptr);
}

} // namespace equivibe
