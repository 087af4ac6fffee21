#pragma once

#include <string>

namespace equivibe {

// Rounds to 12 significant digits (printf rounding) so serialised output is
// stable across platforms and runs.
double round12(double x);

// "%.12g"
std::string fmt12(double x);

} // namespace equivibe
