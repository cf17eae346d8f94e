#ifndef SUBCRIT_FORMAT_HPP
#define SUBCRIT_FORMAT_HPP

#include <cmath>
#include <cstdio>
#include <string>

namespace subcrit {

/// All floating-point output uses 12 significant digits so regression diffs
/// stay meaningful across runs.
inline std::string fmt12(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

} // namespace subcrit

#endif
