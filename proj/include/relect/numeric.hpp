#pragma once

#include <cmath>
#include <cstdint>

namespace relect {

// Ceilings of transcendental expressions (alpha^j, log ratios) snap to the
// nearest integer first: values within kCeilSnap of an integer are treated
// as that integer, so 8.000000001 does not become 9.
inline constexpr double kCeilSnap = 1e-9;

inline std::int64_t guarded_ceil(double x) {
    const double nearest = std::round(x);
    if (std::abs(x - nearest) < kCeilSnap) return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace relect
