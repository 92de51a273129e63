#pragma once

#include <cmath>

// Absolute-tolerance comparison for frozen expected values.
inline bool near(double value, double target, double tol) {
    return std::abs(value - target) <= tol;
}
