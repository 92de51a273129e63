// Verification suite runner: one pass/fail line per criterion, nonzero exit
// on any failure. `radio-elect verify` runs the same suite.

#include <iostream>

#include "relect/verification.hpp"

int main() {
    const bool ok = relect::run_verification(std::cout);
    return ok ? 0 : 1;
}
