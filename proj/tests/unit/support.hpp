// support.hpp — Helpers shared by the unit tests

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <doctest.h>

#include "decotime/errors.hpp"

namespace testing {

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

/// Runs `body` and returns the ErrorCode it threw; fails the test if it returned normally.
inline decotime::ErrorCode thrown_code(const std::function<void()>& body) {
    try {
        body();
    } catch (const decotime::Error& e) {
        return e.code();
    }
    FAIL("expected a decotime::Error");
    return decotime::ErrorCode::InvalidParameter;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>{lo, hi}(g);
}

} // namespace testing
