// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lfdpr {

/// Counter-based generator: every draw is a pure function of (seed, stream, counter), so
/// samples can be produced in any order on any thread and still reproduce bit-exactly.
class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ull))) {}

    static constexpr std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t bits(std::uint64_t counter) const { return mix(key_ ^ mix(counter)); }

    /// Uniform in [0, 1).
    constexpr double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Standard normal pair via Box-Muller on draws (2k, 2k+1).
    void normal2(std::uint64_t k, double& a, double& b) const {
        const double u1 = 1.0 - uniform(2 * k);  // (0, 1]
        const double u2 = uniform(2 * k + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        a = r * std::cos(2.0 * std::numbers::pi * u2);
        b = r * std::sin(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t key_;
};

}  // namespace lfdpr
