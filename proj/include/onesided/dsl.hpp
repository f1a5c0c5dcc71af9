#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onesided/grid.hpp"
#include "onesided/weights.hpp"

namespace onesided {

/// Grammar:
///   constant(c) | indicator(a,b) | power(gamma) | exponential(s)
///   | bump(c,w) | piecewise(x1:v1,...) | random(pieces)
/// random(p) draws p piecewise-constant values in [-1,1) from the seed;
/// identical (spec, grid, seed) always reproduce identical samples.
SampledFunction parse_function_dsl(const std::string& spec, const Grid& g, std::uint64_t seed);

/// Same grammar restricted to positive families; power(gamma) is clamped at
/// half a grid spacing around the origin so the weight stays positive.
Weight parse_weight_dsl(const std::string& spec, const Grid& g, std::uint64_t seed);

struct NamedFunction {
    std::string name;
    SampledFunction fn;
};

/// The 20-member default family: 6 bumps, 6 indicators, 4 signed/unsigned
/// powers with gamma in {0.25, 0.5}, 4 seeded random piecewise functions.
std::vector<NamedFunction> default_test_family(const Grid& g, std::uint64_t seed);

/// Zero out samples on the outer quarter of the domain (an eighth per side),
/// producing the compactly supported variants the ratio experiments use.
SampledFunction apply_support_window(const SampledFunction& f);

}  // namespace onesided
