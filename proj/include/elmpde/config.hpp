#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "elmpde/geometry.hpp"
#include "elmpde/solvers.hpp"

namespace elmpde {

enum class Method { lse, pielm, xtfc };

/// Network width relative to the point budget N.
enum class Ratio { under, square, over };  // L = N/2, N, 2N

struct RunConfig {
    std::string problem_id;
    Method method = Method::lse;
    double lambda = 1.0;  // penalty weight, pielm only
    int n_total = 1000;
    PointRule point_rule = PointRule::sqrt_rule;
    int fixed_boundary = 0;  // boundary count for the fixed rule
    Ratio ratio = Ratio::over;
    double half_range = 3.0;  // M, weight/bias range
    std::uint64_t seed = 0;
    double rank_tol = 1e-12;
    GaussNewtonOptions gn;
    int n_test = 10000;
};

inline int neurons_for(int n_total, Ratio ratio) {
    switch (ratio) {
        case Ratio::under: return n_total / 2;
        case Ratio::square: return n_total;
        case Ratio::over: return 2 * n_total;
    }
    return n_total;
}

inline std::string to_string(Method m) {
    switch (m) {
        case Method::lse: return "lse";
        case Method::pielm: return "pielm";
        case Method::xtfc: return "xtfc";
    }
    return "?";
}

inline std::string to_string(Ratio r) {
    switch (r) {
        case Ratio::under: return "under";
        case Ratio::square: return "square";
        case Ratio::over: return "over";
    }
    return "?";
}

inline std::string to_string(PointRule r) {
    switch (r) {
        case PointRule::fixed: return "fixed";
        case PointRule::linear: return "linear";
        case PointRule::sqrt_rule: return "sqrt";
    }
    return "?";
}

Method parse_method(std::string_view s);
Ratio parse_ratio(std::string_view s);
PointRule parse_point_rule(std::string_view s);

/// FNV-1a 64-bit over the tag bytes, mixed with the master seed through a
/// SplitMix64 finalizer. Stable across platforms by construction; used to
/// decorrelate point sampling from weight draws.
inline std::uint64_t sub_seed(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : tag) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::uint64_t x = seed ^ h;
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace elmpde
