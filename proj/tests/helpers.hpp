#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "elmpde/features.hpp"

namespace testutil {

inline bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Layer with prescribed weights and biases, assembled through the binary
/// record so tests can pin exact parameter values.
inline elmpde::RandomFeatureLayer make_layer(const Eigen::MatrixXd& W,
                                             const Eigen::VectorXd& b,
                                             double half_range = 3.0) {
    std::stringstream ss;
    const char magic[4] = {'E', 'L', 'M', 'L'};
    ss.write(magic, 4);
    auto put = [&ss](auto v) { ss.write(reinterpret_cast<const char*>(&v), sizeof v); };
    put(std::uint32_t{1});
    put(static_cast<std::int32_t>(W.cols()));
    put(static_cast<std::int32_t>(W.rows()));
    put(half_range);
    put(std::uint64_t{0});
    put(std::uint8_t{0});
    for (int j = 0; j < W.rows(); ++j) {
        for (int a = 0; a < W.cols(); ++a) put(W(j, a));
    }
    for (int j = 0; j < W.rows(); ++j) put(b[j]);
    return elmpde::RandomFeatureLayer::load(ss);
}

}  // namespace testutil
