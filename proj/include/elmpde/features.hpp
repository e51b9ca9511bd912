#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>

namespace elmpde {

/// Partial-derivative multi-index, one order per coordinate. Supported
/// total order is 0..2.
using MultiIndex = std::array<int, 3>;

inline int order(const MultiIndex& alpha) { return alpha[0] + alpha[1] + alpha[2]; }

enum class Activation : std::uint8_t { tanh = 0 };

/// Frozen random single-hidden-layer feature model
///     sigma_j(x) = tanh(w_j . x + b_j)
/// with w_j, b_j drawn i.i.d. uniform on [-M, M] and fixed afterwards.
class RandomFeatureLayer {
public:
    static RandomFeatureLayer create(int neurons, int dim, double half_range,
                                     std::uint64_t seed);

    int neurons() const { return static_cast<int>(weights_.rows()); }
    int dim() const { return static_cast<int>(weights_.cols()); }
    double half_range() const { return half_range_; }
    std::uint64_t seed() const { return seed_; }
    Activation activation() const { return activation_; }

    const Eigen::MatrixXd& weights() const { return weights_; }  // L x d
    const Eigen::VectorXd& biases() const { return biases_; }    // L

    /// N x L matrix with entry (i, j) = sigma_j(x_i).
    Eigen::MatrixXd eval(const Eigen::MatrixXd& points) const;

    /// N x L matrix with entry (i, j) = d^alpha sigma_j(x_i), from the
    /// tanh closed forms. Total order of alpha must be <= 2.
    Eigen::MatrixXd eval_derivative(const Eigen::MatrixXd& points,
                                    const MultiIndex& alpha) const;

    /// eval_derivative(points, alpha) * beta.
    Eigen::VectorXd predict(const Eigen::VectorXd& beta, const Eigen::MatrixXd& points,
                            const MultiIndex& alpha = {0, 0, 0}) const;

    /// Value and derivatives of a single feature at a single point.
    double feature_value(int j, const Eigen::VectorXd& point, const MultiIndex& alpha) const;

    /// Binary record {version, d, L, M, seed, activation, W row-major, b};
    /// round-trips bit-exactly.
    void save(std::ostream& os) const;
    static RandomFeatureLayer load(std::istream& is);

private:
    RandomFeatureLayer() = default;
    Eigen::MatrixXd weights_;
    Eigen::VectorXd biases_;
    double half_range_ = 0.0;
    std::uint64_t seed_ = 0;
    Activation activation_ = Activation::tanh;
};

}  // namespace elmpde
