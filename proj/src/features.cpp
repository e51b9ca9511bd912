#include "elmpde/features.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "elmpde/errors.hpp"

namespace elmpde {

namespace {

constexpr std::uint32_t kFormatVersion = 1;
constexpr char kMagic[4] = {'E', 'L', 'M', 'L'};

template <typename T>
void write_raw(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("layer record truncated");
    return v;
}

}  // namespace

RandomFeatureLayer RandomFeatureLayer::create(int neurons, int dim, double half_range,
                                              std::uint64_t seed) {
    if (neurons < 1) throw std::invalid_argument("layer needs at least one neuron");
    if (dim < 1 || dim > 3) throw std::invalid_argument("layer dimension must be 1, 2 or 3");
    if (!(half_range > 0.0)) throw std::invalid_argument("sampling half-range must be positive");

    RandomFeatureLayer layer;
    layer.weights_.resize(neurons, dim);
    layer.biases_.resize(neurons);
    layer.half_range_ = half_range;
    layer.seed_ = seed;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-half_range, half_range);
    // row-major fill order: all weights of a neuron, then its bias
    for (int j = 0; j < neurons; ++j) {
        for (int a = 0; a < dim; ++a) layer.weights_(j, a) = uni(rng);
        layer.biases_[j] = uni(rng);
    }
    return layer;
}

Eigen::MatrixXd RandomFeatureLayer::eval(const Eigen::MatrixXd& points) const {
    return eval_derivative(points, {0, 0, 0});
}

Eigen::MatrixXd RandomFeatureLayer::eval_derivative(const Eigen::MatrixXd& points,
                                                    const MultiIndex& alpha) const {
    if (points.cols() != dim()) {
        throw DimensionMismatch("points have dimension " + std::to_string(points.cols()) +
                                ", layer expects " + std::to_string(dim()));
    }
    const int ord = order(alpha);
    if (ord < 0 || ord > 2) throw UnsupportedOrder("derivative order above 2 is unsupported");

    // t = tanh(w.x + b); d_k sigma = w_k (1 - t^2); d_k d_l sigma = -2 w_k w_l t (1 - t^2)
    Eigen::MatrixXd t = ((points * weights_.transpose()).rowwise() + biases_.transpose())
                            .array()
                            .tanh()
                            .matrix();
    if (ord == 0) return t;

    int k = -1, l = -1;
    for (int a = 0; a < 3; ++a) {
        if (alpha[a] < 0) throw UnsupportedOrder("negative derivative order");
        for (int rep = 0; rep < alpha[a]; ++rep) (k < 0 ? k : l) = a;
    }
    if (k >= dim() || (l >= 0 && l >= dim())) {
        throw DimensionMismatch("multi-index touches a coordinate beyond the layer dimension");
    }

    Eigen::MatrixXd out(points.rows(), neurons());
    if (ord == 1) {
        out = (1.0 - t.array().square()).matrix() * weights_.col(k).asDiagonal();
    } else {
        const Eigen::VectorXd wkl =
            (weights_.col(k).array() * weights_.col(l).array()).matrix();
        out = (-2.0 * t.array() * (1.0 - t.array().square())).matrix() * wkl.asDiagonal();
    }
    return out;
}

Eigen::VectorXd RandomFeatureLayer::predict(const Eigen::VectorXd& beta,
                                            const Eigen::MatrixXd& points,
                                            const MultiIndex& alpha) const {
    if (beta.size() != neurons()) {
        throw DimensionMismatch("output weight vector length does not match neuron count");
    }
    return eval_derivative(points, alpha) * beta;
}

double RandomFeatureLayer::feature_value(int j, const Eigen::VectorXd& point,
                                         const MultiIndex& alpha) const {
    if (point.size() != dim()) throw DimensionMismatch("point dimension mismatch");
    const int ord = order(alpha);
    if (ord > 2) throw UnsupportedOrder("derivative order above 2 is unsupported");
    const double t = std::tanh(weights_.row(j).dot(point) + biases_[j]);
    if (ord == 0) return t;
    int k = -1, l = -1;
    for (int a = 0; a < 3; ++a) {
        for (int rep = 0; rep < alpha[a]; ++rep) (k < 0 ? k : l) = a;
    }
    if (ord == 1) return weights_(j, k) * (1.0 - t * t);
    return -2.0 * weights_(j, k) * weights_(j, l) * t * (1.0 - t * t);
}

void RandomFeatureLayer::save(std::ostream& os) const {
    os.write(kMagic, sizeof(kMagic));
    write_raw(os, kFormatVersion);
    write_raw<std::int32_t>(os, dim());
    write_raw<std::int32_t>(os, neurons());
    write_raw(os, half_range_);
    write_raw(os, seed_);
    write_raw<std::uint8_t>(os, static_cast<std::uint8_t>(activation_));
    for (int j = 0; j < neurons(); ++j) {
        for (int a = 0; a < dim(); ++a) write_raw(os, weights_(j, a));
    }
    for (int j = 0; j < neurons(); ++j) write_raw(os, biases_[j]);
}

RandomFeatureLayer RandomFeatureLayer::load(std::istream& is) {
    char magic[4];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("not a layer record");
    }
    const auto version = read_raw<std::uint32_t>(is);
    if (version != kFormatVersion) {
        throw std::runtime_error("unsupported layer record version " + std::to_string(version));
    }
    const auto d = read_raw<std::int32_t>(is);
    const auto L = read_raw<std::int32_t>(is);
    RandomFeatureLayer layer;
    layer.half_range_ = read_raw<double>(is);
    layer.seed_ = read_raw<std::uint64_t>(is);
    layer.activation_ = static_cast<Activation>(read_raw<std::uint8_t>(is));
    layer.weights_.resize(L, d);
    layer.biases_.resize(L);
    for (int j = 0; j < L; ++j) {
        for (int a = 0; a < d; ++a) layer.weights_(j, a) = read_raw<double>(is);
    }
    for (int j = 0; j < L; ++j) layer.biases_[j] = read_raw<double>(is);
    return layer;
}

}  // namespace elmpde
