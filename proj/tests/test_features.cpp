#include <doctest.h>

#include <random>
#include <sstream>

#include "elmpde/errors.hpp"
#include "elmpde/features.hpp"
#include "elmpde/field.hpp"
#include "helpers.hpp"

using namespace elmpde;
using testutil::close;
using testutil::make_layer;

TEST_CASE("layer creation") {
    const RandomFeatureLayer one = RandomFeatureLayer::create(1, 2, 3.0, 77);
    CHECK(std::abs(one.weights()(0, 0)) <= 3.0);
    CHECK(std::abs(one.weights()(0, 1)) <= 3.0);
    CHECK(std::abs(one.biases()[0]) <= 3.0);

    const RandomFeatureLayer a = RandomFeatureLayer::create(100, 2, 3.0, 5);
    const RandomFeatureLayer b = RandomFeatureLayer::create(100, 2, 3.0, 5);
    CHECK(a.weights() == b.weights());
    CHECK(a.biases() == b.biases());

    const RandomFeatureLayer big = RandomFeatureLayer::create(10000, 1, 3.0, 9);
    CHECK(std::abs(big.biases().mean()) < 0.1);
    CHECK(big.weights().cwiseAbs().maxCoeff() <= 3.0);

    CHECK_THROWS_AS(RandomFeatureLayer::create(0, 2, 3.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(RandomFeatureLayer::create(5, 4, 3.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(RandomFeatureLayer::create(5, 2, 0.0, 1), std::invalid_argument);
}

TEST_CASE("eval closed forms") {
    Eigen::MatrixXd W(3, 2);
    W << 0.0, 0.0, 1.0, 0.0, -1.0, 0.0;
    Eigen::VectorXd b(3);
    b << 0.0, 0.0, 0.0;
    const RandomFeatureLayer layer = make_layer(W, b);

    Eigen::MatrixXd x(1, 2);
    x << 1.0, 0.0;
    const Eigen::MatrixXd H = layer.eval(x);
    CHECK(H(0, 0) == 0.0);                                     // zero neuron
    CHECK(H(0, 1) == doctest::Approx(0.7615941559557649));     // tanh(1)
    CHECK(H(0, 2) == doctest::Approx(-H(0, 1)));               // odd activation

    CHECK_THROWS_AS(layer.eval(Eigen::MatrixXd::Zero(1, 3)), DimensionMismatch);
}

TEST_CASE("derivative special values") {
    Eigen::MatrixXd W(1, 2);
    W << 1.0, 0.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(1);
    const RandomFeatureLayer layer = make_layer(W, b);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(1, 2);
    CHECK(layer.eval_derivative(x, {1, 0, 0})(0, 0) == doctest::Approx(1.0));
    CHECK(layer.eval_derivative(x, {0, 0, 0}) == layer.eval(x));
    CHECK_THROWS_AS(layer.eval_derivative(x, {2, 1, 0}), UnsupportedOrder);
    CHECK_THROWS_AS(layer.eval_derivative(x, {0, 0, 1}), DimensionMismatch);
}

TEST_CASE("derivative closed forms vs finite differences") {
    // first order against FD of the value; second order against FD of the
    // first-order closed form, so every formula is checked one level up
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    const int dim = 2;
    for (int probe = 0; probe < 100; ++probe) {
        Eigen::MatrixXd W(1, dim);
        Eigen::VectorXd b(1);
        for (int a = 0; a < dim; ++a) W(0, a) = uni(rng);
        b[0] = uni(rng);
        const RandomFeatureLayer layer = make_layer(W, b);
        Eigen::VectorXd p(dim);
        for (int a = 0; a < dim; ++a) p[a] = uni(rng) / 3.0;

        for (int k = 0; k < dim; ++k) {
            MultiIndex a1{0, 0, 0};
            a1[k] = 1;
            const double fd = finite_difference(
                [&](const Eigen::VectorXd& q) { return layer.feature_value(0, q, {0, 0, 0}); },
                p, a1, 1e-5);
            CHECK(close(layer.feature_value(0, p, a1), fd, 1e-6));
            for (int l = k; l < dim; ++l) {
                MultiIndex a2 = a1;
                a2[l] += 1;
                MultiIndex lower{0, 0, 0};
                lower[k] = 1;
                const double fd2 = finite_difference(
                    [&](const Eigen::VectorXd& q) { return layer.feature_value(0, q, lower); },
                    p, MultiIndex{l == 0 ? 1 : 0, l == 1 ? 1 : 0, l == 2 ? 1 : 0}, 1e-5);
                CHECK(close(layer.feature_value(0, p, a2), fd2, 1e-6));
            }
        }
    }
}

TEST_CASE("eval range and permutation equivariance") {
    const RandomFeatureLayer layer = RandomFeatureLayer::create(50, 2, 3.0, 31);
    Eigen::MatrixXd pts = Eigen::MatrixXd::Random(20, 2);
    const Eigen::MatrixXd H = layer.eval(pts);
    CHECK(H.cwiseAbs().maxCoeff() < 1.0);

    Eigen::MatrixXd shuffled(20, 2);
    std::vector<int> perm(20);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(4));
    for (int i = 0; i < 20; ++i) shuffled.row(i) = pts.row(perm[i]);
    const Eigen::MatrixXd Hs = layer.eval(shuffled);
    for (int i = 0; i < 20; ++i) {
        CHECK(Hs.row(i) == H.row(perm[i]));
    }
}

TEST_CASE("predict") {
    const RandomFeatureLayer layer = RandomFeatureLayer::create(30, 2, 3.0, 8);
    Eigen::MatrixXd pts = Eigen::MatrixXd::Random(10, 2);

    CHECK(layer.predict(Eigen::VectorXd::Zero(30), pts).isZero(0.0));

    Eigen::MatrixXd W(1, 2);
    W << 0.3, -0.2;
    Eigen::VectorXd b(1);
    b << 0.1;
    const RandomFeatureLayer single = make_layer(W, b);
    Eigen::MatrixXd x(1, 2);
    x << 0.5, 0.5;
    const double sigma = single.eval(x)(0, 0);
    Eigen::VectorXd beta(1);
    beta << 2.0;
    CHECK(single.predict(beta, x)[0] == doctest::Approx(2.0 * sigma));

    std::mt19937_64 rng(2);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd b1(30), b2(30);
    for (int i = 0; i < 30; ++i) {
        b1[i] = gauss(rng);
        b2[i] = gauss(rng);
    }
    const Eigen::VectorXd sum = layer.predict(b1 + b2, pts);
    const Eigen::VectorXd parts = layer.predict(b1, pts) + layer.predict(b2, pts);
    CHECK((sum - parts).norm() <= 1e-13 * parts.norm());

    CHECK_THROWS_AS(layer.predict(Eigen::VectorXd::Zero(29), pts), DimensionMismatch);
}

TEST_CASE("serialization round-trips bit-exactly") {
    const RandomFeatureLayer layer = RandomFeatureLayer::create(40, 3, 2.5, 999);
    std::stringstream ss;
    layer.save(ss);
    const std::string first = ss.str();

    std::stringstream in(first);
    const RandomFeatureLayer loaded = RandomFeatureLayer::load(in);
    CHECK(loaded.weights() == layer.weights());
    CHECK(loaded.biases() == layer.biases());
    CHECK(loaded.seed() == layer.seed());
    CHECK(loaded.half_range() == layer.half_range());

    std::stringstream again;
    loaded.save(again);
    CHECK(again.str() == first);

    std::stringstream bad("not a layer");
    CHECK_THROWS(RandomFeatureLayer::load(bad));
}
