#include <doctest.h>

#include <random>
#include <sstream>

#include "elmpde/assembly.hpp"
#include "elmpde/errors.hpp"
#include "elmpde/problems.hpp"
#include "helpers.hpp"

using namespace elmpde;
using testutil::close;
using testutil::make_layer;

TEST_CASE("operator matrix basics") {
    const RandomFeatureLayer layer = RandomFeatureLayer::create(20, 2, 3.0, 3);
    Eigen::MatrixXd pts = Eigen::MatrixXd::Random(15, 2);

    CHECK(assemble_operator_matrix(layer, LinearOperatorSpec::identity(), pts) ==
          layer.eval(pts));

    // constant feature (w = 0): Laplacian column vanishes
    Eigen::MatrixXd W = Eigen::MatrixXd::Random(3, 2);
    W.row(1).setZero();
    Eigen::VectorXd b = Eigen::VectorXd::Random(3);
    const RandomFeatureLayer crafted = make_layer(W, b);
    const Eigen::MatrixXd A =
        assemble_operator_matrix(crafted, LinearOperatorSpec::laplacian(2), pts);
    CHECK(A.col(1).isZero(0.0));
}

TEST_CASE("operator matrix matches a finite-difference application") {
    const RandomFeatureLayer layer = RandomFeatureLayer::create(25, 2, 3.0, 6);
    Eigen::MatrixXd pts = Eigen::MatrixXd::Random(10, 2);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd beta(25);
    for (int i = 0; i < 25; ++i) beta[i] = gauss(rng);

    const Eigen::VectorXd Abeta =
        assemble_operator_matrix(layer, LinearOperatorSpec::laplacian(2), pts) * beta;
    auto u = [&](const Eigen::VectorXd& p) {
        Eigen::MatrixXd m(1, 2);
        m.row(0) = p.transpose();
        return layer.predict(beta, m)[0];
    };
    const LinearOperatorSpec lap = LinearOperatorSpec::laplacian(2);
    for (int i = 0; i < pts.rows(); ++i) {
        CHECK(close(Abeta[i], lap.apply_fd(u, pts.row(i)), 1e-6));
    }
}

TEST_CASE("boundary matrix") {
    Eigen::MatrixXd W = Eigen::MatrixXd::Random(4, 2);
    Eigen::VectorXd b = Eigen::VectorXd::Random(4);
    const RandomFeatureLayer layer = make_layer(W, b);
    Eigen::MatrixXd pts = Eigen::MatrixXd::Random(6, 2);

    // Dirichlet = plain evaluation
    CHECK(assemble_operator_matrix(layer, LinearOperatorSpec::identity(), pts) ==
          layer.eval(pts));

    // Neumann-in-x columns match the analytic w (1 - t^2)
    LinearOperatorSpec ddx;
    ddx.add({1, 0, 0}, 1.0);
    const Eigen::MatrixXd C = assemble_operator_matrix(layer, ddx, pts);
    const Eigen::MatrixXd t = layer.eval(pts);
    for (int i = 0; i < pts.rows(); ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(C(i, j) ==
                  doctest::Approx(W(j, 0) * (1.0 - t(i, j) * t(i, j))).epsilon(1e-12));
        }
    }

    LinearOperatorSpec zero;
    zero.add({0, 0, 0}, [](const Eigen::VectorXd&) { return 0.0; });
    CHECK(assemble_operator_matrix(layer, zero, pts).isZero(0.0));
}

TEST_CASE("assembly is linear in the operator") {
    const RandomFeatureLayer layer = RandomFeatureLayer::create(12, 2, 3.0, 21);
    Eigen::MatrixXd pts = Eigen::MatrixXd::Random(8, 2);
    LinearOperatorSpec d1, d2, sum;
    d1.add({1, 0, 0}, 2.0);
    d2.add({0, 2, 0}, [](const Eigen::VectorXd& p) { return p[0]; });
    sum.add({1, 0, 0}, 2.0).add({0, 2, 0}, [](const Eigen::VectorXd& p) { return p[0]; });
    const Eigen::MatrixXd lhs = assemble_operator_matrix(layer, sum, pts);
    const Eigen::MatrixXd rhs = assemble_operator_matrix(layer, d1, pts) +
                                assemble_operator_matrix(layer, d2, pts);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("feature cache evaluates each derivative once") {
    const RandomFeatureLayer layer = RandomFeatureLayer::create(10, 2, 3.0, 2);
    FeatureCache cache(layer, Eigen::MatrixXd::Random(5, 2));
    LinearOperatorSpec op;
    // value appears twice with different coefficients, still one evaluation
    op.add({0, 0, 0}, 1.0)
        .add({0, 0, 0}, [](const Eigen::VectorXd& p) { return p[1]; })
        .add({2, 0, 0}, 1.0)
        .add({0, 2, 0}, 1.0);
    assemble_operator_matrix(cache, op);
    CHECK(cache.evaluations() == 3);
    assemble_operator_matrix(cache, op);  // fully cached second pass
    CHECK(cache.evaluations() == 3);
}

TEST_CASE("assemble_rhs") {
    Eigen::MatrixXd pts(1, 2);
    pts << 0.25, 0.5;
    CHECK(assemble_rhs([](const Eigen::VectorXd&) { return 0.0; }, pts).isZero(0.0));
    CHECK(assemble_rhs([](const Eigen::VectorXd& p) { return p[0] + p[1]; }, pts)[0] ==
          doctest::Approx(0.75));

    // the traveling wave solves the homogeneous equation, so f is the zero literal
    const BenchmarkProblem& bf = lookup("burgers-fisher-1d");
    Eigen::MatrixXd probes(3, 2);
    probes << 0.5, 0.5, 2.0, 1.0, 4.5, 4.9;
    CHECK(assemble_rhs(bf.source, probes).isZero(0.0));

    Eigen::MatrixXd with_zero(2, 2);
    with_zero << 1.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(
        assemble_rhs([](const Eigen::VectorXd& p) { return 1.0 / p[0]; }, with_zero),
        NonFiniteData);
}

TEST_CASE("nonlinear residual wrappers") {
    const RandomFeatureLayer layer = RandomFeatureLayer::create(15, 2, 3.0, 13);
    Eigen::MatrixXd pts = Eigen::MatrixXd::Random(9, 2);
    FeatureCache cache(layer, pts);

    // degenerate linear form reproduces A beta - f exactly
    const LinearOperatorSpec lap = LinearOperatorSpec::laplacian(2);
    const Eigen::VectorXd f = Eigen::VectorXd::Random(9);
    const NonlinearResidualSpec spec =
        build_nonlinear_residual(cache, linear_form(lap), f);
    const Eigen::MatrixXd A = assemble_operator_matrix(cache, lap);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd beta(15);
    for (int i = 0; i < 15; ++i) beta[i] = gauss(rng);
    CHECK((spec.residual(beta) - (A * beta - f)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(spec.n_points == 9);
}

TEST_CASE("catalog jacobians match finite differences in beta") {
    for (const char* id : {"burgers-fisher-1d", "nonlinear-diffusion-2d"}) {
        const BenchmarkProblem& pb = lookup(id);
        const int d = pb.domain.dim();
        const int L = 12;
        const RandomFeatureLayer layer = RandomFeatureLayer::create(L, d, 3.0, 77);
        std::mt19937_64 rng(31);
        FeatureCache cache(layer, sample_interior(pb.domain, 7, rng));
        const NonlinearResidualSpec spec = build_nonlinear_residual(
            cache, *pb.nonlinear, Eigen::VectorXd::Zero(7));

        std::normal_distribution<double> gauss;
        for (int draw = 0; draw < 10; ++draw) {
            Eigen::VectorXd beta(L);
            for (int i = 0; i < L; ++i) beta[i] = gauss(rng);
            const Eigen::MatrixXd J = spec.jacobian(beta);
            const double h = 1e-6;
            for (int j = 0; j < L; ++j) {
                Eigen::VectorXd bp = beta, bm = beta;
                bp[j] += h;
                bm[j] -= h;
                const Eigen::VectorXd col = (spec.residual(bp) - spec.residual(bm)) / (2 * h);
                for (int i = 0; i < 7; ++i) {
                    CHECK(close(J(i, j), col[i], 1e-5));
                }
            }
        }
    }
}

TEST_CASE("nonlinear diffusion residual at beta = 0") {
    const BenchmarkProblem& pb = lookup("nonlinear-diffusion-2d");
    const RandomFeatureLayer layer = RandomFeatureLayer::create(8, 3, 3.0, 4);
    std::mt19937_64 rng(8);
    FeatureCache cache(layer, sample_interior(pb.domain, 5, rng));
    const NonlinearResidualSpec spec =
        build_nonlinear_residual(cache, *pb.nonlinear, Eigen::VectorXd::Zero(5));
    CHECK(spec.residual(Eigen::VectorXd::Zero(8)).isZero(0.0));
}

TEST_CASE("dense binary matrix round trip") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(7, 3);
    std::stringstream ss;
    write_dense_matrix(ss, m);
    CHECK(read_dense_matrix(ss) == m);
}
