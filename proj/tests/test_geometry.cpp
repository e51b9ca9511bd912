#include <doctest.h>

#include <cmath>
#include <set>

#include "elmpde/errors.hpp"
#include "elmpde/geometry.hpp"
#include "elmpde/problems.hpp"

using namespace elmpde;

namespace {

Domain unit_square() { return Domain::box({{0.0, 1.0}, {0.0, 1.0}}); }

// independent shoelace oracle
double shoelace(const std::vector<Eigen::Vector2d>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        s += a.x() * b.y() - b.x() * a.y();
    }
    return std::abs(s) / 2.0;
}

double perimeter(const std::vector<Eigen::Vector2d>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (v[(i + 1) % v.size()] - v[i]).norm();
    }
    return s;
}

}  // namespace

TEST_CASE("domain construction invariants") {
    CHECK_THROWS_AS(Domain::box({{1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Domain::polygon({{0.0, 0.0}, {1.0, 0.0}}), std::invalid_argument);
    // collinear vertices: zero signed area
    CHECK_THROWS_AS(Domain::polygon({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Domain::space_time(unit_square(), 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("contains") {
    const Domain box = unit_square();
    CHECK(contains(box, Eigen::Vector2d(0.5, 0.5)));
    CHECK_FALSE(contains(box, Eigen::Vector2d(1.0, 0.5)));  // boundary excluded
    CHECK_FALSE(contains(box, Eigen::Vector2d(1.5, 0.5)));

    const Domain lshape = l_shape_domain();
    CHECK_FALSE(contains(lshape, Eigen::Vector2d(0.5, 0.5)));  // cut quadrant
    CHECK(contains(lshape, Eigen::Vector2d(-0.5, 0.5)));
    CHECK(contains(lshape, Eigen::Vector2d(0.5, -0.5)));

    CHECK_THROWS_AS(contains(box, Eigen::Vector3d(0.5, 0.5, 0.5)),
                    std::invalid_argument);
}

TEST_CASE("measures against independent oracles") {
    CHECK(unit_square().volume() == doctest::Approx(1.0));
    CHECK(unit_square().boundary_measure() == doctest::Approx(4.0));
    CHECK(unit_square().characteristic_length() == doctest::Approx(1.0));

    const Domain lshape = l_shape_domain();
    CHECK(lshape.volume() == doctest::Approx(shoelace(lshape.vertices())));
    CHECK(lshape.volume() == doctest::Approx(3.0));
    CHECK(lshape.boundary_measure() == doctest::Approx(perimeter(lshape.vertices())));

    const Domain star = star_domain();
    CHECK(star.volume() == doctest::Approx(shoelace(star.vertices())));
    CHECK(star.boundary_measure() == doctest::Approx(perimeter(star.vertices())));

    // 1D spatial box: endpoint-counting boundary
    const Domain seg = Domain::box({{0.0, 5.0}});
    CHECK(seg.boundary_measure() == doctest::Approx(2.0));

    // space-time: lateral surface + initial face, final face excluded
    const Domain st = Domain::space_time(Domain::box({{0.0, 5.0}}), 0.0, 5.0);
    CHECK(st.volume() == doctest::Approx(25.0));
    CHECK(st.boundary_measure() == doctest::Approx(2.0 * 5.0 + 5.0));
    CHECK(st.dim() == 2);

    const Domain st3 =
        Domain::space_time(Domain::box({{0.0, 1.0}, {0.0, 1.0}}), 0.0, 0.25);
    CHECK(st3.volume() == doctest::Approx(0.25));
    CHECK(st3.boundary_measure() == doctest::Approx(4.0 * 0.25 + 1.0));
}

TEST_CASE("interior sampling") {
    std::mt19937_64 rng(11);
    const Eigen::MatrixXd one = sample_interior(unit_square(), 1, rng);
    CHECK(one(0, 0) > 0.0);
    CHECK(one(0, 0) < 1.0);
    CHECK(one(0, 1) > 0.0);
    CHECK(one(0, 1) < 1.0);

    const Domain lshape = l_shape_domain();
    std::mt19937_64 rng2(7);
    const Eigen::MatrixXd pts = sample_interior(lshape, 1000, rng2);
    for (int i = 0; i < pts.rows(); ++i) {
        CHECK(contains(lshape, Eigen::VectorXd(pts.row(i))));
    }

    std::mt19937_64 rng3(3);
    const Eigen::MatrixXd big = sample_interior(unit_square(), 100000, rng3);
    CHECK(std::abs(big.col(0).mean() - 0.5) < 0.01);
    CHECK(std::abs(big.col(1).mean() - 0.5) < 0.01);
}

TEST_CASE("interior sampling rejects degenerate regions") {
    // sliver along the diagonal: acceptance ratio ~5e-6
    const Domain sliver =
        Domain::polygon({{0.0, 0.0}, {1.0, 1.0}, {1.0, 1.0 + 1e-5}});
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(sample_interior(sliver, 10, rng), DegenerateDomain);
}

TEST_CASE("boundary sampling") {
    std::mt19937_64 rng(5);
    const Eigen::MatrixXd four = sample_boundary(unit_square(), 4, rng);
    for (int i = 0; i < 4; ++i) {
        const Eigen::Vector2d p = four.row(i);
        const bool on_edge = p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0 || p.y() == 1.0;
        CHECK(on_edge);
    }

    const Domain st = Domain::space_time(Domain::box({{0.0, 5.0}}), 0.0, 5.0);
    std::mt19937_64 rng2(6);
    const Eigen::MatrixXd stp = sample_boundary(st, 100, rng2);
    for (int i = 0; i < stp.rows(); ++i) {
        CHECK(stp(i, 1) < 5.0);  // never the final-time face
    }

    std::mt19937_64 rng3(9);
    const Eigen::MatrixXd many = sample_boundary(unit_square(), 100000, rng3);
    int per_edge[4] = {0, 0, 0, 0};
    for (int i = 0; i < many.rows(); ++i) {
        const Eigen::Vector2d p = many.row(i);
        if (p.x() == 0.0) ++per_edge[0];
        else if (p.x() == 1.0) ++per_edge[1];
        else if (p.y() == 0.0) ++per_edge[2];
        else ++per_edge[3];
    }
    for (const int c : per_edge) {
        CHECK(std::abs(c / 100000.0 - 0.25) < 0.01);
    }
}

TEST_CASE("boundary samples lie on the boundary") {
    for (const Domain& d : {unit_square(), l_shape_domain(), star_domain(),
                            Domain::space_time(Domain::box({{0.0, 5.0}}), 0.0, 5.0)}) {
        std::mt19937_64 rng(17);
        const Eigen::MatrixXd pts = sample_boundary(d, 500, rng);
        for (int i = 0; i < pts.rows(); ++i) {
            CHECK(d.boundary_distance(pts.row(i)) <= 1e-12);
        }
    }
}

TEST_CASE("point sets are deterministic per seed") {
    const PointSet a = sample_point_set(l_shape_domain(), 200, 50, 42);
    const PointSet b = sample_point_set(l_shape_domain(), 200, 50, 42);
    CHECK(a.interior == b.interior);
    CHECK(a.boundary == b.boundary);
    const PointSet c = sample_point_set(l_shape_domain(), 200, 50, 43);
    CHECK(a.interior != c.interior);
}

TEST_CASE("allocate_counts") {
    const Domain sq = unit_square();

    const PointAllocation s = allocate_counts(1000, PointRule::sqrt_rule, sq);
    CHECK(s.n_interior + s.n_boundary == 1000);
    CHECK(std::abs(s.n_boundary - 4.0 * std::sqrt(double(s.n_interior))) <= 1.0);

    const PointAllocation lin = allocate_counts(1000, PointRule::linear, sq);
    CHECK(lin.n_interior == 500);
    CHECK(lin.n_boundary == 500);

    const PointAllocation fx = allocate_counts(1050, PointRule::fixed, sq, 50);
    CHECK(fx.n_interior == 1000);
    CHECK(fx.n_boundary == 50);

    // totality: a valid split for every N >= 2
    for (int n = 2; n <= 60; ++n) {
        for (const PointRule rule : {PointRule::linear, PointRule::sqrt_rule}) {
            const PointAllocation a = allocate_counts(n, rule, sq);
            CHECK(a.n_interior + a.n_boundary == n);
            CHECK(a.n_interior >= 1);
            CHECK(a.n_boundary >= 1);
        }
    }

    CHECK_THROWS_AS(allocate_counts(1, PointRule::linear, sq), std::invalid_argument);
    CHECK_THROWS_AS(allocate_counts(100, PointRule::fixed, sq, 100),
                    std::invalid_argument);
}

TEST_CASE("point set CSV") {
    const PointSet ps = sample_point_set(unit_square(), 3, 2, 1);
    const std::string csv = point_set_csv(ps);
    CHECK(csv.rfind("x0,x1,tag\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK(csv.find(",interior") != std::string::npos);
    CHECK(csv.find(",boundary") != std::string::npos);

    const PointSet ps3 = sample_point_set(
        Domain::space_time(Domain::box({{0.0, 1.0}, {0.0, 1.0}}), 0.0, 0.25), 2, 2, 1);
    CHECK(point_set_csv(ps3).rfind("x0,x1,x2,tag\n", 0) == 0);
}
