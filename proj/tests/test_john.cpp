#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dualmink/john.hpp"

using namespace dualmink;

namespace {

constexpr double kPi = 3.14159265358979323846;

BodySpec box2(double a, double b) {
    std::vector<UnitVector> n = {UnitVector::axis(2, 0),
                                 UnitVector(-UnitVector::axis(2, 0).coords()),
                                 UnitVector::axis(2, 1),
                                 UnitVector(-UnitVector::axis(2, 1).coords())};
    return BodySpec(std::move(n), (Eigen::VectorXd(4) << a, a, b, b).finished());
}

BodySpec equilateral_triangle() {
    std::vector<UnitVector> n;
    for (int k = 0; k < 3; ++k) {
        const double t = kPi / 2 + 2 * kPi * k / 3;
        n.push_back(UnitVector((Eigen::VectorXd(2) << std::cos(t), std::sin(t)).finished()));
    }
    return BodySpec(std::move(n), Eigen::VectorXd::Ones(3));
}

} // namespace

TEST_CASE("rectangle: inscribed shape matrix is diag(a, b)") {
    const auto b = box2(1.5, 0.7);
    const Eigen::MatrixXd a = max_inscribed_shape_matrix(b);
    CHECK(a(0, 0) == doctest::Approx(1.5).epsilon(1e-7));
    CHECK(a(1, 1) == doctest::Approx(0.7).epsilon(1e-7));
    CHECK(std::abs(a(0, 1)) < 1e-7);

    const auto e = john_ellipsoid(b);
    REQUIRE(e.block_count() == 2);
    CHECK(e.semi_axes()[0] == doctest::Approx(0.7).epsilon(1e-7));
    CHECK(e.semi_axes()[1] == doctest::Approx(1.5).epsilon(1e-7));
}

TEST_CASE("square: one spectral block with unit axis") {
    const auto e = john_ellipsoid(box2(1.0, 1.0));
    REQUIRE(e.block_count() == 1);
    CHECK(e.blocks()[0].dim() == 2);
    CHECK(e.semi_axes()[0] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("equilateral triangle: incircle of radius 1") {
    // Not origin-symmetric; the origin-centered maximal ellipsoid is the
    // incircle because the inradius is attained in every direction.
    const auto e = john_ellipsoid(equilateral_triangle());
    REQUIRE(e.block_count() == 1);
    CHECK(e.semi_axes()[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("inscribed constraints hold on a generic polygon") {
    std::vector<UnitVector> n;
    for (double t : {0.2, 1.1, 1.9, 3.0, 4.0, 5.2}) {
        n.push_back(UnitVector((Eigen::VectorXd(2) << std::cos(t), std::sin(t)).finished()));
    }
    const BodySpec b(std::move(n),
                     (Eigen::VectorXd(6) << 1.0, 1.2, 0.8, 1.1, 0.9, 1.0).finished());
    const Eigen::MatrixXd a = max_inscribed_shape_matrix(b);
    // Symmetric positive definite and feasible: |A v_j| <= h_j.
    CHECK((a - a.transpose()).norm() < 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    CHECK(es.eigenvalues().minCoeff() > 0);
    for (Eigen::Index j = 0; j < b.facets(); ++j)
        CHECK((a * b.normal_matrix().col(j)).norm() <= b.support()[j] + 1e-8);
}

TEST_CASE("sandwich check accepts the john ellipsoid and rejects inflation") {
    const auto b = box2(1.5, 0.7);
    const auto e = john_ellipsoid(b);
    CHECK(john_sandwich_check(b, e, 1e-7));
    // Doubling the ellipsoid breaks E subset K.
    const BlockEllipsoid big(e.blocks(), (2.0 * e.semi_axes().array()).matrix());
    CHECK_FALSE(john_sandwich_check(b, big, 1e-7));
}

TEST_CASE("group-aware variant validates its inputs") {
    const auto g2 = FiniteGroup::close_generators({-Eigen::MatrixXd::Identity(2, 2)});
    const auto b = box2(1.5, 0.7);
    const auto e = john_ellipsoid(b, g2);
    CHECK(e.semi_axes()[0] == doctest::Approx(0.7).epsilon(1e-7));
    CHECK(john_sandwich_check(b, e, 1e-7));

    // Nonzero fixed subspace is rejected.
    Eigen::Matrix2d refl = Eigen::Vector2d(1, -1).asDiagonal();
    CHECK_THROWS_AS(john_ellipsoid(b, FiniteGroup::close_generators({refl})), InputError);

    // A body that is not invariant under the group is rejected.
    Eigen::Matrix2d r;
    const double c = std::cos(2 * kPi / 3), s = std::sin(2 * kPi / 3);
    r << c, -s, s, c;
    CHECK_THROWS_AS(john_ellipsoid(b, FiniteGroup::close_generators({r})), InputError);
}
