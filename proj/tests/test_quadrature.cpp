#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dualmink/quadrature.hpp"

using namespace dualmink;

namespace {

constexpr double kPi = 3.14159265358979323846;

// sum_i w_i u_i u_i^T should be (area/n) I for any rule exact on quadratics.
double moment_defect(const SphereQuadrature& q) {
    const int n = q.ambient();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < q.size(); ++i)
        m += q.weights()[i] * q.nodes().col(i) * q.nodes().col(i).transpose();
    return (m - (sphere_area(n) / n) * Eigen::MatrixXd::Identity(n, n)).norm();
}

} // namespace

TEST_CASE("sphere area and ball volume") {
    CHECK(sphere_area(1) == doctest::Approx(2.0));
    CHECK(sphere_area(2) == doctest::Approx(2 * kPi));
    CHECK(sphere_area(3) == doctest::Approx(4 * kPi));
    CHECK(sphere_area(4) == doctest::Approx(2 * kPi * kPi));
    CHECK(ball_volume(2) == doctest::Approx(kPi));
    CHECK(ball_volume(3) == doctest::Approx(4 * kPi / 3));
}

TEST_CASE("pair rule on the 0-sphere") {
    const auto q = SphereQuadrature::pair();
    CHECK(q.ambient() == 1);
    CHECK(q.size() == 2);
    CHECK(q.weights().sum() == doctest::Approx(2.0));
    CHECK(q.nodes()(0, 0) * q.nodes()(0, 1) == doctest::Approx(-1.0));
}

TEST_CASE("circle rule integrates exactly") {
    const auto q = SphereQuadrature::circle(1000);
    CHECK(q.size() == 1000);
    CHECK(q.weights().sum() == doctest::Approx(2 * kPi).epsilon(1e-13));
    CHECK(moment_defect(q) < 1e-12);
    for (Eigen::Index i = 0; i < q.size(); ++i)
        CHECK(q.nodes().col(i).norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("spiral rule equidistributes") {
    const auto q = SphereQuadrature::spiral(5000);
    CHECK(q.ambient() == 3);
    CHECK(q.weights().sum() == doctest::Approx(4 * kPi).epsilon(1e-13));
    CHECK(moment_defect(q) < 0.02);
}

TEST_CASE("monte carlo rule is seeded and consistent") {
    const auto q1 = SphereQuadrature::monte_carlo(4, 20000, 42);
    const auto q2 = SphereQuadrature::monte_carlo(4, 20000, 42);
    CHECK((q1.nodes() - q2.nodes()).norm() == 0.0);
    CHECK(q1.weights().sum() == doctest::Approx(sphere_area(4)).epsilon(1e-12));
    CHECK(moment_defect(q1) < 0.2);
    const auto q3 = SphereQuadrature::monte_carlo(4, 20000, 43);
    CHECK((q1.nodes() - q3.nodes()).norm() > 1.0);
}

TEST_CASE("dimension dispatch") {
    CHECK(SphereQuadrature::for_dimension(2, 100, 1).scheme().rfind("circle", 0) == 0);
    CHECK(SphereQuadrature::for_dimension(3, 100, 1).scheme().rfind("spiral", 0) == 0);
    CHECK(SphereQuadrature::for_dimension(5, 100, 1).scheme().rfind("montecarlo", 0) == 0);
}

TEST_CASE("symmetrization makes the node set invariant") {
    Eigen::Matrix2d r;
    const double c = std::cos(2 * kPi / 3), s = std::sin(2 * kPi / 3);
    r << c, -s, s, c;
    const auto g = FiniteGroup::close_generators({r});
    const auto q = SphereQuadrature::circle(999).symmetrized(g);
    CHECK(q.size() == 3 * 999);
    CHECK(q.weights().sum() == doctest::Approx(2 * kPi).epsilon(1e-12));
    // Spot-check: the rotate of each of the first nodes appears among the nodes.
    for (int i = 0; i < 5; ++i) {
        const Eigen::Vector2d target = r * q.nodes().col(i);
        double best = 2.0;
        for (Eigen::Index j = 0; j < q.size(); ++j)
            best = std::min(best, (q.nodes().col(j) - target).norm());
        CHECK(best < 1e-12);
    }
}

TEST_CASE("independent variant doubles resolution and decorrelates") {
    const auto q = SphereQuadrature::circle(500);
    const auto v = q.independent_variant(17);
    CHECK(v.size() == 2 * q.size());
    CHECK(v.weights().sum() == doctest::Approx(2 * kPi).epsilon(1e-12));
    CHECK(v.scheme().rfind("circle", 0) == 0);

    const auto m = SphereQuadrature::monte_carlo(4, 1000, 9);
    const auto mv = m.independent_variant(17);
    CHECK(mv.size() == 2000);
    CHECK(mv.seed() != m.seed());

    // Symmetrized rules keep their base scheme through the variant.
    Eigen::Matrix2d neg = -Eigen::Matrix2d::Identity();
    const auto g = FiniteGroup::close_generators({neg});
    const auto sv = SphereQuadrature::circle(500).symmetrized(g).independent_variant(3);
    CHECK(sv.scheme().rfind("circle", 0) == 0);
    CHECK(sv.weights().sum() == doctest::Approx(2 * kPi).epsilon(1e-12));
}
