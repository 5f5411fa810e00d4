#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dualmink/group.hpp"

using namespace dualmink;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix2d rot(double t) {
    Eigen::Matrix2d r;
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return r;
}

FiniteGroup sign_even_r3() {
    Eigen::Matrix3d a = Eigen::Vector3d(1, -1, -1).asDiagonal();
    Eigen::Matrix3d b = Eigen::Vector3d(-1, 1, -1).asDiagonal();
    return FiniteGroup::close_generators({a, b});
}

FiniteGroup cube_rotations() {
    Eigen::Matrix3d rz, rx;
    rz << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    rx << 1, 0, 0, 0, 0, -1, 0, 1, 0;
    return FiniteGroup::close_generators({rz, rx});
}

} // namespace

TEST_CASE("generator closure produces the expected orders") {
    CHECK(FiniteGroup::trivial(3).order() == 1);
    CHECK(FiniteGroup::close_generators({-Eigen::MatrixXd::Identity(2, 2)}).order() == 2);
    CHECK(FiniteGroup::close_generators({rot(2 * kPi / 3)}).order() == 3);
    CHECK(sign_even_r3().order() == 4);
    CHECK(cube_rotations().order() == 24);
}

TEST_CASE("closure rejects bad generators") {
    Eigen::Matrix2d m;
    m << 1, 1, 0, 1; // shear, not orthogonal
    CHECK_THROWS_AS(FiniteGroup::close_generators({m}), InputError);
    // An irrational rotation never closes; the cap must trip.
    CHECK_THROWS_AS(FiniteGroup::close_generators({rot(1.0)}, 64), InputError);
}

TEST_CASE("group elements are orthogonal and include the identity") {
    const auto g = cube_rotations();
    bool has_id = false;
    for (const auto& m : g.elements()) {
        CHECK((m.transpose() * m - Eigen::Matrix3d::Identity()).norm() < 1e-12);
        if ((m - Eigen::Matrix3d::Identity()).norm() < 1e-12) has_id = true;
    }
    CHECK(has_id);
}

TEST_CASE("fixed subspace") {
    CHECK(fixed_subspace(FiniteGroup::close_generators({rot(2 * kPi / 3)})).dim() == 0);
    CHECK(fixed_subspace(sign_even_r3()).dim() == 0);
    CHECK(fixed_subspace(cube_rotations()).dim() == 0);
    // Reflection across the x-axis fixes exactly that axis.
    Eigen::Matrix2d refl = Eigen::Vector2d(1, -1).asDiagonal();
    const auto fix = fixed_subspace(FiniteGroup::close_generators({refl}));
    CHECK(fix.dim() == 1);
    CHECK(fix.contains(UnitVector::axis(2, 0).coords(), 1e-12));
    CHECK(fixed_subspace(FiniteGroup::trivial(2)).dim() == 2);
}

TEST_CASE("irreducibility verdicts") {
    CHECK(is_irreducible(FiniteGroup::close_generators({rot(2 * kPi / 3)})));
    CHECK(is_irreducible(cube_rotations()));
    CHECK_FALSE(is_irreducible(sign_even_r3())); // coordinate axes are invariant
    CHECK_FALSE(is_irreducible(FiniteGroup::close_generators(
        {-Eigen::MatrixXd::Identity(2, 2)}))); // every line is invariant
}

TEST_CASE("orbits deduplicate") {
    const auto c3 = FiniteGroup::close_generators({rot(2 * kPi / 3)});
    CHECK(orbit(c3, UnitVector::axis(2, 0)).size() == 3);
    const auto g = cube_rotations();
    CHECK(orbit(g, UnitVector::axis(3, 0)).size() == 6); // signed axes
    const auto se = sign_even_r3();
    CHECK(orbit(se, UnitVector::axis(3, 2)).size() == 2);
    UnitVector generic((Eigen::VectorXd(3) << 0.3, 0.5, 0.9).finished());
    CHECK(orbit(se, generic).size() == 4);
}

TEST_CASE("invariant subspaces and closures") {
    const auto se = sign_even_r3();
    CHECK(is_invariant_subspace(se, Subspace::line(UnitVector::axis(3, 0))));
    const auto diag = Subspace::line(UnitVector((Eigen::VectorXd(3) << 1, 1, 0).finished()));
    CHECK_FALSE(is_invariant_subspace(se, diag));

    const auto cl = invariant_closure(se, {(Eigen::VectorXd(3) << 1, 1, 0).finished()});
    CHECK(cl.dim() == 2);
    CHECK(cl.contains(UnitVector::axis(3, 0).coords(), 1e-12));
    CHECK(cl.contains(UnitVector::axis(3, 1).coords(), 1e-12));
    CHECK(is_invariant_subspace(se, cl));

    // Under an irreducible action any nonzero vector generates everything.
    CHECK(invariant_closure(cube_rotations(),
                            {(Eigen::VectorXd(3) << 0.2, 0.3, 0.9).finished()})
              .dim() == 3);
}

TEST_CASE("restriction to an invariant subspace") {
    const auto se = sign_even_r3();
    const auto plane = Subspace::from_orthonormal(
        Eigen::MatrixXd::Identity(3, 3).leftCols(2), 3);
    const auto restricted = restrict_to(se, plane);
    CHECK(restricted.ambient() == 2);
    // diag(1,-1,-1), diag(-1,1,-1), diag(-1,-1,1) restrict to the full sign
    // group of the plane.
    CHECK(restricted.order() == 4);
    const auto diag = Subspace::line(UnitVector((Eigen::VectorXd(3) << 1, 1, 0).finished()));
    CHECK_THROWS_AS(restrict_to(se, diag), InputError);
}
