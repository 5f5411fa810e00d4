#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dualmink/measure.hpp"

using namespace dualmink;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix2d rot(double t) {
    Eigen::Matrix2d r;
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return r;
}

DiscreteMeasure axis_cross(int n) {
    std::vector<Atom> atoms;
    for (int i = 0; i < n; ++i) {
        atoms.push_back({UnitVector::axis(n, i), 1.0});
        atoms.push_back({UnitVector(-UnitVector::axis(n, i).coords()), 1.0});
    }
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

FiniteGroup antipodal(int n) {
    return FiniteGroup::close_generators({-Eigen::MatrixXd::Identity(n, n)});
}

FiniteGroup sign_even_r3() {
    Eigen::Matrix3d a = Eigen::Vector3d(1, -1, -1).asDiagonal();
    Eigen::Matrix3d b = Eigen::Vector3d(-1, 1, -1).asDiagonal();
    return FiniteGroup::close_generators({a, b});
}

} // namespace

TEST_CASE("measure construction validates") {
    CHECK_THROWS_AS(DiscreteMeasure::from_atoms({}), InputError);
    CHECK_THROWS_AS(DiscreteMeasure::from_atoms({{UnitVector::axis(2, 0), 0.0}}), InputError);
    CHECK_THROWS_AS(DiscreteMeasure::from_atoms({{UnitVector::axis(2, 0), -1.0}}), InputError);
    CHECK_THROWS_AS(DiscreteMeasure::from_atoms(
                        {{UnitVector::axis(2, 0), 1.0}, {UnitVector::axis(2, 0), 2.0}}),
                    InputError);
    const auto empty = DiscreteMeasure::empty(3);
    CHECK_FALSE(empty.valid());
    CHECK(empty.total_mass() == 0.0);

    const auto mu = axis_cross(2);
    CHECK(mu.size() == 4);
    CHECK(mu.total_mass() == doctest::Approx(4.0));
}

TEST_CASE("invariance detection") {
    const auto mu = axis_cross(2);
    CHECK(is_invariant_measure(mu, antipodal(2)));
    CHECK(is_invariant_measure(mu, FiniteGroup::trivial(2)));
    std::vector<Atom> atoms = mu.atoms();
    atoms[0].weight = 2.0;
    CHECK_FALSE(is_invariant_measure(DiscreteMeasure::from_atoms(atoms), antipodal(2)));
    CHECK_FALSE(is_invariant_measure(
        DiscreteMeasure::from_atoms({{UnitVector::axis(2, 0), 1.0}}), antipodal(2)));
}

TEST_CASE("symmetrization averages over the group") {
    const auto sym = symmetrize(
        DiscreteMeasure::from_atoms({{UnitVector::axis(2, 0), 2.0}}), antipodal(2));
    CHECK(sym.size() == 2);
    CHECK(sym.total_mass() == doctest::Approx(2.0));
    for (const auto& a : sym.atoms()) CHECK(a.weight == doctest::Approx(1.0));
    CHECK(is_invariant_measure(sym, antipodal(2)));

    // Already-invariant input is unchanged up to atom merging.
    const auto mu = axis_cross(2);
    const auto sym2 = symmetrize(mu, antipodal(2));
    CHECK(sym2.size() == 4);
    CHECK(sym2.total_mass() == doctest::Approx(4.0));
}

TEST_CASE("second moment of a C3 orbit is (3/2) I") {
    const auto c3 = FiniteGroup::close_generators({rot(2 * kPi / 3)});
    const auto sym = symmetrize(
        DiscreteMeasure::from_atoms({{UnitVector::axis(2, 0), 3.0}}), c3);
    CHECK(sym.size() == 3);
    const Eigen::MatrixXd m = second_moment(sym);
    CHECK((m - 1.5 * Eigen::Matrix2d::Identity()).norm() < 1e-12);
}

TEST_CASE("subspace mass counts atoms inside") {
    const auto mu = axis_cross(3);
    CHECK(subspace_mass(mu, Subspace::line(UnitVector::axis(3, 0))) == doctest::Approx(2.0));
    const auto plane = Subspace::from_orthonormal(
        Eigen::MatrixXd::Identity(3, 3).leftCols(2), 3);
    CHECK(subspace_mass(mu, plane) == doctest::Approx(4.0));
    CHECK(subspace_mass(mu, Subspace::zero(3)) == 0.0);
    CHECK(subspace_mass(mu, Subspace::full(3)) == doctest::Approx(6.0));
}

TEST_CASE("invariant candidate lattice") {
    // Cross-polytope atoms under the even sign group: three axis lines and
    // three coordinate planes.
    const auto cands = candidate_invariant_subspaces(axis_cross(3), sign_even_r3());
    CHECK(cands.size() == 6);
    int lines = 0, planes = 0;
    for (const auto& l : cands) (l.dim() == 1 ? lines : planes)++;
    CHECK(lines == 3);
    CHECK(planes == 3);

    // Two antipodal pairs under +-I: the two lines.
    CHECK(candidate_invariant_subspaces(axis_cross(2), antipodal(2)).size() == 2);

    // C3 acts without proper invariant subspaces.
    const auto c3 = FiniteGroup::close_generators({rot(2 * kPi / 3)});
    const auto tri = symmetrize(
        DiscreteMeasure::from_atoms({{UnitVector::axis(2, 1), 3.0}}), c3);
    CHECK(candidate_invariant_subspaces(tri, c3).empty());
}

TEST_CASE("classical candidate spans") {
    const auto spans = candidate_spans(axis_cross(3));
    CHECK(spans.size() == 6);
    // 63 singleton blocks exceed the mask width.
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    std::vector<Atom> atoms;
    for (int i = 0; i < 63; ++i) {
        Eigen::VectorXd v(3);
        for (int k = 0; k < 3; ++k) v[k] = nd(rng);
        atoms.push_back({UnitVector(v), 1.0});
    }
    CHECK_THROWS_AS(candidate_spans(DiscreteMeasure::from_atoms(std::move(atoms))),
                    InputError);
}

TEST_CASE("restriction re-expresses atoms in subspace coordinates") {
    const auto mu = axis_cross(3);
    const auto plane = Subspace::from_orthonormal(
        Eigen::MatrixXd::Identity(3, 3).leftCols(2), 3);
    const auto res = restrict_measure(mu, plane);
    CHECK(res.ambient() == 2);
    CHECK(res.size() == 4);
    CHECK(res.total_mass() == doctest::Approx(4.0));
    // Atom order is preserved: e1, -e1, e2, -e2.
    CHECK(res.atoms()[0].direction.coords()[0] == doctest::Approx(1.0));
    CHECK(res.atoms()[1].direction.coords()[0] == doctest::Approx(-1.0));
    CHECK(res.atoms()[2].direction.coords()[1] == doctest::Approx(1.0));

    const auto none = restrict_measure(
        mu, Subspace::line(UnitVector((Eigen::VectorXd(3) << 1, 1, 1).finished())));
    CHECK_FALSE(none.valid());
}

TEST_CASE("atom orbits partition the support") {
    const auto orbits = atom_orbits(axis_cross(2), antipodal(2));
    CHECK(orbits.size() == 2);
    CHECK(orbits[0].size() == 2);
    CHECK(orbits[1].size() == 2);
    const auto fine = atom_orbits(axis_cross(2), FiniteGroup::trivial(2));
    CHECK(fine.size() == 4);
}
