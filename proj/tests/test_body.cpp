#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dualmink/body.hpp"

using namespace dualmink;

namespace {

constexpr double kPi = 3.14159265358979323846;

UnitVector dir2(double theta) {
    return UnitVector((Eigen::VectorXd(2) << std::cos(theta), std::sin(theta)).finished());
}

BodySpec unit_square() {
    std::vector<UnitVector> n = {UnitVector::axis(2, 0),
                                 UnitVector(-UnitVector::axis(2, 0).coords()),
                                 UnitVector::axis(2, 1),
                                 UnitVector(-UnitVector::axis(2, 1).coords())};
    return BodySpec(std::move(n), Eigen::VectorXd::Ones(4));
}

BodySpec pentagon() {
    std::vector<UnitVector> n;
    for (double t : {0.3, 1.7, 2.9, 4.1, 5.4}) n.push_back(dir2(t));
    return BodySpec(std::move(n), (Eigen::VectorXd(5) << 1.0, 0.9, 1.1, 1.0, 0.95).finished());
}

BodySpec regular_polygon(int k) {
    std::vector<UnitVector> n;
    for (int i = 0; i < k; ++i) n.push_back(dir2(2 * kPi * i / k));
    return BodySpec(std::move(n), Eigen::VectorXd::Ones(k));
}

} // namespace

TEST_CASE("construction enforces boundedness and positivity") {
    // Fewer than n+1 facets can never bound.
    CHECK_THROWS_AS(BodySpec({UnitVector::axis(2, 0),
                              UnitVector(-UnitVector::axis(2, 0).coords())},
                             Eigen::VectorXd::Ones(2)),
                    InputError);
    // Normals that do not positively span: a halfplane escapes.
    CHECK_THROWS_AS(BodySpec({UnitVector::axis(2, 0), UnitVector::axis(2, 1),
                              UnitVector(-UnitVector::axis(2, 0).coords())},
                             Eigen::VectorXd::Ones(3)),
                    InputError);
    // A proper triangle bounds.
    CHECK_NOTHROW(BodySpec({UnitVector::axis(2, 0), UnitVector::axis(2, 1),
                            UnitVector((Eigen::VectorXd(2) << -1, -1).finished())},
                           Eigen::VectorXd::Ones(3)));
    // Support values must be strictly positive.
    Eigen::VectorXd h = Eigen::VectorXd::Ones(4);
    h[2] = 0.0;
    std::vector<UnitVector> n = {UnitVector::axis(2, 0),
                                 UnitVector(-UnitVector::axis(2, 0).coords()),
                                 UnitVector::axis(2, 1),
                                 UnitVector(-UnitVector::axis(2, 1).coords())};
    CHECK_THROWS_AS(BodySpec(std::vector<UnitVector>(n), h), InputError);
}

TEST_CASE("radial function of the square") {
    const auto b = unit_square();
    CHECK(b.radial(UnitVector::axis(2, 0).coords()) == doctest::Approx(1.0));
    const Eigen::VectorXd diag = (Eigen::VectorXd(2) << 1, 1).finished() / std::sqrt(2.0);
    CHECK(b.radial(diag) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    // radial is (-1)-homogeneous in the argument length.
    CHECK(b.radial(2 * diag) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
    // Tie between facets 0 and 2 resolves to the smaller index.
    CHECK(b.argmin_facet(diag) == 0);
    CHECK(b.is_invariant_under(
        FiniteGroup::close_generators({-Eigen::MatrixXd::Identity(2, 2)})));
}

TEST_CASE("one-dimensional bodies work end to end") {
    std::vector<UnitVector> n = {UnitVector((Eigen::VectorXd(1) << 1).finished()),
                                 UnitVector((Eigen::VectorXd(1) << -1).finished())};
    const BodySpec seg(std::move(n), (Eigen::VectorXd(2) << 2, 3).finished());
    const auto quad = SphereQuadrature::pair();
    CHECK(dual_quermassintegral(seg, 1.0, quad) == doctest::Approx(5.0));
    const Eigen::VectorXd m = dual_curvature_masses(seg, 1.0, quad);
    CHECK(m[0] == doctest::Approx(2.0));
    CHECK(m[1] == doctest::Approx(3.0));
}

TEST_CASE("dual quermassintegral oracles") {
    // The integrand has kinks at facet transitions, so the equal-weight rule
    // converges at O(N^-2); 2e5 nodes leave ~1e-9 relative error.
    const auto quad = SphereQuadrature::circle(200000);
    const auto sq = unit_square();
    // q = n: the area.
    CHECK(dual_quermassintegral(sq, 2.0, quad) == doctest::Approx(4.0).epsilon(1e-7));
    // q = 1 on the square: 4 ln(1 + sqrt 2).
    CHECK(dual_quermassintegral(sq, 1.0, quad) ==
          doctest::Approx(4 * std::log(1 + std::sqrt(2.0))).epsilon(1e-7));
    // Near-ball: any q gives approximately the half circumference.
    CHECK(dual_quermassintegral(regular_polygon(256), 1.3, quad) ==
          doctest::Approx(kPi).epsilon(2e-3));
    // Rectangle area 4ab.
    std::vector<UnitVector> n = {UnitVector::axis(2, 0),
                                 UnitVector(-UnitVector::axis(2, 0).coords()),
                                 UnitVector::axis(2, 1),
                                 UnitVector(-UnitVector::axis(2, 1).coords())};
    const BodySpec rect(std::move(n), (Eigen::VectorXd(4) << 1.5, 1.5, 0.7, 0.7).finished());
    CHECK(dual_quermassintegral(rect, 2.0, quad) == doctest::Approx(4.2).epsilon(1e-7));
}

TEST_CASE("q-homogeneity under scaling") {
    const auto quad = SphereQuadrature::circle(5000);
    const auto b = pentagon();
    for (double q : {0.7, 2.0, 3.5}) {
        const double w = dual_quermassintegral(b, q, quad);
        for (double c : {0.5, 2.0, 10.0}) {
            const double wc = dual_quermassintegral(b.scaled(c), q, quad);
            CHECK(wc == doctest::Approx(std::pow(c, q) * w).epsilon(1e-12));
        }
    }
}

TEST_CASE("masses sum to the quermassintegral and match the planar oracle") {
    const auto quad = SphereQuadrature::circle(100000);
    const auto b = pentagon();
    for (double q : {0.5, 1.0, 2.0}) {
        const Eigen::VectorXd m = dual_curvature_masses(b, q, quad);
        CHECK(m.sum() ==
              doctest::Approx(dual_quermassintegral(b, q, quad)).epsilon(1e-12));
        CHECK(m.minCoeff() > 0.0);
    }
    const Eigen::VectorXd exact = cone_volume_masses_2d(b);
    const Eigen::VectorXd approx = dual_curvature_masses(b, 2.0, quad);
    for (Eigen::Index j = 0; j < exact.size(); ++j)
        CHECK(approx[j] == doctest::Approx(exact[j]).epsilon(1e-3));
}

TEST_CASE("batched masses agree with single-q calls") {
    const auto quad = SphereQuadrature::circle(3000);
    const auto b = pentagon();
    const auto multi = dual_curvature_masses_multi(b, {0.5, 1.7}, quad);
    REQUIRE(multi.size() == 2);
    CHECK((multi[0] - dual_curvature_masses(b, 0.5, quad)).norm() == 0.0);
    CHECK((multi[1] - dual_curvature_masses(b, 1.7, quad)).norm() == 0.0);
}

TEST_CASE("exact planar cone areas") {
    const auto sq = unit_square();
    const Eigen::VectorXd m = cone_volume_masses_2d(sq);
    CHECK(m.size() == 4);
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(m[j] == doctest::Approx(1.0).epsilon(1e-12));

    // An extra far-away normal is trimmed: zero exact mass, vertices unchanged.
    std::vector<UnitVector> n = {UnitVector::axis(2, 0),
                                 UnitVector(-UnitVector::axis(2, 0).coords()),
                                 UnitVector::axis(2, 1),
                                 UnitVector(-UnitVector::axis(2, 1).coords()), dir2(kPi / 4)};
    const BodySpec trimmed(std::move(n), (Eigen::VectorXd(5) << 1, 1, 1, 1, 2).finished());
    const Eigen::VectorXd mt = cone_volume_masses_2d(trimmed);
    CHECK(mt[4] == 0.0);
    CHECK(mt.sum() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(polygon_vertices(trimmed).size() == 4);
    CHECK(dual_curvature_measure(trimmed, 2.0, SphereQuadrature::circle(20000)).size() == 4);
}

TEST_CASE("polygon vertices are counterclockwise") {
    const auto verts = polygon_vertices(unit_square());
    REQUIRE(verts.size() == 4);
    double area2 = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& a = verts[i];
        const auto& b = verts[(i + 1) % 4];
        area2 += a.x() * b.y() - a.y() * b.x();
        CHECK(std::abs(a.x()) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(a.y()) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(area2 == doctest::Approx(8.0).epsilon(1e-12)); // positive: CCW
}

TEST_CASE("support domination implies radial domination") {
    const auto b = pentagon();
    Eigen::VectorXd h2 = b.support();
    h2[1] += 0.2;
    h2[3] += 0.05;
    const auto b2 = b.with_support(h2);
    for (int i = 0; i < 64; ++i) {
        const Eigen::VectorXd u = dir2(2 * kPi * i / 64).coords();
        CHECK(b.radial(u) <= b2.radial(u) + 1e-12);
    }
}

TEST_CASE("gaussian radial identity on the near-disk") {
    const auto quad = SphereQuadrature::circle(20000);
    const auto disk = regular_polygon(256);
    const auto rep = gaussian_identity_check(disk, 1.0, 200000, 20240906, quad);
    CHECK(rep.c0 == doctest::Approx(std::sqrt(kPi)).epsilon(1e-9));
    CHECK(rep.reference == doctest::Approx(std::pow(kPi, 1.5)).epsilon(2e-3));
    CHECK(rep.rel_err < 0.05);
    CHECK(rep.mc_std_error < 0.05 * rep.reference);

    CHECK_THROWS_AS(gaussian_identity_check(disk, 2.0, 1000, 1, quad), InputError);
    CHECK_THROWS_AS(gaussian_identity_check(disk, -0.5, 1000, 1, quad), InputError);
    CHECK_THROWS_AS(gaussian_identity_check(disk, 1.0, 10, 1, quad), InputError);
}

TEST_CASE("spherical partition picks the deepest block") {
    const std::vector<Subspace> blocks = {Subspace::line(UnitVector::axis(2, 0)),
                                          Subspace::line(UnitVector::axis(2, 1))};
    Eigen::MatrixXd u(2, 3);
    u.col(0) = UnitVector::axis(2, 0).coords();
    u.col(1) = UnitVector::axis(2, 1).coords();
    u.col(2) = (Eigen::VectorXd(2) << 1, 1).finished() / std::sqrt(2.0);
    const auto part = spherical_partition(blocks, 0.5, u);
    REQUIRE(part.size() == 3);
    CHECK(part[0] == 0);
    CHECK(part[1] == 1);
    CHECK(part[2] == 1); // both projections clear delta; the larger index wins
    CHECK_THROWS_AS(spherical_partition(blocks, 0.75, u), InputError); // delta >= 1/sqrt(2)
}

TEST_CASE("block ellipsoid geometry") {
    // Constructor sorts by semi-axis.
    const BlockEllipsoid e({Subspace::line(UnitVector::axis(2, 0)),
                            Subspace::line(UnitVector::axis(2, 1))},
                           (Eigen::VectorXd(2) << 2.0, 1.0).finished());
    CHECK(e.semi_axes()[0] == 1.0);
    CHECK(e.semi_axes()[1] == 2.0);
    CHECK(e.blocks()[0].contains(UnitVector::axis(2, 1).coords(), 1e-12));
    CHECK(e.support(UnitVector::axis(2, 0).coords()) == doctest::Approx(2.0));
    CHECK(e.radial(UnitVector::axis(2, 1).coords()) == doctest::Approx(1.0));
    CHECK(e.contains((Eigen::VectorXd(2) << 1.9, 0).finished()));
    CHECK_FALSE(e.contains((Eigen::VectorXd(2) << 0, 1.05).finished()));
    const Eigen::MatrixXd m = e.shape_matrix();
    CHECK(m(0, 0) == doctest::Approx(4.0));
    CHECK(m(1, 1) == doctest::Approx(1.0));
    CHECK(m(0, 1) == doctest::Approx(0.0));

    // Validation: overlap, gaps, and nonpositive axes all throw.
    CHECK_THROWS_AS(BlockEllipsoid({Subspace::line(UnitVector::axis(2, 0)),
                                    Subspace::line(dir2(kPi / 4))},
                                   (Eigen::VectorXd(2) << 1, 1).finished()),
                    InputError);
    CHECK_THROWS_AS(BlockEllipsoid({Subspace::line(UnitVector::axis(2, 0))},
                                   (Eigen::VectorXd(1) << 1).finished()),
                    InputError);
    CHECK_THROWS_AS(BlockEllipsoid({Subspace::full(2)},
                                   (Eigen::VectorXd(1) << -1).finished()),
                    InputError);
}

TEST_CASE("ellipsoid entropy and its upper bound") {
    const BlockEllipsoid e({Subspace::line(UnitVector::axis(2, 0)),
                            Subspace::line(UnitVector::axis(2, 1))},
                           (Eigen::VectorXd(2) << 1.0, std::exp(1.0)).finished());
    const auto mu = DiscreteMeasure::from_atoms(
        {{UnitVector::axis(2, 0), 1.0}, {UnitVector::axis(2, 1), 3.0}});
    // -(1/4)(1 log 1 + 3 log e) = -3/4.
    CHECK(ellipsoid_entropy(mu, e) == doctest::Approx(-0.75).epsilon(1e-12));

    const BlockEllipsoid thin({Subspace::line(UnitVector::axis(2, 0)),
                               Subspace::line(UnitVector::axis(2, 1))},
                              (Eigen::VectorXd(2) << 0.1, 1.0).finished());
    // Frozen closed form at q=1.5, delta0=0.3, t0=0.05.
    CHECK(entropy_upper_bound(thin, 1.5, 0.3, 0.05) ==
          doctest::Approx(3.317047458898876).epsilon(1e-12));

    const auto balanced = DiscreteMeasure::from_atoms(
        {{UnitVector::axis(2, 0), 1.0}, {UnitVector::axis(2, 1), 1.0}});
    CHECK(entropy_bound_applies(balanced, thin, 1.5, 0.3, 0.05));
    CHECK(ellipsoid_entropy(balanced, thin) <=
          entropy_upper_bound(thin, 1.5, 0.3, 0.05) + 1e-12);

    const auto lopsided = DiscreteMeasure::from_atoms(
        {{UnitVector::axis(2, 0), 9.0}, {UnitVector::axis(2, 1), 1.0}});
    CHECK_FALSE(entropy_bound_applies(lopsided, thin, 1.5, 0.3, 0.05));

    const auto sel = select_entropy_constants(balanced, thin, 1.5);
    REQUIRE(sel.has_value());
    CHECK(entropy_bound_applies(balanced, thin, 1.5, sel->delta0, sel->t0));
    CHECK(ellipsoid_entropy(balanced, thin) <=
          entropy_upper_bound(thin, 1.5, sel->delta0, sel->t0) + 1e-12);
    CHECK_FALSE(select_entropy_constants(lopsided, thin, 1.5).has_value());
}

TEST_CASE("barrier scaling smoke test") {
    // One facet block shrinks; the exponent q - k is near its sharp edge k + d,
    // where the power law is tight enough to hold on the whole grid.
    BarrierParams p;
    p.k = 1;
    p.d = 2;
    p.m = 0;
    p.q = 2.96;
    const auto rep =
        barrier_bound_check(BarrierKind::BlockBarrier, p, SphereQuadrature::spiral(20011));
    CHECK(rep.b_grid.size() == 4);
    CHECK(rep.ratios.size() == 4);
    CHECK(rep.bounded);
    CHECK(rep.spread < 0.08); // measured 0.057, stable under 10x node refinement

    BarrierParams bad;
    bad.d = 2;
    bad.m = 1;
    bad.alpha = 2.5; // alpha must stay below d
    CHECK_THROWS_AS(
        barrier_bound_check(BarrierKind::BallBlock, bad, SphereQuadrature::spiral(20011)),
        InputError);
    // Quadrature dimension must match d + m.
    BarrierParams ok;
    ok.d = 2;
    ok.m = 1;
    ok.alpha = 1.0;
    CHECK_THROWS_AS(
        barrier_bound_check(BarrierKind::BallBlock, ok, SphereQuadrature::circle(100)),
        InputError);
}
