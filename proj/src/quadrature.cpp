#include "dualmink/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace dualmink {

double sphere_area(int n) {
    if (n < 1) throw InputError("sphere_area: dimension must be positive");
    return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

double ball_volume(int n) {
    if (n < 1) throw InputError("ball_volume: dimension must be positive");
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

SphereQuadrature SphereQuadrature::pair() {
    Eigen::MatrixXd nodes(1, 2);
    nodes << 1.0, -1.0;
    Eigen::VectorXd weights = Eigen::VectorXd::Ones(2);
    return SphereQuadrature(std::move(nodes), std::move(weights), "pair", 0);
}

SphereQuadrature SphereQuadrature::circle(int nodes, double offset) {
    if (nodes < 4) throw InputError("SphereQuadrature::circle: need at least 4 nodes");
    Eigen::MatrixXd pts(2, nodes);
    for (int i = 0; i < nodes; ++i) {
        const double theta = 2.0 * std::numbers::pi * (static_cast<double>(i) + offset) / nodes;
        pts(0, i) = std::cos(theta);
        pts(1, i) = std::sin(theta);
    }
    Eigen::VectorXd weights =
        Eigen::VectorXd::Constant(nodes, 2.0 * std::numbers::pi / nodes);
    return SphereQuadrature(std::move(pts), std::move(weights), "circle", 0);
}

SphereQuadrature SphereQuadrature::spiral(int nodes) {
    if (nodes < 8) throw InputError("SphereQuadrature::spiral: need at least 8 nodes");
    Eigen::MatrixXd pts(3, nodes);
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < nodes; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / nodes;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * i;
        pts(0, i) = r * std::cos(phi);
        pts(1, i) = r * std::sin(phi);
        pts(2, i) = z;
    }
    Eigen::VectorXd weights = Eigen::VectorXd::Constant(nodes, 4.0 * std::numbers::pi / nodes);
    return SphereQuadrature(std::move(pts), std::move(weights), "spiral", 0);
}

SphereQuadrature SphereQuadrature::monte_carlo(int n, int nodes, std::uint64_t seed) {
    if (n < 2) throw InputError("SphereQuadrature::monte_carlo: dimension must be >= 2");
    if (nodes < 16) throw InputError("SphereQuadrature::monte_carlo: need at least 16 nodes");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd pts(n, nodes);
    for (int i = 0; i < nodes; ++i) {
        double norm2 = 0.0;
        do {
            for (int k = 0; k < n; ++k) pts(k, i) = gauss(rng);
            norm2 = pts.col(i).squaredNorm();
        } while (norm2 < 1e-24);
        pts.col(i) /= std::sqrt(norm2);
    }
    Eigen::VectorXd weights = Eigen::VectorXd::Constant(nodes, sphere_area(n) / nodes);
    return SphereQuadrature(std::move(pts), std::move(weights), "montecarlo", seed);
}

SphereQuadrature SphereQuadrature::for_dimension(int n, int nodes, std::uint64_t seed) {
    if (n == 1) return pair();
    if (n == 2) return circle(nodes);
    if (n == 3) return spiral(nodes);
    return monte_carlo(n, nodes, seed);
}

SphereQuadrature SphereQuadrature::symmetrized(const FiniteGroup& g) const {
    if (g.ambient() != ambient()) throw InputError("symmetrized: dimension mismatch");
    const auto m = size();
    const auto order = static_cast<Eigen::Index>(g.order());
    Eigen::MatrixXd pts(ambient(), m * order);
    Eigen::VectorXd w(m * order);
    Eigen::Index col = 0;
    for (const auto& elem : g.elements()) {
        pts.middleCols(col, m) = elem * nodes_;
        w.segment(col, m) = weights_ / static_cast<double>(order);
        col += m;
    }
    return SphereQuadrature(std::move(pts), std::move(w), scheme_ + "+sym", seed_);
}

SphereQuadrature SphereQuadrature::independent_variant(std::uint64_t salt) const {
    const int doubled = static_cast<int>(2 * size());
    if (scheme_.rfind("circle", 0) == 0) {
        return circle(doubled, 0.25 + 0.37 * static_cast<double>(salt % 7) / 7.0);
    }
    if (scheme_.rfind("spiral", 0) == 0) {
        return spiral(doubled + 1);
    }
    if (scheme_.rfind("pair", 0) == 0) {
        return pair();
    }
    return monte_carlo(ambient(), doubled, seed_ * 6364136223846793005ULL + salt + 1442695040888963407ULL);
}

} // namespace dualmink
