#pragma once

#include "dualmink/body.hpp"

namespace dualmink {

// Symmetric positive-definite matrix A maximizing log det A subject to
// |A v_j| <= h_j at every normal; A maps the unit ball onto the largest
// origin-centered ellipsoid inscribed in the halfspace intersection.
Eigen::MatrixXd max_inscribed_shape_matrix(const BodySpec& b);

// Maximal origin-centered inscribed ellipsoid, decomposed into spectral blocks
// (eigenvalues grouped at relative tolerance tolerances().eigen_group). The
// origin-centered constraint is a restriction for bodies without symmetry; for
// a G-invariant body with Fix(G) = {0} it is the John ellipsoid itself.
BlockEllipsoid john_ellipsoid(const BodySpec& b);

// Same, but asserts the body is G-invariant, Fix(G) = {0}, and every spectral
// block is a G-invariant subspace; the shape matrix is averaged over G first.
BlockEllipsoid john_ellipsoid(const BodySpec& b, const FiniteGroup& g);

// E subset K (support inequality at every normal) and K subset nE (polygon
// vertices when n = 2, quadrature-ray boundary points otherwise), within tol.
bool john_sandwich_check(const BodySpec& b, const BlockEllipsoid& e, double tol = 1e-8);

} // namespace dualmink
