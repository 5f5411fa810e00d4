#pragma once

namespace dualmink {

// Global numeric tolerances. Defaults are calibrated for unit-scale data
// (unit directions, unit-normalized group elements); override via tolerances().
struct Tolerances {
    double algebra = 1e-10;      // algebraic identities (orthogonality, closure)
    double subspace_eq = 1e-8;   // subspace equality via projector distance
    double group_dedup = 1e-8;   // entrywise matrix identity inside a group
    double angular = 1e-9;       // atom/direction identity (chord distance)
    double membership = 1e-9;    // point-in-subspace distance
    double equality_case = 1e-9; // relative equality detection in condition checks
    double eigen_group = 1e-7;   // relative semi-axis grouping into ellipsoid blocks
    double weight_drop = 1e-14;  // relative weight below which merged atoms are dropped
};

Tolerances& tolerances();

} // namespace dualmink
