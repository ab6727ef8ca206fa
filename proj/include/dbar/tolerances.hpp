#pragma once

namespace dbar {

struct Tolerances {
    double boundary = 1e-9;     // |rho| allowed at points declared on the boundary
    double degenerate = 1e-12;  // smallest admissible |grad rho|
    double pseudoconvex = 1e-9; // margin separating strict / weak / non
    double harmonic = 1e-7;
    double free_boundary = 1e-7;
    double lambda = 1e-8;       // lambda >= -tol for a genuine critical point
    double conformal = 1e-8;
    double admissible = 1e-8;
    double negative_rel = 1e-8; // relative to the largest |eigenvalue|
    double holomorphic = 1e-8;  // E'' density threshold for a vacuous certificate
    double index_value = 1e-10; // I(U,U) < -tol counts as negative
};

}  // namespace dbar
