#pragma once

#include <string>
#include <vector>

#include "diskmap.hpp"
#include "geometry.hpp"

namespace dbar {

// Boundary geometry of the image curve f(e^{i theta}) on each rim node.
struct RimGeometry {
    std::vector<Vec> point;
    std::vector<Vec> nu;
    std::vector<Mat> hess;   // real Hessian of rho
    Vec grad_norm;
    Vec lambda;              // <f_r + J f_theta, nu>
    Vec residual;            // |f_r + J f_theta - lambda nu|
};

inline RimGeometry rim_geometry(const DiskMap& f, const DerivativeFields& d, const DefiningFunction& df,
                                const Tolerances& tol = {}) {
    const DiskGrid& g = f.grid();
    const int nt = g.n_theta();
    if (f.dim() != 2 * df.n()) throw InvalidArgument("map target dimension does not match domain");
    ComplexStructure cs(df.n());
    RimGeometry rim;
    rim.grad_norm.resize(nt);
    rim.lambda.resize(nt);
    rim.residual.resize(nt);
    int worst = -1;
    double worst_rho = 0.0;
    for (int m = 0; m < nt; ++m) {
        Vec p = f.values().row(g.rim_index(m)).transpose();
        double r = df.rho(p);
        if (std::abs(r) > std::abs(worst_rho)) {
            worst_rho = r;
            worst = m;
        }
        rim.point.push_back(std::move(p));
    }
    if (!(std::abs(worst_rho) < tol.boundary))
        throw ConstraintViolation("boundary image is off the hypersurface", worst, worst_rho);
    for (int m = 0; m < nt; ++m) {
        const Vec& p = rim.point[m];
        Vec grad = df.grad(p);
        double gn = grad.norm();
        if (!(gn >= tol.degenerate)) throw DegenerateBoundaryError("gradient of defining function vanishes on the boundary image");
        Vec nu = grad / gn;
        const int i = g.rim_index(m);
        Vec w = d.fr.row(i).transpose() + cs.apply(d.ftheta.row(i).transpose());
        double lam = w.dot(nu);
        rim.lambda(m) = lam;
        rim.residual(m) = (w - lam * nu).norm();
        rim.grad_norm(m) = gn;
        rim.nu.push_back(std::move(nu));
        rim.hess.push_back(df.hess(p));
    }
    return rim;
}

// Sup of |Delta f|. Without an evaluator only rings with r <= 0.95 are used.
inline double harmonic_residual(const DiskMap& f) {
    DerivativeFields d = derivatives(f, true);
    const DiskGrid& g = f.grid();
    double sup = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double r = g.r(i / g.n_theta());
        if (!f.analytic() && r > 0.95) continue;
        sup = std::max(sup, d.laplacian.row(i).norm());
    }
    return sup;
}

struct BoundaryCondition {
    double residual = 0.0;
    Vec lambda;
};

inline BoundaryCondition boundary_condition(const DiskMap& f, const DefiningFunction& df, const Tolerances& tol = {}) {
    RimGeometry rim = rim_geometry(f, derivatives(f), df, tol);
    return {rim.residual.maxCoeff(), rim.lambda};
}

inline double conformality(const DerivativeFields& d) {
    double sup = 0.0;
    for (int i = 0; i < d.fx.rows(); ++i) {
        const double cross = std::abs(d.fx.row(i).dot(d.fy.row(i)));
        const double diff = std::abs(d.fx.row(i).squaredNorm() - d.fy.row(i).squaredNorm());
        sup = std::max(sup, cross + diff);
    }
    return sup;
}

inline double conformality(const DiskMap& f) { return conformality(derivatives(f)); }

struct CriticalityReport {
    double harmonic_residual = 0.0;
    double boundary_residual = 0.0;
    Vec lambda;
    double lambda_min = 0.0;
    double conformality_defect = 0.0;
    bool critical = false;
    std::vector<std::string> warnings;
};

inline CriticalityReport is_critical(const DiskMap& f, const DefiningFunction& df, const Tolerances& tol = {}) {
    CriticalityReport rep;
    DerivativeFields d = derivatives(f);
    RimGeometry rim = rim_geometry(f, d, df, tol);
    rep.harmonic_residual = harmonic_residual(f);
    rep.boundary_residual = rim.residual.maxCoeff();
    rep.lambda = rim.lambda;
    rep.lambda_min = rim.lambda.minCoeff();
    rep.conformality_defect = conformality(d);
    rep.critical = rep.harmonic_residual < tol.harmonic && rep.boundary_residual < tol.free_boundary;
    if (rep.critical) {
        if (rep.lambda_min < -tol.lambda) rep.warnings.push_back("lambda is negative on the boundary");
        if (rep.conformality_defect > tol.conformal) rep.warnings.push_back("critical map is not weakly conformal");
    }
    return rep;
}

}  // namespace dbar
