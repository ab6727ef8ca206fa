#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "complex_structure.hpp"
#include "polynomial.hpp"
#include "tolerances.hpp"

namespace dbar {

// A domain {rho < 0} in C^n given by rho and its real derivatives.
class DefiningFunction {
public:
    enum class Provenance { analytic, finite_difference };

    using ScalarFn = std::function<double(const Vec&)>;
    using GradFn = std::function<Vec(const Vec&)>;
    using HessFn = std::function<Mat(const Vec&)>;

    DefiningFunction(int n, ScalarFn rho, GradFn grad, HessFn hess,
                     Provenance provenance = Provenance::analytic, double fd_scale = 1e-5)
        : n_(n), rho_(std::move(rho)), grad_(std::move(grad)), hess_(std::move(hess)),
          provenance_(provenance), fd_scale_(fd_scale) {
        if (n < 1) throw InvalidArgument("complex dimension must be >= 1");
        if (!rho_) throw InvalidArgument("defining function needs rho");
        if (provenance_ == Provenance::analytic && (!grad_ || !hess_))
            throw InvalidArgument("analytic provenance needs gradient and Hessian evaluators");
    }

    static DefiningFunction from_polynomial(int n, const RealPolynomial& p,
                                            Provenance provenance = Provenance::analytic) {
        if (p.vars() != 2 * n) throw InvalidArgument("defining polynomial must have 2n variables");
        return DefiningFunction(
            n, [p](const Vec& x) { return p.value(x); }, [p](const Vec& x) { return p.gradient(x); },
            provenance == Provenance::analytic ? HessFn([p](const Vec& x) { return p.hessian(x); }) : HessFn{},
            provenance);
    }

    int n() const noexcept { return n_; }
    Provenance provenance() const noexcept { return provenance_; }

    double step(const Vec& p) const { return fd_scale_ * std::max(1.0, p.norm()); }

    double rho(const Vec& p) const { return rho_(p); }

    Vec grad(const Vec& p) const {
        if (grad_) return grad_(p);
        const double h = step(p);
        Vec g(2 * n_);
        for (int i = 0; i < 2 * n_; ++i) {
            Vec a = p, b = p;
            a(i) += h;
            b(i) -= h;
            g(i) = (rho_(a) - rho_(b)) / (2 * h);
        }
        return g;
    }

    Mat hess(const Vec& p) const {
        Mat h;
        if (provenance_ == Provenance::analytic) {
            h = hess_(p);
        } else {
            // central differences of the gradient, then symmetrized
            const double s = step(p);
            h.resize(2 * n_, 2 * n_);
            for (int i = 0; i < 2 * n_; ++i) {
                Vec a = p, b = p;
                a(i) += s;
                b(i) -= s;
                h.col(i) = (grad(a) - grad(b)) / (2 * s);
            }
            h = 0.5 * (h + h.transpose()).eval();
        }
        for (int i = 0; i < h.rows(); ++i)
            for (int j = 0; j < h.cols(); ++j)
                if (!std::isfinite(h(i, j))) throw EvaluationError("non-finite Hessian entry", i);
        return h;
    }

    // The same domain described by c * rho, c > 0.
    DefiningFunction scaled(double c) const {
        if (!(c > 0.0)) throw InvalidArgument("rescaling factor must be positive");
        auto self = *this;
        return DefiningFunction(
            n_, [self, c](const Vec& x) { return c * self.rho(x); },
            [self, c](const Vec& x) { return Vec(c * self.grad(x)); },
            provenance_ == Provenance::analytic ? HessFn([self, c](const Vec& x) { return Mat(c * self.hess(x)); })
                                                : HessFn{},
            provenance_, fd_scale_);
    }

    DefiningFunction with_provenance(Provenance p) const {
        auto copy = *this;
        if (p == Provenance::analytic && !hess_) throw InvalidArgument("no analytic Hessian available");
        copy.provenance_ = p;
        return copy;
    }

private:
    int n_;
    ScalarFn rho_;
    GradFn grad_;
    HessFn hess_;
    Provenance provenance_;
    double fd_scale_;
};

// Matrix of d^2 rho / dz_j d zbar_k from the real Hessian.
inline CMat complex_hessian(const Mat& h, int n) {
    CMat l(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            l(j, k) = 0.25 * cplx(h(j, k) + h(n + j, n + k), h(j, n + k) - h(n + j, k));
    return l;
}

inline CMat complex_hessian(const DefiningFunction& df, const Vec& p) { return complex_hessian(df.hess(p), df.n()); }

struct BoundaryPointData {
    Vec point;
    Vec nu;           // unit outward normal
    double grad_norm; // |grad rho|
    CMat wp_basis;    // n x (n-1), orthonormal basis of the complex tangent space (complex coordinates)
    CMat levi;        // (n-1) x (n-1) Hermitian
};

inline BoundaryPointData boundary_data(const DefiningFunction& df, const Vec& p, const Tolerances& tol = {}) {
    const int n = df.n();
    const double r = df.rho(p);
    if (!(std::abs(r) < tol.boundary))
        throw ConstraintViolation("point is not on the boundary hypersurface", 0, r);
    const Vec g = df.grad(p);
    const double gn = g.norm();
    if (!(gn >= tol.degenerate)) throw DegenerateBoundaryError("gradient of defining function vanishes on the boundary");

    BoundaryPointData out;
    out.point = p;
    out.nu = g / gn;
    out.grad_norm = gn;

    // W_p = { w : sum_j (d rho / dz_j) w_j = 0 } is the Hermitian complement of
    // conj(d rho / dz), which in complex coordinates is grad rho / 2.
    ComplexStructure cs(n);
    CVec v = cs.to_complex(g) / 2.0;
    Eigen::HouseholderQR<CMat> qr{CMat(v)};
    CMat q = qr.householderQ() * CMat::Identity(n, n);
    out.wp_basis = q.rightCols(n - 1);

    const CMat l = complex_hessian(df, p);
    const CMat m = out.wp_basis.transpose() * l * out.wp_basis.conjugate();
    out.levi = (2.0 / gn) * m;
    return out;
}

inline Vec levi_eigenvalues(const CMat& levi) {
    if (levi.rows() == 0) return Vec();
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (levi + levi.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

enum class Convexity { strict, weak, non };

inline std::string to_string(Convexity c) {
    switch (c) {
        case Convexity::strict: return "strict";
        case Convexity::weak: return "weak";
        case Convexity::non: return "non";
    }
    return "?";
}

struct Classification {
    Convexity kind = Convexity::non;
    double margin = 0.0;      // min over samples of the k smallest eigenvalue sum
    int worst_sample = -1;
    std::vector<Vec> eigenvalues;  // per sample, ascending
};

// Sum of the k smallest eigenvalues, which is the minimum trace of the form
// over k-dimensional subspaces.
inline double smallest_trace(const Vec& ascending, int k) { return ascending.head(k).sum(); }

inline Classification classify_levi(const std::vector<CMat>& levis, int k, const Tolerances& tol = {}) {
    if (levis.empty()) throw InvalidArgument("classification needs at least one sample");
    Classification c;
    c.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < levis.size(); ++i) {
        const int dim = static_cast<int>(levis[i].rows());
        if (k < 1 || k > dim) throw InvalidArgument("k must satisfy 1 <= k <= n-1");
        Vec ev = levi_eigenvalues(levis[i]);
        double s = smallest_trace(ev, k);
        if (s < c.margin) {
            c.margin = s;
            c.worst_sample = static_cast<int>(i);
        }
        c.eigenvalues.push_back(std::move(ev));
    }
    if (c.margin > tol.pseudoconvex)
        c.kind = Convexity::strict;
    else if (std::abs(c.margin) <= tol.pseudoconvex)
        c.kind = Convexity::weak;
    else
        c.kind = Convexity::non;
    return c;
}

inline Classification classify_pseudoconvexity(const DefiningFunction& df, const std::vector<Vec>& samples, int k,
                                               const Tolerances& tol = {}) {
    if (k < 1 || k > df.n() - 1) throw InvalidArgument("k must satisfy 1 <= k <= n-1");
    if (samples.empty()) throw InvalidArgument("classification needs at least one sample");
    std::vector<CMat> levis;
    levis.reserve(samples.size());
    for (const auto& p : samples) levis.push_back(boundary_data(df, p, tol).levi);
    return classify_levi(levis, k, tol);
}

}  // namespace dbar
