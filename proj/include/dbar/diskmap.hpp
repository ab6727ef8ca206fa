#pragma once

#include <cmath>
#include <functional>
#include <optional>

#include "grid.hpp"
#include "jet.hpp"

namespace dbar {

// Apply J row-wise to a (nodes x 2n) block.
inline Mat apply_j_rows(const Mat& f) {
    const int n = static_cast<int>(f.cols()) / 2;
    Mat out(f.rows(), f.cols());
    out.leftCols(n) = -f.rightCols(n);
    out.rightCols(n) = f.leftCols(n);
    return out;
}

// A map D -> R^dim sampled on a DiskGrid. When built from an analytic
// evaluator, derivatives come from the evaluator instead of the spectral
// differentiation of the samples.
class DiskMap {
public:
    DiskMap(DiskGrid grid, JetEvaluator eval, int dim)
        : grid_(std::move(grid)), dim_(dim), analytic_(std::move(eval)) {
        values_.resize(grid_.size(), dim_);
        for (int i = 0; i < grid_.size(); ++i) {
            Jet j = (*analytic_)(grid_.x(i), grid_.y(i));
            if (j.value.size() != dim_) throw InvalidArgument("evaluator returned wrong dimension");
            values_.row(i) = j.value.transpose();
        }
        check_finite();
    }

    DiskMap(DiskGrid grid, Mat values) : grid_(std::move(grid)), dim_(static_cast<int>(values.cols())), values_(std::move(values)) {
        if (values_.rows() != grid_.size()) throw InvalidArgument("sample count does not match grid");
        check_finite();
    }

    // Samples an arbitrary function of (r, theta); derivatives will be spectral.
    static DiskMap sample(const DiskGrid& grid, int dim, const std::function<Vec(double r, double theta)>& f) {
        Mat v(grid.size(), dim);
        for (int j = 0; j < grid.rings(); ++j)
            for (int m = 0; m < grid.n_theta(); ++m) v.row(grid.index(j, m)) = f(grid.r(j), grid.theta(m)).transpose();
        return DiskMap(grid, std::move(v));
    }

    const DiskGrid& grid() const noexcept { return grid_; }
    int dim() const noexcept { return dim_; }
    int n() const noexcept { return dim_ / 2; }
    const Mat& values() const noexcept { return values_; }
    bool analytic() const noexcept { return analytic_.has_value(); }
    const JetEvaluator& evaluator() const { return *analytic_; }

    Mat boundary_trace() const { return values_.bottomRows(grid_.n_theta()); }

    // Same map without its evaluator, forcing the spectral path.
    DiskMap sampled_only() const { return DiskMap(grid_, values_); }

    DiskMap resampled(const DiskGrid& g) const {
        if (!analytic_) throw InvalidArgument("resampling needs an analytic evaluator");
        return DiskMap(g, *analytic_, dim_);
    }

    // a*this + b*other
    DiskMap combine(double a, const DiskMap& other, double b) const {
        if (other.dim_ != dim_ || other.grid_.size() != grid_.size()) throw InvalidArgument("incompatible maps");
        if (analytic_ && other.analytic_) {
            auto f = *analytic_, g = *other.analytic_;
            return DiskMap(grid_, [f, g, a, b](double x, double y) {
                Jet p = f(x, y), q = g(x, y);
                Jet s;
                s.value = a * p.value + b * q.value;
                s.dx = a * p.dx + b * q.dx;
                s.dy = a * p.dy + b * q.dy;
                s.has_second = p.has_second && q.has_second;
                if (s.has_second) {
                    s.dxx = a * p.dxx + b * q.dxx;
                    s.dxy = a * p.dxy + b * q.dxy;
                    s.dyy = a * p.dyy + b * q.dyy;
                }
                return s;
            }, dim_);
        }
        return DiskMap(grid_, Mat(a * values_ + b * other.values_));
    }

private:
    void check_finite() const {
        if (!values_.allFinite()) throw EvaluationError("non-finite map sample", 0);
    }

    DiskGrid grid_;
    int dim_;
    Mat values_;
    std::optional<JetEvaluator> analytic_;
};

// Derivative fields on every grid node (rows), rim included. fz and fzbar are
// the real vectors (f_x -/+ J f_y)/2, i.e. the complex coordinates of the
// z- and zbar-derivatives.
struct DerivativeFields {
    Mat fx, fy, fr, ftheta, fz, fzbar;
    Mat laplacian;  // filled when requested
    bool has_laplacian = false;
};

namespace detail {

// Radial and angular spectral derivatives of sampled values.
inline void spectral_polar(const DiskGrid& g, const Mat& v, Mat& dr, Mat& dth) {
    const int nt = g.n_theta(), rings = g.rings(), dim = static_cast<int>(v.cols());
    dr.resize(v.rows(), dim);
    dth.resize(v.rows(), dim);
    const Mat& d_theta = g.angular_diff();
    for (int j = 0; j < rings; ++j) dth.middleRows(j * nt, nt) = d_theta * v.middleRows(j * nt, nt);
    const Mat& d_r = g.radial_diff();
    Mat col(rings, dim);
    for (int m = 0; m < nt; ++m) {
        for (int j = 0; j < rings; ++j) col.row(j) = v.row(g.index(j, m));
        Mat dc = d_r * col;
        for (int j = 0; j < rings; ++j) dr.row(g.index(j, m)) = dc.row(j);
    }
}

}  // namespace detail

inline DerivativeFields derivatives(const DiskMap& f, bool with_laplacian = false) {
    const DiskGrid& g = f.grid();
    const int rows = g.size(), dim = f.dim();
    DerivativeFields d;
    d.fx.resize(rows, dim);
    d.fy.resize(rows, dim);
    d.fr.resize(rows, dim);
    d.ftheta.resize(rows, dim);
    if (f.analytic()) {
        const auto& ev = f.evaluator();
        if (with_laplacian) d.laplacian.resize(rows, dim);
        for (int i = 0; i < rows; ++i) {
            const double x = g.x(i), y = g.y(i);
            Jet j = ev(x, y);
            d.fx.row(i) = j.dx.transpose();
            d.fy.row(i) = j.dy.transpose();
            const double r = std::hypot(x, y);
            d.fr.row(i) = ((x / r) * j.dx + (y / r) * j.dy).transpose();
            d.ftheta.row(i) = (-y * j.dx + x * j.dy).transpose();
            if (with_laplacian) {
                if (!j.has_second) throw InvalidArgument("evaluator lacks second derivatives");
                d.laplacian.row(i) = (j.dxx + j.dyy).transpose();
            }
        }
        d.has_laplacian = with_laplacian;
    } else {
        detail::spectral_polar(g, f.values(), d.fr, d.ftheta);
        for (int i = 0; i < rows; ++i) {
            const int j = i / g.n_theta(), m = i % g.n_theta();
            const double r = g.r(j), c = std::cos(g.theta(m)), s = std::sin(g.theta(m));
            d.fx.row(i) = c * d.fr.row(i) - (s / r) * d.ftheta.row(i);
            d.fy.row(i) = s * d.fr.row(i) + (c / r) * d.ftheta.row(i);
        }
        if (with_laplacian) {
            Mat frr, frt, ftr, ftt;
            detail::spectral_polar(g, d.fr, frr, frt);
            detail::spectral_polar(g, d.ftheta, ftr, ftt);
            d.laplacian.resize(rows, dim);
            for (int i = 0; i < rows; ++i) {
                const double r = g.r(i / g.n_theta());
                d.laplacian.row(i) = frr.row(i) + d.fr.row(i) / r + ftt.row(i) / (r * r);
            }
            d.has_laplacian = true;
        }
    }
    if (dim % 2 == 0) {
        Mat jfy = apply_j_rows(d.fy);
        d.fz = 0.5 * (d.fx - jfy);
        d.fzbar = 0.5 * (d.fx + jfy);
    }
    return d;
}

struct EnergyReport {
    double e_full = 0.0;  // E = (1/2) int |df|^2
    double e_del = 0.0;   // E'  = (1/4) int |f_x - J f_y|^2
    double e_dbar = 0.0;  // E'' = (1/4) int |f_x + J f_y|^2
    double kahler = 0.0;  // int <J f_x, f_y>
};

inline EnergyReport energies(const DiskMap& f, const DerivativeFields& d) {
    if (f.dim() % 2 != 0) throw InvalidArgument("energies need an even-dimensional target");
    const DiskGrid& g = f.grid();
    const Mat jfy = apply_j_rows(d.fy);
    const Mat jfx = apply_j_rows(d.fx);
    const Vec full = 0.5 * (d.fx.rowwise().squaredNorm() + d.fy.rowwise().squaredNorm());
    const Vec del = 0.25 * (d.fx - jfy).rowwise().squaredNorm();
    const Vec dbar = 0.25 * (d.fx + jfy).rowwise().squaredNorm();
    const Vec kah = (jfx.array() * d.fy.array()).rowwise().sum();
    EnergyReport e;
    e.e_full = g.integrate(full);
    e.e_del = g.integrate(del);
    e.e_dbar = g.integrate(dbar);
    e.kahler = g.integrate(kah);
    return e;
}

inline EnergyReport energies(const DiskMap& f) { return energies(f, derivatives(f)); }

// Largest pointwise dbar-energy density over the grid.
inline double max_dbar_density(const DerivativeFields& d) {
    return d.fzbar.rowwise().squaredNorm().maxCoeff();
}

// Drift of E' - E'' along f + t*eta, t uniform on [0,1]; eta must vanish on the rim.
inline double homotopy_invariance_check(const DiskMap& f, const DiskMap& eta, int steps) {
    if (steps < 2) throw InvalidArgument("homotopy check needs at least two steps");
    const double rim = eta.boundary_trace().cwiseAbs().maxCoeff();
    if (rim >= 1e-12) throw InvalidVariation("variation does not vanish on the boundary", rim);
    const EnergyReport e0 = energies(f);
    const double k0 = e0.e_del - e0.e_dbar;
    double drift = 0.0;
    for (int s = 1; s < steps; ++s) {
        const double t = static_cast<double>(s) / (steps - 1);
        const EnergyReport e = energies(f.combine(1.0, eta, t));
        drift = std::max(drift, std::abs((e.e_del - e.e_dbar) - k0));
    }
    return drift;
}

}  // namespace dbar
