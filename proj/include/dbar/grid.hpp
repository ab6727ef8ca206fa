#pragma once

#include <cmath>
#include <vector>

#include "complex_structure.hpp"

namespace dbar {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, Vec& nodes, Vec& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes(i) = -x;
        nodes(n - 1 - i) = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights(i) = weights(n - 1 - i) = w;
    }
}

// Barycentric differentiation matrix for arbitrary distinct nodes.
inline Mat barycentric_diff_matrix(const Vec& x) {
    const int m = static_cast<int>(x.size());
    Vec w(m);
    for (int j = 0; j < m; ++j) {
        double p = 1.0;
        for (int k = 0; k < m; ++k)
            if (k != j) p *= 4.0 * (x(j) - x(k));  // capacity scaling for an interval of length ~1
        w(j) = 1.0 / p;
    }
    Mat d = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        double diag = 0.0;
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            d(i, j) = (w(j) / w(i)) / (x(i) - x(j));
            diag -= d(i, j);
        }
        d(i, i) = diag;
    }
    return d;
}

// Periodic spectral differentiation on m equispaced points (m even).
inline Mat fourier_diff_matrix(int m) {
    Mat d = Mat::Zero(m, m);
    const double h = 2.0 * M_PI / m;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) {
                int k = i - j;
                double sign = (k % 2 == 0) ? 1.0 : -1.0;
                d(i, j) = 0.5 * sign / std::tan(k * h / 2.0);
            }
    return d;
}

// Polar tensor grid on the unit disk. Rings 0..n_r-1 are Gauss-Legendre nodes
// in (0,1) carrying the area quadrature (measure r dr dtheta); ring n_r is the
// rim r = 1, used for boundary traces and radial differentiation only.
class DiskGrid {
public:
    DiskGrid(int n_r = 32, int n_theta = 64) : n_r_(n_r), n_theta_(n_theta) {
        if (n_r < 4 || n_theta < 8) throw ResolutionError("grid needs n_r >= 4 and n_theta >= 8");
        if (n_theta % 2 != 0) throw ResolutionError("n_theta must be even");
        Vec t, w;
        gauss_legendre(n_r, t, w);
        radii_.resize(n_r + 1);
        area_weights_.resize(n_r);
        for (int j = 0; j < n_r; ++j) {
            radii_(j) = 0.5 * (t(j) + 1.0);
            area_weights_(j) = 0.5 * w(j) * radii_(j) * (2.0 * M_PI / n_theta);
        }
        radii_(n_r) = 1.0;
        thetas_.resize(n_theta);
        for (int m = 0; m < n_theta; ++m) thetas_(m) = 2.0 * M_PI * m / n_theta;
        d_r_ = barycentric_diff_matrix(radii_);
        d_theta_ = fourier_diff_matrix(n_theta);
    }

    int n_r() const noexcept { return n_r_; }
    int n_theta() const noexcept { return n_theta_; }
    int rings() const noexcept { return n_r_ + 1; }
    int size() const noexcept { return (n_r_ + 1) * n_theta_; }
    int interior_size() const noexcept { return n_r_ * n_theta_; }

    int index(int ring, int m) const noexcept { return ring * n_theta_ + m; }
    int rim_index(int m) const noexcept { return n_r_ * n_theta_ + m; }

    double r(int ring) const { return radii_(ring); }
    double theta(int m) const { return thetas_(m); }
    double x(int node) const { return radii_(node / n_theta_) * std::cos(thetas_(node % n_theta_)); }
    double y(int node) const { return radii_(node / n_theta_) * std::sin(thetas_(node % n_theta_)); }

    const Vec& radii() const noexcept { return radii_; }
    const Vec& thetas() const noexcept { return thetas_; }
    // Area weight of interior node (ring j, any m); zero on the rim.
    double area_weight(int ring) const { return ring < n_r_ ? area_weights_(ring) : 0.0; }
    double rim_weight() const { return 2.0 * M_PI / n_theta_; }

    const Mat& radial_diff() const noexcept { return d_r_; }
    const Mat& angular_diff() const noexcept { return d_theta_; }

    DiskGrid doubled() const { return DiskGrid(2 * n_r_, 2 * n_theta_); }

    // Integral over D of a per-node density (fixed summation order).
    double integrate(const Vec& density) const {
        double s = 0.0;
        for (int j = 0; j < n_r_; ++j) {
            double ring = 0.0;
            for (int m = 0; m < n_theta_; ++m) ring += density(index(j, m));
            s += area_weights_(j) * ring;
        }
        return s;
    }

    // Integral over the unit circle (d theta) of a per-rim-node density.
    double integrate_rim(const Vec& rim_density) const {
        double s = 0.0;
        for (int m = 0; m < n_theta_; ++m) s += rim_density(m);
        return s * rim_weight();
    }

private:
    int n_r_;
    int n_theta_;
    Vec radii_;
    Vec thetas_;
    Vec area_weights_;
    Mat d_r_;
    Mat d_theta_;
};

}  // namespace dbar
