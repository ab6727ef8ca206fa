#pragma once

#include <complex>

#include <Eigen/Dense>

#include "errors.hpp"

namespace dbar {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Standard complex structure on R^{2n} with coordinates (x_1..x_n, y_1..y_n),
// z_j = x_j + i y_j and J e_{x_j} = e_{y_j}.
class ComplexStructure {
public:
    explicit ComplexStructure(int n) : n_(n) {
        if (n < 1) throw InvalidArgument("complex dimension must be >= 1");
    }

    int n() const noexcept { return n_; }
    int real_dim() const noexcept { return 2 * n_; }

    template <typename Derived>
    Vec apply(const Eigen::MatrixBase<Derived>& v) const {
        Vec out(2 * n_);
        out.head(n_) = -v.tail(n_);
        out.tail(n_) = v.head(n_);
        return out;
    }

    Mat matrix() const {
        Mat j = Mat::Zero(2 * n_, 2 * n_);
        for (int k = 0; k < n_; ++k) {
            j(n_ + k, k) = 1.0;
            j(k, n_ + k) = -1.0;
        }
        return j;
    }

    // Complex coordinates of a real vector: xi_j = v_{x_j} + i v_{y_j}.
    template <typename Derived>
    CVec to_complex(const Eigen::MatrixBase<Derived>& v) const {
        CVec xi(n_);
        for (int k = 0; k < n_; ++k) xi(k) = cplx(v(k), v(n_ + k));
        return xi;
    }

    Vec from_complex(const CVec& xi) const {
        Vec v(2 * n_);
        for (int k = 0; k < n_; ++k) {
            v(k) = xi(k).real();
            v(n_ + k) = xi(k).imag();
        }
        return v;
    }

    // Complexified vector X - iJX in R^{2n} (x) C of a (1,0) field with real part X.
    template <typename Derived>
    CVec type10(const Eigen::MatrixBase<Derived>& x) const {
        Vec jx = apply(x);
        CVec u(2 * n_);
        for (int k = 0; k < 2 * n_; ++k) u(k) = cplx(x(k), -jx(k));
        return u;
    }

private:
    int n_;
};

// Hermitian product in complex coordinates, sum_j a_j conj(b_j).
inline cplx hermitian(const CVec& a, const CVec& b) { return (a.array() * b.conjugate().array()).sum(); }

}  // namespace dbar
