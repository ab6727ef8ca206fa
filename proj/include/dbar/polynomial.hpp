#pragma once

#include <cmath>
#include <vector>

#include "jet.hpp"

namespace dbar {

// Polynomial in d real variables, sum of coeff * prod_i x_i^{e_i}.
class RealPolynomial {
public:
    struct Term {
        std::vector<int> exponents;
        double coeff = 0.0;
    };

    RealPolynomial() = default;
    explicit RealPolynomial(int vars) : vars_(vars) {}
    RealPolynomial(int vars, std::vector<Term> terms) : vars_(vars), terms_(std::move(terms)) {
        for (const auto& t : terms_) {
            if (static_cast<int>(t.exponents.size()) != vars_)
                throw InvalidArgument("polynomial term has wrong number of exponents");
            for (int e : t.exponents)
                if (e < 0) throw InvalidArgument("negative exponent in polynomial term");
            if (!std::isfinite(t.coeff)) throw InvalidArgument("non-finite polynomial coefficient");
        }
    }

    int vars() const noexcept { return vars_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    void add(std::vector<int> exponents, double coeff) {
        terms_.push_back({std::move(exponents), coeff});
    }

    double value(const Vec& p) const {
        double s = 0.0;
        for (const auto& t : terms_) s += t.coeff * monomial(p, t.exponents, -1, -1);
        return s;
    }

    Vec gradient(const Vec& p) const {
        Vec g = Vec::Zero(vars_);
        for (const auto& t : terms_)
            for (int i = 0; i < vars_; ++i)
                if (t.exponents[i] > 0) g(i) += t.coeff * t.exponents[i] * monomial(p, t.exponents, i, -1);
        return g;
    }

    Mat hessian(const Vec& p) const {
        Mat h = Mat::Zero(vars_, vars_);
        for (const auto& t : terms_) {
            for (int i = 0; i < vars_; ++i) {
                for (int j = i; j < vars_; ++j) {
                    double factor;
                    if (i == j) {
                        if (t.exponents[i] < 2) continue;
                        factor = t.exponents[i] * (t.exponents[i] - 1);
                    } else {
                        if (t.exponents[i] < 1 || t.exponents[j] < 1) continue;
                        factor = t.exponents[i] * t.exponents[j];
                    }
                    double v = t.coeff * factor * monomial(p, t.exponents, i, j);
                    h(i, j) += v;
                    if (i != j) h(j, i) += v;
                }
            }
        }
        return h;
    }

private:
    // Monomial with exponent of variable i (and j) lowered by one.
    static double monomial(const Vec& p, const std::vector<int>& e, int i, int j) {
        double m = 1.0;
        for (int k = 0; k < static_cast<int>(e.size()); ++k) {
            int ek = e[k] - (k == i) - (k == j);
            for (int q = 0; q < ek; ++q) m *= p(k);
        }
        return m;
    }

    int vars_ = 0;
    std::vector<Term> terms_;
};

// Complex function of the disk variable written as sum c * z^alpha * zbar^beta,
// where z^alpha zbar^beta means r^{alpha+beta} e^{i(alpha-beta)theta}. Integer
// exponents give ordinary polynomials in z and zbar; half-integer pairs cover
// polar terms r^p e^{ik theta}.
class ZPolynomial {
public:
    struct Term {
        double alpha = 0.0;
        double beta = 0.0;
        cplx coeff{0.0, 0.0};
    };

    struct Derivs {
        cplx value, dx, dy, dxx, dxy, dyy;
        cplx dz, dzbar;
    };

    ZPolynomial() = default;
    explicit ZPolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {
        for (const auto& t : terms_) {
            if (t.alpha < 0.0 || t.beta < 0.0) throw InvalidArgument("negative exponent in z-polynomial");
            if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
                throw InvalidArgument("non-finite z-polynomial coefficient");
        }
    }

    static ZPolynomial monomial(int a, int b, cplx c) { return ZPolynomial({{double(a), double(b), c}}); }

    // c * r^p * e^{ik theta}
    static Term polar_term(double p, int k, cplx c) {
        if (p < std::abs(k)) throw InvalidArgument("polar term needs r-power >= |frequency|");
        return {(p + k) / 2.0, (p - k) / 2.0, c};
    }

    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

    void add(double alpha, double beta, cplx c) { terms_.push_back({alpha, beta, c}); }

    ZPolynomial operator*(const ZPolynomial& o) const {
        ZPolynomial out;
        for (const auto& a : terms_)
            for (const auto& b : o.terms_) out.terms_.push_back({a.alpha + b.alpha, a.beta + b.beta, a.coeff * b.coeff});
        return out;
    }

    ZPolynomial operator+(const ZPolynomial& o) const {
        ZPolynomial out = *this;
        out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
        return out;
    }

    ZPolynomial scaled(cplx s) const {
        ZPolynomial out = *this;
        for (auto& t : out.terms_) t.coeff *= s;
        return out;
    }

    // f(e^{i angle} z)
    ZPolynomial rotated(double angle) const {
        ZPolynomial out = *this;
        for (auto& t : out.terms_) t.coeff *= std::polar(1.0, (t.alpha - t.beta) * angle);
        return out;
    }

    cplx value(double x, double y) const { return derivs(x, y).value; }

    Derivs derivs(double x, double y) const {
        Derivs d{};
        const double r = std::hypot(x, y);
        const double th = std::atan2(y, x);
        for (const auto& t : terms_) {
            const cplx c = t.coeff;
            const double a = t.alpha, b = t.beta;
            auto mono = [&](double da, double db) -> cplx {
                double p = (a - da) + (b - db);
                double k = (a - da) - (b - db);
                if (p == 0.0) return std::polar(1.0, k * th);
                return std::pow(r, p) * std::polar(1.0, k * th);
            };
            d.value += c * mono(0, 0);
            cplx wz = a != 0.0 ? c * a * mono(1, 0) : cplx{};
            cplx wzb = b != 0.0 ? c * b * mono(0, 1) : cplx{};
            cplx wzz = (a != 0.0 && a != 1.0) ? c * a * (a - 1) * mono(2, 0) : cplx{};
            cplx wzzb = (a != 0.0 && b != 0.0) ? c * a * b * mono(1, 1) : cplx{};
            cplx wzbzb = (b != 0.0 && b != 1.0) ? c * b * (b - 1) * mono(0, 2) : cplx{};
            const cplx I(0, 1);
            d.dz += wz;
            d.dzbar += wzb;
            d.dx += wz + wzb;
            d.dy += I * (wz - wzb);
            d.dxx += wzz + 2.0 * wzzb + wzbzb;
            d.dyy += -wzz + 2.0 * wzzb - wzbzb;
            d.dxy += I * (wzz - wzbzb);
        }
        return d;
    }

    // Largest |value| on the unit circle sampled at m points.
    double rim_sup(int m = 256) const {
        double s = 0.0;
        for (int k = 0; k < m; ++k) {
            double th = 2.0 * M_PI * k / m;
            s = std::max(s, std::abs(value(std::cos(th), std::sin(th))));
        }
        return s;
    }

private:
    std::vector<Term> terms_;
};

// Real scalar function Re(sum c z^alpha zbar^beta).
struct ScalarJet {
    double value, dx, dy, dr, dtheta;
};

class ScalarPolynomial {
public:
    ScalarPolynomial() = default;
    explicit ScalarPolynomial(ZPolynomial p) : p_(std::move(p)) {}

    const ZPolynomial& poly() const noexcept { return p_; }

    ScalarJet jet(double x, double y) const {
        auto d = p_.derivs(x, y);
        ScalarJet s{};
        s.value = d.value.real();
        s.dx = d.dx.real();
        s.dy = d.dy.real();
        s.dr = 0.0;
        double r = std::hypot(x, y);
        if (r > 0.0) s.dr = (x * s.dx + y * s.dy) / r;
        s.dtheta = -y * s.dx + x * s.dy;
        return s;
    }

    double value(double x, double y) const { return p_.value(x, y).real(); }

    double rim_sup(int m = 256) const {
        double s = 0.0;
        for (int k = 0; k < m; ++k) {
            double th = 2.0 * M_PI * k / m;
            s = std::max(s, std::abs(value(std::cos(th), std::sin(th))));
        }
        return s;
    }

private:
    ZPolynomial p_;
};

// Map D -> C^n = R^{2n} whose complex coordinates are z-polynomials.
class ComplexPolyMap {
public:
    ComplexPolyMap() = default;
    explicit ComplexPolyMap(std::vector<ZPolynomial> coords) : coords_(std::move(coords)) {
        if (coords_.empty()) throw InvalidArgument("map needs at least one complex coordinate");
    }

    int n() const noexcept { return static_cast<int>(coords_.size()); }
    const std::vector<ZPolynomial>& coords() const noexcept { return coords_; }

    ComplexPolyMap rotated(double angle) const {
        std::vector<ZPolynomial> c;
        for (const auto& p : coords_) c.push_back(p.rotated(angle));
        return ComplexPolyMap(std::move(c));
    }

    ComplexPolyMap operator+(const ComplexPolyMap& o) const {
        if (o.n() != n()) throw InvalidArgument("dimension mismatch adding maps");
        std::vector<ZPolynomial> c;
        for (int j = 0; j < n(); ++j) c.push_back(coords_[j] + o.coords_[j]);
        return ComplexPolyMap(std::move(c));
    }

    ComplexPolyMap scaled(double s) const {
        std::vector<ZPolynomial> c;
        for (const auto& p : coords_) c.push_back(p.scaled(s));
        return ComplexPolyMap(std::move(c));
    }

    Jet jet(double x, double y) const {
        const int n = this->n();
        Jet j = Jet::zero(2 * n);
        for (int k = 0; k < n; ++k) {
            auto d = coords_[k].derivs(x, y);
            auto put = [&](Vec& v, cplx w) {
                v(k) = w.real();
                v(n + k) = w.imag();
            };
            put(j.value, d.value);
            put(j.dx, d.dx);
            put(j.dy, d.dy);
            put(j.dxx, d.dxx);
            put(j.dxy, d.dxy);
            put(j.dyy, d.dyy);
        }
        return j;
    }

    JetEvaluator evaluator() const {
        return [self = *this](double x, double y) { return self.jet(x, y); };
    }

private:
    std::vector<ZPolynomial> coords_;
};

}  // namespace dbar
