#pragma once

#include <random>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "secondvar.hpp"

namespace dbar {

// Deformations of f4(x, y) = (x, -y, 0, 0) in the weak domain
// |z1 + i z2| < 1 driven by four scalar functions. With
// P = (1 + t sigma) e^{-i t phi} z the family is
//   F_t = ((Re P + x)/2 + t psi, (-Im P - y)/2 + t eta, (-Im P + y)/2 - t eta, (-Re P + x)/2 + t psi),
// so rho(F_t) = |P|^2 - 1 and F_t stays on the boundary when sigma vanishes on the circle.
struct F4Family {
    ScalarPolynomial sigma, phi, psi, eta;

    void validate(double tol = 1e-10) const {
        const double s = sigma.rim_sup();
        if (!(s < tol)) throw InvalidVariation("sigma must vanish on the boundary circle", s);
    }

    JetEvaluator evaluator(double t) const {
        return [self = *this, t](double x, double y) {
            const cplx I(0, 1), z(x, y);
            ScalarJet s = self.sigma.jet(x, y), p = self.phi.jet(x, y);
            ScalarJet ps = self.psi.jet(x, y), et = self.eta.jet(x, y);
            const double a = 1.0 + t * s.value;
            const cplx rot = std::exp(-I * t * p.value);
            const cplx P = a * rot * z;
            const cplx Px = (t * s.dx - I * t * p.dx * a) * rot * z + a * rot;
            const cplx Py = (t * s.dy - I * t * p.dy * a) * rot * z + a * rot * I;
            auto pack = [&](cplx q, double ex, double ey, double u, double v) {
                Vec out(4);
                out << (q.real() + ex) / 2 + t * u, (-q.imag() - ey) / 2 + t * v, (-q.imag() + ey) / 2 - t * v,
                    (-q.real() + ex) / 2 + t * u;
                return out;
            };
            Jet j;
            j.value = pack(P, x, y, ps.value, et.value);
            j.dx = pack(Px, 1.0, 0.0, ps.dx, et.dx);
            j.dy = pack(Py, 0.0, 1.0, ps.dy, et.dy);
            return j;
        };
    }

    DiskMap map(const DiskGrid& g, double t) const { return DiskMap(g, evaluator(t), 4); }

    // dF/dt at t = 0.
    VariationField variation(const DiskGrid& g) const {
        JetEvaluator ev = [self = *this](double x, double y) {
            ScalarJet s = self.sigma.jet(x, y), p = self.phi.jet(x, y);
            ScalarJet ps = self.psi.jet(x, y), et = self.eta.jet(x, y);
            Vec a(4), b(4), c(4), d(4);
            a << x, -y, -y, -x;
            b << y, x, x, -y;
            c << 1, 0, 0, 1;
            d << 0, 1, -1, 0;
            Vec ax(4), ay(4), bx(4), by(4);
            ax << 1, 0, 0, -1;
            ay << 0, -1, -1, 0;
            bx << 0, 1, 1, 0;
            by << 1, 0, 0, -1;
            Jet j;
            j.value = 0.5 * s.value * a + 0.5 * p.value * b + ps.value * c + et.value * d;
            j.dx = 0.5 * (s.dx * a + s.value * ax) + 0.5 * (p.dx * b + p.value * bx) + ps.dx * c + et.dx * d;
            j.dy = 0.5 * (s.dy * a + s.value * ay) + 0.5 * (p.dy * b + p.value * by) + ps.dy * c + et.dy * d;
            return j;
        };
        return VariationField(DiskMap(g, ev, 4), "f4-family");
    }

    // d^2/dt^2 of int |F_x + J F_y|^2 at t = 0, before and after integrating
    // the sigma * phi_theta term by parts.
    double pre_ibp(const DiskGrid& g) const { return integrate(g, false); }
    double post_ibp(const DiskGrid& g) const { return integrate(g, true); }

private:
    double integrate(const DiskGrid& g, bool post) const {
        Vec dens = Vec::Zero(g.size());
        for (int i = 0; i < g.interior_size(); ++i) {
            const double x = g.x(i), y = g.y(i), r = std::hypot(x, y);
            ScalarJet s = sigma.jet(x, y), p = phi.jet(x, y), ps = psi.jet(x, y), et = eta.jet(x, y);
            const double tail = 4.0 * std::pow(ps.dx + et.dy, 2) + 4.0 * std::pow(et.dx - ps.dy, 2);
            if (post)
                dens(i) = std::pow(r * p.dr - s.dtheta, 2) + std::pow(r * s.dr + p.dtheta, 2) + tail;
            else
                dens(i) = -8.0 * s.value * p.dtheta + std::pow(r * p.dr + s.dtheta, 2) +
                          std::pow(r * s.dr - p.dtheta, 2) + tail;
        }
        return g.integrate(dens);
    }
};

// Re of a random z-polynomial of total degree <= deg with coefficients in [-1,1]^2.
inline ScalarPolynomial random_scalar(std::mt19937_64& rng, int deg) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ZPolynomial p;
    for (int d = 0; d <= deg; ++d)
        for (int b = 0; b <= d; ++b) {
            const double re = u(rng), im = u(rng);
            p.add(d - b, b, cplx(re, im));
        }
    return ScalarPolynomial(p);
}

inline F4Family random_f4_family(std::mt19937_64& rng, int deg = 3) {
    F4Family fam;
    ZPolynomial cut({{0, 0, 1.0}, {1, 1, -1.0}});
    fam.sigma = ScalarPolynomial(cut * random_scalar(rng, deg - 1).poly());
    fam.phi = random_scalar(rng, deg);
    fam.psi = random_scalar(rng, deg);
    fam.eta = random_scalar(rng, deg);
    return fam;
}

struct F4Comparison {
    std::vector<double> h;
    std::vector<double> fd;  // d^2/dt^2 int |F_x + J F_y|^2, one per step
    double pre_ibp = 0.0;
    double post_ibp = 0.0;
    double index_form = 0.0;  // 4 I(V, V)
    double max_relative_difference = 0.0;
    std::vector<std::pair<std::string, double>> differences;
};

inline double relative_difference(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 1e-12 ? std::abs(a - b) / scale : std::abs(a - b);
}

inline F4Comparison f4_family_experiment(const F4Family& fam, const std::vector<double>& hs, const DiskGrid& g,
                                         const Tolerances& tol = {}) {
    fam.validate();
    if (hs.empty()) throw InvalidArgument("f4 experiment needs at least one step");
    const DefiningFunction df = catalog::domain("weak_rank_one");
    const DiskMap f4 = fam.map(g, 0.0);
    F4Comparison out;
    out.h = hs;
    for (double h : hs)
        out.fd.push_back(fd_second_variation([&](double t) { return fam.map(g, t); }, h, &df, tol).integral_value);
    out.pre_ibp = fam.pre_ibp(g);
    out.post_ibp = fam.post_ibp(g);
    out.index_form = 4.0 * IndexForm(f4, df, tol).real(fam.variation(g));
    const std::pair<std::string, double> vals[] = {
        {"fd", out.fd.front()}, {"pre_ibp", out.pre_ibp}, {"post_ibp", out.post_ibp}, {"index_form", out.index_form}};
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            const double d = relative_difference(vals[a].second, vals[b].second);
            out.differences.emplace_back(vals[a].first + "/" + vals[b].first, d);
            out.max_relative_difference = std::max(out.max_relative_difference, d);
        }
    return out;
}

}  // namespace dbar
