#pragma once

#include <string>
#include <vector>

#include "geometry.hpp"
#include "polynomial.hpp"

namespace dbar::catalog {

namespace detail {

inline std::vector<int> exps(int vars, std::initializer_list<std::pair<int, int>> powers) {
    std::vector<int> e(vars, 0);
    for (auto [i, p] : powers) e[i] += p;
    return e;
}

}  // namespace detail

// Real coordinates are ordered (x_1..x_n, y_1..y_n).
inline RealPolynomial domain_polynomial(const std::string& name) {
    using detail::exps;
    if (name == "ball4") {
        RealPolynomial p(4);
        for (int i = 0; i < 4; ++i) p.add(exps(4, {{i, 2}}), 1.0);
        p.add(exps(4, {}), -1.0);
        return p;
    }
    if (name == "cylinder_x") {
        RealPolynomial p(4);
        p.add(exps(4, {{0, 2}}), 1.0);
        p.add(exps(4, {{1, 2}}), 1.0);
        p.add(exps(4, {}), -1.0);
        return p;
    }
    if (name == "weak_rank_one") {
        // (x1 - y2)^2 + (x2 + y1)^2 - 1 = |z1 + i z2|^2 - 1
        RealPolynomial p(4);
        p.add(exps(4, {{0, 2}}), 1.0);
        p.add(exps(4, {{0, 1}, {3, 1}}), -2.0);
        p.add(exps(4, {{3, 2}}), 1.0);
        p.add(exps(4, {{1, 2}}), 1.0);
        p.add(exps(4, {{1, 1}, {2, 1}}), 2.0);
        p.add(exps(4, {{2, 2}}), 1.0);
        p.add(exps(4, {}), -1.0);
        return p;
    }
    if (name == "signed_levi_c3") {
        // |z1|^2 - |z2|^2 + 3|z3|^2 - 1: Levi eigenvalues (-1, 3) along the
        // unit circle of the z1-axis.
        RealPolynomial p(6);
        const double c[3] = {1.0, -1.0, 3.0};
        for (int j = 0; j < 3; ++j) {
            p.add(exps(6, {{j, 2}}), c[j]);
            p.add(exps(6, {{3 + j, 2}}), c[j]);
        }
        p.add(exps(6, {}), -1.0);
        return p;
    }
    throw InvalidArgument("unknown domain: " + name);
}

inline int domain_dimension(const std::string& name) { return domain_polynomial(name).vars() / 2; }

inline DefiningFunction domain(const std::string& name,
                               DefiningFunction::Provenance prov = DefiningFunction::Provenance::analytic) {
    RealPolynomial p = domain_polynomial(name);
    return DefiningFunction::from_polynomial(p.vars() / 2, p, prov);
}

inline std::vector<std::string> domain_names() { return {"ball4", "cylinder_x", "weak_rank_one", "signed_levi_c3"}; }

inline ComplexPolyMap map(const std::string& name) {
    const cplx I(0, 1);
    auto z = [](cplx c) { return ZPolynomial::monomial(1, 0, c); };
    auto zb = [](cplx c) { return ZPolynomial::monomial(0, 1, c); };
    auto zero = ZPolynomial();
    if (name == "f1") return ComplexPolyMap({z(0.5) + zb(0.5), z(-0.5 * I) + zb(0.5 * I)});   // (x, y, 0, 0)
    if (name == "f2") return ComplexPolyMap({z(1.0), z(-I)});                                   // (x, y, y, -x)
    if (name == "f3") return ComplexPolyMap({zb(1.0), zero});                                   // (x, 0, -y, 0)
    if (name == "f4") return ComplexPolyMap({z(0.5) + zb(0.5), z(0.5 * I) + zb(-0.5 * I)});    // (x, -y, 0, 0)
    if (name == "f3_c3") return ComplexPolyMap({zb(1.0), zero, zero});                          // (zbar, 0, 0)
    throw InvalidArgument("unknown map: " + name);
}

inline std::vector<std::string> map_names() { return {"f1", "f2", "f3", "f4", "f3_c3"}; }

}  // namespace dbar::catalog
