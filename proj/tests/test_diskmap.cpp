#include <random>

#include <gtest/gtest.h>

#include "dbar/catalog.hpp"
#include "dbar/diskmap.hpp"

using namespace dbar;

namespace {

DiskMap catalog_map(const std::string& name, const DiskGrid& g = DiskGrid()) {
    auto m = catalog::map(name);
    return DiskMap(g, m.evaluator(), 2 * m.n());
}

ComplexPolyMap random_map(std::mt19937_64& rng, int n, int deg) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<ZPolynomial> c;
    for (int j = 0; j < n; ++j) {
        ZPolynomial p;
        for (int d = 1; d <= deg; ++d)
            for (int b = 0; b <= d; ++b) p.add(d - b, b, cplx(u(rng), u(rng)));
        c.push_back(p);
    }
    return ComplexPolyMap(c);
}

}  // namespace

TEST(DiskGrid, AreaAndMoments) {
    DiskGrid g;
    EXPECT_NEAR(g.integrate(Vec::Ones(g.size())), M_PI, 1e-12);
    // int r^4 dA = 2 pi / 6
    Vec r4(g.size());
    for (int i = 0; i < g.size(); ++i) r4(i) = std::pow(std::hypot(g.x(i), g.y(i)), 4);
    EXPECT_NEAR(g.integrate(r4), M_PI / 3, 1e-12);
    EXPECT_NEAR(g.integrate_rim(Vec::Ones(g.n_theta())), 2 * M_PI, 1e-12);
}

TEST(DiskGrid, AngularDifferentiationExact) {
    DiskGrid g(8, 32);
    const Mat& d = g.angular_diff();
    for (int k = -15; k <= 15; ++k) {
        Vec c(32), s(32);
        for (int m = 0; m < 32; ++m) {
            c(m) = std::cos(k * g.theta(m));
            s(m) = std::sin(k * g.theta(m));
        }
        EXPECT_LT((d * c + k * s).cwiseAbs().maxCoeff(), 1e-10) << k;
    }
}

TEST(DiskGrid, RadialDifferentiationOfPolynomials) {
    DiskGrid g;
    const Vec& r = g.radii();
    Vec p = r.array().pow(7) - 2 * r.array().square();
    Vec dp = 7 * r.array().pow(6) - 4 * r.array();
    EXPECT_LT((g.radial_diff() * p - dp).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(DiskGrid, ResolutionErrors) {
    EXPECT_THROW(DiskGrid(3, 64), ResolutionError);
    EXPECT_THROW(DiskGrid(32, 6), ResolutionError);
    EXPECT_THROW(DiskGrid(32, 63), ResolutionError);
}

TEST(Derivatives, HolomorphicAndAntiHolomorphicCatalogMaps) {
    auto d2 = derivatives(catalog_map("f2"));
    EXPECT_LT(d2.fzbar.cwiseAbs().maxCoeff(), 1e-14);
    auto d3 = derivatives(catalog_map("f3"));
    EXPECT_LT(d3.fz.cwiseAbs().maxCoeff(), 1e-14);
    DiskGrid g;
    DiskMap constant(g, Mat::Constant(g.size(), 4, 0.3));
    auto dc = derivatives(constant);
    for (const Mat* m : {&dc.fx, &dc.fy, &dc.fr, &dc.ftheta, &dc.fz, &dc.fzbar})
        EXPECT_LT(m->cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Derivatives, SpectralPathMatchesAnalytic) {
    std::mt19937_64 rng(5);
    DiskGrid g;
    auto f = DiskMap(g, random_map(rng, 2, 4).evaluator(), 4);
    auto a = derivatives(f, true);
    auto s = derivatives(f.sampled_only(), true);
    EXPECT_LT((a.fx - s.fx).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((a.fy - s.fy).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((a.ftheta - s.ftheta).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((a.laplacian - s.laplacian).cwiseAbs().maxCoeff(), 1e-5);
}

// Hand-integrated values: constant densities times the area pi.
TEST(Energies, CatalogValues) {
    auto e1 = energies(catalog_map("f1"));
    EXPECT_NEAR(e1.e_del, M_PI / 2, 1e-12);
    EXPECT_NEAR(e1.e_dbar, M_PI / 2, 1e-12);
    EXPECT_NEAR(e1.kahler, 0.0, 1e-12);
    auto e2 = energies(catalog_map("f2"));
    EXPECT_LT(std::abs(e2.e_dbar), 1e-14);
    EXPECT_NEAR(e2.e_del, 2 * M_PI, 1e-12);
    EXPECT_NEAR(e2.kahler, 2 * M_PI, 1e-12);
    auto e3 = energies(catalog_map("f3"));
    EXPECT_LT(std::abs(e3.e_del), 1e-14);
    EXPECT_NEAR(e3.e_dbar, M_PI, 1e-12);
    EXPECT_NEAR(e3.kahler, -M_PI, 1e-12);
    auto e4 = energies(catalog_map("f4"));
    EXPECT_NEAR(e4.e_del, M_PI / 2, 1e-12);
    EXPECT_NEAR(e4.e_dbar, M_PI / 2, 1e-12);
}

// E'' for Re/Im-mixed monomials: for w = a z^p + b zbar^q, the z-part and
// zbar-part integrate separately: E'' = |b|^2 q pi, E' = |a|^2 (q+1) pi.
TEST(Energies, MonomialOracle) {
    DiskGrid g;
    for (int q = 1; q <= 5; ++q) {
        const cplx a(0.4, -0.2), b(0.3, 0.7);
        ComplexPolyMap m({ZPolynomial::monomial(q + 1, 0, a) + ZPolynomial::monomial(0, q, b)});
        auto e = energies(DiskMap(g, m.evaluator(), 2));
        EXPECT_NEAR(e.e_dbar, std::norm(b) * q * M_PI, 1e-11) << q;
        EXPECT_NEAR(e.e_del, std::norm(a) * (q + 1) * M_PI, 1e-11) << q;
    }
}

TEST(Energies, IdentitiesForRandomMaps) {
    std::mt19937_64 rng(17);
    DiskGrid g;
    for (int s = 0; s < 8; ++s) {
        auto f = DiskMap(g, random_map(rng, 1 + s % 3, 4).evaluator(), 2 * (1 + s % 3));
        auto e = energies(f);
        EXPECT_LT(std::abs(e.e_full - e.e_del - e.e_dbar), 1e-10 * e.e_full);
        EXPECT_LT(std::abs(e.e_del - e.e_dbar - e.kahler), 1e-10 * e.e_full);
        EXPECT_GE(e.e_dbar, -1e-12);
    }
}

TEST(Energies, RotationAndResolutionInvariance) {
    std::mt19937_64 rng(23);
    DiskGrid g;
    auto m = random_map(rng, 2, 5);
    const double e0 = energies(DiskMap(g, m.evaluator(), 4)).e_full;
    for (double a : {0.3, 1.7, 4.0})
        EXPECT_NEAR(energies(DiskMap(g, m.rotated(a).evaluator(), 4)).e_full, e0, 1e-10 * e0);
    for (const auto& name : catalog::map_names()) {
        auto f = catalog_map(name);
        auto e = energies(f), d = energies(f.resampled(g.doubled()));
        EXPECT_NEAR(e.e_del, d.e_del, 1e-10);
        EXPECT_NEAR(e.e_dbar, d.e_dbar, 1e-10);
    }
}

TEST(Energies, HolomorphicityCriterionOnCatalog) {
    for (const auto& name : catalog::map_names()) {
        auto f = catalog_map(name);
        auto d = derivatives(f);
        const bool small_density = (2.0 * d.fzbar).rowwise().norm().maxCoeff() < 1e-8;
        EXPECT_EQ(energies(f, d).e_dbar < 1e-8, small_density) << name;
    }
}

TEST(Homotopy, FixedBoundaryDriftVanishes) {
    DiskGrid g;
    std::mt19937_64 rng(29);
    ZPolynomial cut({{0, 0, 1.0}, {1, 1, -1.0}});
    auto bumped = [&](int n) {
        auto r = random_map(rng, n, 3);
        std::vector<ZPolynomial> c;
        for (const auto& p : r.coords()) c.push_back(cut * p);
        return ComplexPolyMap(c);
    };
    auto f1 = catalog_map("f1");
    auto eta = DiskMap(g, bumped(2).evaluator(), 4);
    EXPECT_LT(homotopy_invariance_check(f1, eta, 5), 1e-8);

    Mat e2 = Mat::Zero(g.size(), 4);
    for (int i = 0; i < g.size(); ++i) e2(i, 1) = 1 - std::pow(std::hypot(g.x(i), g.y(i)), 2);
    EXPECT_LT(homotopy_invariance_check(catalog_map("f3"), DiskMap(g, e2), 5), 1e-8);

    DiskMap zero(g, Mat::Zero(g.size(), 4));
    EXPECT_EQ(homotopy_invariance_check(f1, zero, 3), 0.0);

    auto moving = catalog_map("f2");
    EXPECT_THROW(homotopy_invariance_check(f1, moving, 3), InvalidVariation);
    EXPECT_THROW(homotopy_invariance_check(f1, zero, 1), InvalidArgument);
}
