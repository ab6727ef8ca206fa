#include <gtest/gtest.h>

#include "dbar/catalog.hpp"
#include "dbar/criticality.hpp"

using namespace dbar;

namespace {

DiskMap catalog_map(const std::string& name, const DiskGrid& g = DiskGrid()) {
    auto m = catalog::map(name);
    return DiskMap(g, m.evaluator(), 2 * m.n());
}

}  // namespace

TEST(Harmonic, LinearAndCubicMaps) {
    EXPECT_LT(harmonic_residual(catalog_map("f3")), 1e-10);
    EXPECT_LT(harmonic_residual(catalog_map("f4")), 1e-10);
    // first coordinate x (x^2 + y^2) = Re(z^2 zbar): Laplacian 8x
    ComplexPolyMap cubic({ZPolynomial::monomial(2, 1, 1.0), ZPolynomial()});
    DiskGrid g;
    DiskMap f(g, cubic.evaluator(), 4);
    EXPECT_GT(harmonic_residual(f), 0.1);
    EXPECT_GT(harmonic_residual(f.sampled_only()), 0.1);
}

TEST(Harmonic, HarmonicPolynomialsOnSampledPath) {
    // Re/Im of z^k and zbar^k are harmonic; degree <= n_theta/2 - 2
    DiskGrid g;
    ComplexPolyMap m({ZPolynomial::monomial(6, 0, cplx(0.3, 1.0)) + ZPolynomial::monomial(0, 4, 0.7),
                      ZPolynomial::monomial(0, 9, cplx(0.0, 0.2))});
    DiskMap f(g, m.evaluator(), 4);
    EXPECT_LT(harmonic_residual(f), 1e-9);
    EXPECT_LT(harmonic_residual(f.sampled_only()), 1e-9);
}

TEST(BoundaryCondition, CatalogPairs) {
    auto b3 = boundary_condition(catalog_map("f3"), catalog::domain("ball4"));
    EXPECT_LT(b3.residual, 1e-10);
    EXPECT_LT((b3.lambda.array() - 2.0).abs().maxCoeff(), 1e-10);
    auto b4 = boundary_condition(catalog_map("f4"), catalog::domain("weak_rank_one"));
    EXPECT_LT(b4.residual, 1e-10);
    EXPECT_LT((b4.lambda.array() - std::sqrt(2.0)).abs().maxCoeff(), 1e-10);
    auto b1 = boundary_condition(catalog_map("f1"), catalog::domain("cylinder_x"));
    EXPECT_GT(b1.residual, 0.5);
}

TEST(BoundaryCondition, InvariantUnderRescaling) {
    auto f = catalog_map("f4");
    auto df = catalog::domain("weak_rank_one");
    auto a = boundary_condition(f, df);
    auto b = boundary_condition(f, df.scaled(7.5));
    EXPECT_NEAR(a.residual, b.residual, 1e-12);
    EXPECT_LT((a.lambda - b.lambda).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BoundaryCondition, OffHypersurfaceNamesWorstNode) {
    // f3 scaled by 1/2 lies inside the ball
    ComplexPolyMap half = catalog::map("f3").scaled(0.5);
    DiskGrid g;
    DiskMap f(g, half.evaluator(), 4);
    try {
        boundary_condition(f, catalog::domain("ball4"));
        FAIL();
    } catch (const ConstraintViolation& e) {
        EXPECT_GE(e.worst_node(), 0);
        EXPECT_NEAR(e.worst_value(), -0.75, 1e-12);
    }
}

TEST(Conformality, Examples) {
    EXPECT_LT(conformality(catalog_map("f3")), 1e-12);
    EXPECT_LT(conformality(catalog_map("f2")), 1e-12);
    // (2x, y, 0, 0): z1 = 2x + i y = (3z + zbar)/2
    ComplexPolyMap stretch({ZPolynomial::monomial(1, 0, 1.5) + ZPolynomial::monomial(0, 1, 0.5), ZPolynomial()});
    DiskGrid g;
    EXPECT_GE(conformality(DiskMap(g, stretch.evaluator(), 4)), 3.0 - 1e-12);
}

TEST(IsCritical, CatalogPairs) {
    auto r3 = is_critical(catalog_map("f3"), catalog::domain("ball4"));
    EXPECT_TRUE(r3.critical);
    EXPECT_NEAR(r3.lambda_min, 2.0, 1e-10);
    EXPECT_TRUE(r3.warnings.empty());
    auto r4 = is_critical(catalog_map("f4"), catalog::domain("weak_rank_one"));
    EXPECT_TRUE(r4.critical);
    auto r1 = is_critical(catalog_map("f1"), catalog::domain("cylinder_x"));
    EXPECT_FALSE(r1.critical);
    // conclusions of the conformality proposition on certified critical points
    for (const auto& r : {r3, r4}) {
        EXPECT_LT(r.conformality_defect, 1e-8);
        EXPECT_GE(r.lambda_min, -1e-8);
    }
}

TEST(IsCritical, DimensionMismatch) {
    EXPECT_THROW(is_critical(catalog_map("f3_c3"), catalog::domain("ball4")), InvalidArgument);
}
