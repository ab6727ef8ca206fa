#include <random>

#include <gtest/gtest.h>

#include "dbar/catalog.hpp"
#include "dbar/f4family.hpp"
#include "dbar/secondvar.hpp"

using namespace dbar;

namespace {

DiskMap catalog_map(const std::string& name, const DiskGrid& g = DiskGrid()) {
    auto m = catalog::map(name);
    return DiskMap(g, m.evaluator(), 2 * m.n());
}

// Constant-profile field p(z) * dir with p a z-polynomial (real part).
VariationField field(const DiskGrid& g, const ZPolynomial& p, Vec dir, bool imag = false) {
    return scalar_times_vector(g, p, imag, std::move(dir), "test");
}

Vec e(int dim, int i) {
    Vec v = Vec::Zero(dim);
    v(i) = 1.0;
    return v;
}

ZPolynomial one() { return ZPolynomial::monomial(0, 0, 1.0); }
ZPolynomial cut() { return ZPolynomial({{0, 0, 1.0}, {1, 1, -1.0}}); }

F4Family sigma_only() {
    F4Family fam;
    fam.sigma = ScalarPolynomial(cut());
    return fam;
}

}  // namespace

TEST(Admissibility, TangentAndNormalFieldsOnBall) {
    DiskGrid g;
    auto f3 = catalog_map("f3");
    auto ball = catalog::domain("ball4");
    // on the rim f3 = (cos t, 0, -sin t, 0); (y, 0, x, 0) is tangent there
    JetEvaluator tangent = [](double x, double y) {
        Jet j = Jet::zero(4, false);
        j.value << y, 0, x, 0;
        j.dx << 0, 0, 1, 0;
        j.dy << 1, 0, 0, 0;
        return j;
    };
    auto a = admissibility(VariationField(DiskMap(g, tangent, 4)), f3, ball);
    EXPECT_LT(a.real_check, 1e-10);
    VariationField normal(f3);  // nu = f3 on the unit sphere
    EXPECT_NEAR(admissibility(normal, f3, ball).real_check, 1.0, 1e-12);
}

TEST(IndexForm, CompactSupportIsHalfDirichlet) {
    DiskGrid g;
    IndexForm form(catalog_map("f3"), catalog::domain("ball4"));
    // V = (1 - r^2) e_1: int |grad V|^2 = int 4 r^2 = 2 pi
    EXPECT_NEAR(form.real(field(g, cut(), e(4, 0))), M_PI, 1e-12);
    // V = (1 - r^2) x e_3: angular mean of |grad|^2 is 1 - 4r^2 + 5r^4, so int = 2 pi / 3
    EXPECT_NEAR(form.real(field(g, cut() * ZPolynomial::monomial(1, 0, 1.0), e(4, 2))), M_PI / 3, 1e-12);
}

TEST(IndexForm, MatchesFiniteDifferencesOnBall) {
    // F_t = (f3 + t X) / sqrt(1 + t^2) stays on the sphere for X = e_{x2}, e_{y2}
    DiskGrid g;
    auto f3map = catalog::map("f3");
    auto ball = catalog::domain("ball4");
    IndexForm form(DiskMap(g, f3map.evaluator(), 4), ball);
    for (int i : {1, 3}) {
        const Vec dir = e(4, i);
        auto fam = [&](double t) {
            auto ev = f3map.evaluator();
            return DiskMap(g, [ev, dir, t](double x, double y) {
                Jet j = ev(x, y);
                const double s = 1.0 / std::sqrt(1 + t * t);
                j.value = s * (j.value + t * dir);
                j.dx *= s;
                j.dy *= s;
                return j;
            }, 4);
        };
        auto fd = fd_second_variation(fam, 1e-2, &ball);
        const double idx = form.real(field(g, one(), dir));
        EXPECT_NEAR(fd.energy_value, -2 * M_PI, 1e-6);
        EXPECT_NEAR(idx, fd.energy_value, 1e-4 * std::abs(idx));
        EXPECT_NEAR(fd.integral_value, 4 * fd.energy_value, 1e-12);
    }
}

TEST(IndexForm, ExplicitAccelerationMatchesHypersurfacePolicy) {
    DiskGrid g;
    IndexForm form(catalog_map("f3"), catalog::domain("ball4"));
    VariationField v = field(g, one(), e(4, 1));
    VariationField w = v;
    w.policy = AccelerationPolicy::explicit_normal;
    w.normal_acceleration = Vec::Constant(g.n_theta(), -1.0);  // -Hess(X, X)/|grad| = -2/2
    EXPECT_NEAR(form.real(v), form.real(w), 1e-13);
    EXPECT_THROW(form.real(w, v), InvalidArgument);
}

TEST(IndexForm, F4SigmaFamilyClosedForm) {
    DiskGrid g;
    auto fam = sigma_only();
    IndexForm form(catalog_map("f4"), catalog::domain("weak_rank_one"));
    const double idx = 4.0 * form.real(fam.variation(g));
    EXPECT_NEAR(idx, 4 * M_PI / 3, 1e-6);
    EXPECT_NEAR(fam.post_ibp(g), 4 * M_PI / 3, 1e-10);
    EXPECT_NEAR(fam.pre_ibp(g), 4 * M_PI / 3, 1e-10);
}

TEST(IndexForm, F4RandomFamiliesOracleEquivalence) {
    DiskGrid g;
    std::mt19937_64 rng(101);
    auto weak = catalog::domain("weak_rank_one");
    for (int s = 0; s < 5; ++s) {
        auto fam = random_f4_family(rng);
        auto cmp = f4_family_experiment(fam, {1e-2}, g);
        EXPECT_LT(cmp.max_relative_difference, 1e-4);
        EXPECT_NEAR(cmp.pre_ibp, cmp.post_ibp, 1e-8 * std::max(1.0, cmp.post_ibp));
        EXPECT_GE(cmp.post_ibp, -1e-10);
        EXPECT_GE(cmp.index_form, -1e-10);
    }
}

TEST(IndexForm, ZeroFamily) {
    DiskGrid g;
    auto cmp = f4_family_experiment(F4Family{}, {1e-2}, g);
    EXPECT_EQ(cmp.pre_ibp, 0.0);
    EXPECT_EQ(cmp.post_ibp, 0.0);
    EXPECT_NEAR(cmp.fd.front(), 0.0, 1e-10);
    EXPECT_NEAR(cmp.index_form, 0.0, 1e-14);
}

TEST(IndexForm, SigmaMustVanishOnRim) {
    DiskGrid g;
    F4Family fam;
    fam.sigma = ScalarPolynomial(one());
    EXPECT_THROW(f4_family_experiment(fam, {1e-2}, g), InvalidVariation);
}

TEST(IndexForm, ScalingAndPolarization) {
    DiskGrid g;
    auto f4 = catalog_map("f4");
    auto weak = catalog::domain("weak_rank_one");
    IndexForm form(f4, weak);
    auto basis = tangent_fields(f4, weak, 2);
    const auto& v = basis[3];
    const auto& w = basis[6];
    const double base = form.real(v);
    for (double c : {2.0, 10.0}) EXPECT_NEAR(form.real(v.scaled(c)), c * c * base, 1e-10 * c * c * std::abs(base));
    VariationField sum(v.field.combine(1.0, w.field, 1.0)), diff(v.field.combine(1.0, w.field, -1.0));
    EXPECT_NEAR(form.real(v, w), 0.25 * (form.real(sum) - form.real(diff)), 1e-10 * std::abs(base));
    EXPECT_NEAR(form.real(v, w), form.real(w, v), 1e-14 * std::abs(base));
}

TEST(IndexForm, InadmissibleFieldReportsMeasuredValue) {
    DiskGrid g;
    auto f3 = catalog_map("f3");
    IndexForm form(f3, catalog::domain("ball4"));
    try {
        form.real(VariationField(f3));
        FAIL();
    } catch (const InvalidVariation& err) {
        EXPECT_NEAR(err.measured(), 1.0, 1e-12);
    }
}

TEST(ComplexIndexForm, AgreesWithRealFormOnSplitFields) {
    DiskGrid g;
    auto f3 = catalog_map("f3");
    IndexForm form(f3, catalog::domain("ball4"));
    ComplexStructure cs(2);
    std::vector<VariationField> xs = {field(g, ZPolynomial::monomial(2, 0, 1.0), e(4, 1)),
                                      field(g, ZPolynomial::monomial(1, 1, cplx(0.5, 1.0)), e(4, 3), true),
                                      field(g, cut() * ZPolynomial::monomial(0, 2, 1.0), e(4, 0)),
                                      field(g, cut(), e(4, 2))};
    for (const auto& x : xs) {
        auto ev = x.field.evaluator();
        VariationField jxf(DiskMap(g, [ev, cs](double a, double b) {
            Jet j = ev(a, b);
            j.value = cs.apply(j.value);
            j.dx = cs.apply(j.dx);
            j.dy = cs.apply(j.dy);
            return j;
        }, 4));
        const double real_sum = form.real(x) + form.real(jxf);
        EXPECT_NEAR(form.complex(x), real_sum, 1e-8 * std::max(1.0, std::abs(real_sum)));
    }
    EXPECT_EQ(form.complex(field(g, ZPolynomial(), e(4, 1))), 0.0);
}

TEST(ComplexIndexForm, HolomorphicSectionOnBallIsNegative) {
    DiskGrid g;
    IndexForm form(catalog_map("f3"), catalog::domain("ball4"));
    // U = z * (e_{x2} - i e_{y2}): real part Re(z) e_{x2} + Im(z) e_{y2}
    JetEvaluator ev = [](double x, double y) {
        Jet j = Jet::zero(4, false);
        j.value << 0, x, 0, y;
        j.dx << 0, 1, 0, 0;
        j.dy << 0, 0, 0, 1;
        return j;
    };
    EXPECT_LT(form.complex(VariationField(DiskMap(g, ev, 4))), 0.0);
}

TEST(Gram, CompactBasisIsPositiveDefinite) {
    DiskGrid g;
    auto f3 = catalog_map("f3");
    IndexForm form(f3, catalog::domain("ball4"));
    auto gs = assemble_gram(form, interior_bumps(g, 4, 2));
    EXPECT_EQ(gs.matrix.rows(), 20);
    EXPECT_GT(gs.eigenvalues(0), 0.0);
    EXPECT_EQ(gs.negative_count, 0);
}

TEST(Gram, SymmetricThreadIndependentAndMonotoneInTolerance) {
    DiskGrid g;
    auto f3 = catalog_map("f3");
    auto ball = catalog::domain("ball4");
    IndexForm form(f3, ball);
    auto basis = admissible_basis(f3, ball, {2, 1, true, true});
    auto serial = assemble_gram(form, basis, true);
    auto threaded = assemble_gram(form, basis, false);
    EXPECT_EQ((serial.matrix - threaded.matrix).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT((serial.matrix - serial.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_TRUE(std::is_sorted(serial.eigenvalues.data(), serial.eigenvalues.data() + serial.eigenvalues.size()));
    int previous = std::numeric_limits<int>::max();
    for (double tol : {0.0, 1e-12, 1e-8, 1e-4, 1e-2, 0.1, 0.5}) {
        const int c = count_negative(serial.eigenvalues, tol);
        EXPECT_LE(c, previous);
        previous = c;
    }
    EXPECT_GE(serial.negative_count, 1);
    EXPECT_THROW(assemble_gram(form, {}), InvalidArgument);
}

TEST(Gram, F4LargeBasisIsStable) {
    auto f4 = catalog_map("f4");
    auto weak = catalog::domain("weak_rank_one");
    auto basis = admissible_basis(f4, weak);
    ASSERT_GE(basis.size(), 50u);
    auto gs = assemble_gram(IndexForm(f4, weak), basis);
    EXPECT_EQ(gs.negative_count, 0);
    EXPECT_GE(gs.eigenvalues(0), -1e-8);
}

TEST(FiniteDifference, ConstraintAndArguments) {
    DiskGrid g;
    auto ball = catalog::domain("ball4");
    auto f3map = catalog::map("f3");
    auto grow = [&](double t) { return DiskMap(g, f3map.scaled(1 + t).evaluator(), 4); };
    EXPECT_THROW(fd_second_variation(grow, 1e-2, &ball), ConstraintViolation);
    EXPECT_THROW(fd_second_variation(grow, 0.0), InvalidArgument);
    auto still = [&](double) { return DiskMap(g, f3map.evaluator(), 4); };
    EXPECT_EQ(fd_second_variation(still, 1e-2, &ball).energy_value, 0.0);
}

TEST(Cutoff, ProfileAndDirichletIntegral) {
    DiskGrid g;
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        auto p = log_cutoff(eps, g);
        const double closed = 2 * M_PI / std::abs(std::log(eps));
        EXPECT_NEAR(p.dirichlet, closed, 1e-10 * closed);
        EXPECT_LE(p.dirichlet, 1.1 * closed);
        EXPECT_LT(p.dirichlet, previous);
        previous = p.dirichlet;
        EXPECT_LE(p.max_slope_ratio, 1.0 + 1e-12);
        EXPECT_EQ(p.values(g.rings() - 1), 1.0);
        // ring nearest eps^2 / 2
        int nearest = 0;
        for (int j = 0; j < g.rings(); ++j)
            if (std::abs(g.r(j) - eps * eps / 2) < std::abs(g.r(nearest) - eps * eps / 2)) nearest = j;
        if (g.r(nearest) <= eps * eps) {
            EXPECT_EQ(p.values(nearest), 0.0);
        }
    }
    EXPECT_NEAR(log_cutoff(1e-2, g).dirichlet, 1.364, 1e-3);
    EXPECT_THROW(log_cutoff(0.5, g), InvalidArgument);
    EXPECT_THROW(log_cutoff(0.0, g), InvalidArgument);
    EXPECT_EQ(cutoff_value(1e-5, 1e-2), 0.0);
    EXPECT_EQ(cutoff_value(0.5, 1e-2), 1.0);
}

TEST(Cutoff, ConstantFieldShiftIsExact) {
    // grad V = 0, so I(rho V) - I(V) = |V|^2 / 2 * int |grad rho|^2
    DiskGrid g;
    IndexForm form(catalog_map("f4"), catalog::domain("weak_rank_one"));
    Vec dir(4);
    dir << 1, 0, 0, 1;
    auto v = field(g, one(), dir);
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        auto ci = cutoff_index_form(form, v, eps);
        const double shift = 0.5 * dir.squaredNorm() * 2 * M_PI / std::abs(std::log(eps));
        EXPECT_NEAR(ci.cut - ci.base, shift, 1e-10);
    }
}

TEST(Cutoff, StabilityTransferBound) {
    DiskGrid g;
    auto f4 = catalog_map("f4");
    auto weak = catalog::domain("weak_rank_one");
    IndexForm form(f4, weak);
    std::mt19937_64 rng(5);
    std::vector<VariationField> fields = {random_f4_family(rng).variation(g)};
    auto t = tangent_fields(f4, weak, 2);
    fields.push_back(t[5]);
    fields.push_back(t[10]);
    for (const auto& v : fields)
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            auto ci = cutoff_index_form(form, v, eps);
            EXPECT_GE(ci.cut, ci.base - ci.bound);
            EXPECT_LE(ci.cut, ci.base + ci.bound);
        }
}
