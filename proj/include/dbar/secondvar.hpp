#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "criticality.hpp"

namespace dbar {

// How the normal component of the boundary acceleration of the deforming
// family is obtained.
enum class AccelerationPolicy {
    hypersurface,  // curve confined to {rho = 0}: <A, nu> = -Hess rho(V, V) / |grad rho|
    explicit_normal,
};

struct VariationField {
    DiskMap field;
    AccelerationPolicy policy = AccelerationPolicy::hypersurface;
    Vec normal_acceleration;  // <A, nu> per rim node, explicit policy only
    std::string label;

    VariationField(DiskMap f, std::string lbl = {}) : field(std::move(f)), label(std::move(lbl)) {}

    VariationField scaled(double c) const {
        VariationField v(field.combine(c, field, 0.0), label);
        v.policy = policy;
        if (policy == AccelerationPolicy::explicit_normal) v.normal_acceleration = c * c * normal_acceleration;
        return v;
    }
};

struct Admissibility {
    double real_check = 0.0;     // sup |<V, nu>| on the rim
    double complex_check = 0.0;  // sup |<<V - iJV, f_zbar>>| on the rim
};

struct GramSpectrum {
    Mat matrix;
    Vec eigenvalues;  // ascending
    int negative_count = 0;
    double tol_neg = 0.0;
    std::vector<std::string> labels;
};

inline int count_negative(const Vec& eigenvalues, double tol_rel) {
    if (eigenvalues.size() == 0) return 0;
    const double tol = tol_rel * eigenvalues.cwiseAbs().maxCoeff();
    return static_cast<int>((eigenvalues.array() < -tol).count());
}

// The index form of the second variation of the dbar-energy at a map f in a
// flat domain, with the curvature term dropped:
//   I(V,V) = 1/2 [ int_D |grad V|^2 + int_dD <A, f_r + J f_theta> + int_dD <J V_theta, V> ].
// Only the nu-component of the acceleration A enters since f_r + J f_theta = lambda nu
// at a critical map.
class IndexForm {
public:
    struct FieldData {
        Mat v, vx, vy, vtheta;
        const VariationField* source = nullptr;
    };

    struct Parts {
        double interior = 0.0;      // int_D <grad V, grad W>
        double acceleration = 0.0;  // int_dD lambda <A, nu>
        double rotation = 0.0;      // int_dD sym <J V_theta, W>
        double total() const { return 0.5 * (interior + acceleration + rotation); }
    };

    IndexForm(const DiskMap& f, const DefiningFunction& df, Tolerances tol = {})
        : f_(f), df_(df), tol_(tol), d_(derivatives(f)), rim_(rim_geometry(f, d_, df, tol)), cs_(df.n()) {}

    const DiskMap& map() const noexcept { return f_; }
    const DefiningFunction& domain() const noexcept { return df_; }
    const DerivativeFields& map_derivatives() const noexcept { return d_; }
    const RimGeometry& rim() const noexcept { return rim_; }
    const Tolerances& tolerances() const noexcept { return tol_; }

    FieldData prepare(const VariationField& v) const {
        if (v.field.dim() != f_.dim() || v.field.grid().size() != f_.grid().size())
            throw InvalidArgument("variation field does not live on the map's grid");
        DerivativeFields d = derivatives(v.field);
        return {v.field.values(), std::move(d.fx), std::move(d.fy), std::move(d.ftheta), &v};
    }

    Admissibility admissibility(const FieldData& v) const {
        const DiskGrid& g = f_.grid();
        Admissibility a;
        for (int m = 0; m < g.n_theta(); ++m) {
            const int i = g.rim_index(m);
            Vec val = v.v.row(i).transpose();
            a.real_check = std::max(a.real_check, std::abs(val.dot(rim_.nu[m])));
            cplx pair = hermitian(cs_.to_complex(val), cs_.to_complex(d_.fzbar.row(i).transpose()));
            a.complex_check = std::max(a.complex_check, std::abs(pair));
        }
        return a;
    }

    Admissibility admissibility(const VariationField& v) const { return admissibility(prepare(v)); }

    void require_admissible(const FieldData& v) const {
        Admissibility a = admissibility(v);
        if (!(a.real_check < tol_.admissible))
            throw InvalidVariation("variation field " + (v.source ? v.source->label : std::string()) +
                                       " is not tangent to the boundary",
                                   a.real_check);
    }

    Parts parts(const FieldData& v, const FieldData& w) const {
        const DiskGrid& g = f_.grid();
        Parts p;
        Vec dens = (v.vx.array() * w.vx.array()).rowwise().sum() + (v.vy.array() * w.vy.array()).rowwise().sum();
        p.interior = g.integrate(dens);
        const bool same = v.source == w.source;
        Vec acc(g.n_theta()), rot(g.n_theta());
        for (int m = 0; m < g.n_theta(); ++m) {
            const int i = g.rim_index(m);
            Vec a = v.v.row(i).transpose(), b = w.v.row(i).transpose();
            double normal_acc;
            if (same && v.source && v.source->policy == AccelerationPolicy::explicit_normal) {
                normal_acc = v.source->normal_acceleration(m);
            } else {
                if ((v.source && v.source->policy == AccelerationPolicy::explicit_normal) ||
                    (w.source && w.source->policy == AccelerationPolicy::explicit_normal))
                    throw InvalidArgument("explicit acceleration is defined only on the diagonal");
                normal_acc = -a.dot(rim_.hess[m] * b) / rim_.grad_norm(m);
            }
            acc(m) = rim_.lambda(m) * normal_acc;
            Vec jvt = cs_.apply(v.vtheta.row(i).transpose());
            Vec jwt = cs_.apply(w.vtheta.row(i).transpose());
            rot(m) = 0.5 * (jvt.dot(b) + jwt.dot(a));
        }
        p.acceleration = g.integrate_rim(acc);
        p.rotation = g.integrate_rim(rot);
        return p;
    }

    double real(const FieldData& v, const FieldData& w, bool check = true) const {
        if (check) {
            require_admissible(v);
            if (w.source != v.source) require_admissible(w);
        }
        return parts(v, w).total();
    }

    double real(const VariationField& v, const VariationField& w) const { return real(prepare(v), prepare(w)); }
    double real(const VariationField& v) const {
        FieldData d = prepare(v);
        return real(d, d);
    }

    // Hermitian index form on the (1,0) section U = X - iJX whose real part X
    // is given:
    //   2 int_D |U_zbar|^2 + 1/2 int_dD lambda <<A_U, nu>> - i/2 int_dD <<U_theta + iJU_theta, U>>.
    double complex(const VariationField& x) const {
        const FieldData d = prepare(x);
        const DiskGrid& g = f_.grid();
        const int dim = f_.dim();
        const cplx I(0, 1);
        Vec dens(g.size());
        for (int i = 0; i < g.size(); ++i) {
            CVec ux = cs_.type10(d.vx.row(i).transpose());
            CVec uy = cs_.type10(d.vy.row(i).transpose());
            dens(i) = (0.5 * (ux + I * uy)).squaredNorm();
        }
        const double dbar = 2.0 * g.integrate(dens);
        Vec acc(g.n_theta()), last(g.n_theta());
        Mat j = cs_.matrix();
        for (int m = 0; m < g.n_theta(); ++m) {
            const int i = g.rim_index(m);
            Vec xv = d.v.row(i).transpose();
            Vec jx = cs_.apply(xv);
            const double hess_h = xv.dot(rim_.hess[m] * xv) + jx.dot(rim_.hess[m] * jx);
            acc(m) = rim_.lambda(m) * (-hess_h / rim_.grad_norm(m));
            CVec u = cs_.type10(xv);
            CVec ut = cs_.type10(d.vtheta.row(i).transpose());
            CVec s = ut + I * (j.cast<cplx>() * ut);
            cplx pair(0, 0);
            for (int k = 0; k < dim; ++k) pair += s(k) * std::conj(u(k));
            last(m) = (-0.5 * I * pair).real();
        }
        return dbar + 0.5 * g.integrate_rim(acc) + g.integrate_rim(last);
    }

private:
    DiskMap f_;
    DefiningFunction df_;
    Tolerances tol_;
    DerivativeFields d_;
    RimGeometry rim_;
    ComplexStructure cs_;
};

inline double index_form_real(const DiskMap& f, const DefiningFunction& df, const VariationField& v,
                              const VariationField& w, const Tolerances& tol = {}) {
    return IndexForm(f, df, tol).real(v, w);
}

inline double index_form_complex(const DiskMap& f, const DefiningFunction& df, const VariationField& x,
                                 const Tolerances& tol = {}) {
    return IndexForm(f, df, tol).complex(x);
}

inline Admissibility admissibility(const VariationField& v, const DiskMap& f, const DefiningFunction& df,
                                   const Tolerances& tol = {}) {
    return IndexForm(f, df, tol).admissibility(v);
}

// Matrix of I(b_i, b_j) over the basis and its spectrum. Entries are pure
// functions of the pair; the non-deterministic mode spreads rows over threads
// but each entry is still summed in a fixed order.
inline GramSpectrum assemble_gram(const IndexForm& form, const std::vector<VariationField>& basis,
                                  bool deterministic = true) {
    if (basis.empty()) throw InvalidArgument("Gram assembly needs a non-empty basis");
    const int m = static_cast<int>(basis.size());
    std::vector<IndexForm::FieldData> data;
    data.reserve(m);
    for (const auto& b : basis) {
        data.push_back(form.prepare(b));
        form.require_admissible(data.back());
    }
    GramSpectrum gs;
    gs.matrix = Mat::Zero(m, m);
    auto fill_row = [&](int i) {
        for (int j = i; j < m; ++j) {
            double v = form.real(data[i], data[j], false);
            gs.matrix(i, j) = v;
            gs.matrix(j, i) = v;
        }
    };
    const unsigned workers = deterministic ? 1u : std::max(1u, std::thread::hardware_concurrency());
    if (workers <= 1) {
        for (int i = 0; i < m; ++i) fill_row(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int i = static_cast<int>(w); i < m; i += static_cast<int>(workers)) fill_row(i);
            });
        for (auto& t : pool) t.join();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(gs.matrix, Eigen::EigenvaluesOnly);
    gs.eigenvalues = es.eigenvalues();
    gs.tol_neg = form.tolerances().negative_rel * gs.eigenvalues.cwiseAbs().maxCoeff();
    gs.negative_count = count_negative(gs.eigenvalues, form.tolerances().negative_rel);
    for (const auto& b : basis) gs.labels.push_back(b.label);
    return gs;
}

// ---------------------------------------------------------------------------
// Admissible basis generator

struct BasisParams {
    int tangent_kmax = 8;  // boundary-tangent fields Re/Im(z^k) * T e_i, k <= tangent_kmax
    int bump_kmax = 1;     // interior bumps (1 - |z|^2) Re/Im(z^k) e_i, k <= bump_kmax
    bool tangent = true;
    bool bumps = true;
};

namespace detail {

// Value and Cartesian gradient of Re or Im of a z-polynomial.
inline ScalarJet profile_jet(const ZPolynomial& p, bool imag, double x, double y) {
    auto d = p.derivs(x, y);
    auto pick = [imag](cplx c) { return imag ? c.imag() : c.real(); };
    return {pick(d.value), pick(d.dx), pick(d.dy), 0.0, 0.0};
}

}  // namespace detail

inline VariationField scalar_times_vector(const DiskGrid& grid, const ZPolynomial& profile, bool imag, Vec dir,
                                          std::string label) {
    const int dim = static_cast<int>(dir.size());
    JetEvaluator ev = [profile, imag, dir](double x, double y) {
        ScalarJet s = detail::profile_jet(profile, imag, x, y);
        Jet j;
        j.value = s.value * dir;
        j.dx = s.dx * dir;
        j.dy = s.dy * dir;
        return j;
    };
    return VariationField(DiskMap(grid, ev, dim), std::move(label));
}

// Interior bumps (1 - |z|^2) Re/Im(z^k) e_i; these vanish on the rim.
inline std::vector<VariationField> interior_bumps(const DiskGrid& grid, int dim, int kmax) {
    std::vector<VariationField> out;
    ZPolynomial cut({{0, 0, 1.0}, {1, 1, -1.0}});
    for (int k = 0; k <= kmax; ++k) {
        ZPolynomial prof = cut * ZPolynomial::monomial(k, 0, 1.0);
        for (int part = 0; part < (k == 0 ? 1 : 2); ++part)
            for (int i = 0; i < dim; ++i) {
                Vec e = Vec::Zero(dim);
                e(i) = 1.0;
                out.push_back(scalar_times_vector(grid, prof, part == 1, e,
                                                  "bump[k=" + std::to_string(k) + (part ? ",im" : ",re") +
                                                      ",e" + std::to_string(i + 1) + "]"));
            }
    }
    return out;
}

// Fields Re/Im(z^k) * (|g|^2 e_i - g_i g) with g = grad rho(f(x,y)). On the rim
// these are |g|^2 times the tangential projection of e_i, and the unnormalized
// projector keeps them polynomial at the origin.
inline std::vector<VariationField> tangent_fields(const DiskMap& f, const DefiningFunction& df, int kmax) {
    if (!f.analytic()) throw InvalidArgument("tangent basis needs an analytic map");
    const int dim = f.dim();
    std::vector<VariationField> out;
    const JetEvaluator fev = f.evaluator();
    for (int k = 0; k <= kmax; ++k) {
        ZPolynomial prof = ZPolynomial::monomial(k, 0, 1.0);
        for (int part = 0; part < (k == 0 ? 1 : 2); ++part)
            for (int i = 0; i < dim; ++i) {
                const bool imag = part == 1;
                JetEvaluator ev = [fev, df, prof, imag, i, dim](double x, double y) {
                    Jet fj = fev(x, y);
                    Vec g = df.grad(fj.value);
                    Mat h = df.hess(fj.value);
                    Vec gx = h * fj.dx, gy = h * fj.dy;
                    Vec e = Vec::Zero(dim);
                    e(i) = 1.0;
                    auto field = [&](const Vec& gg) { return Vec(gg.squaredNorm() * e - gg(i) * gg); };
                    Vec t = field(g);
                    Vec tx = 2.0 * g.dot(gx) * e - gx(i) * g - g(i) * gx;
                    Vec ty = 2.0 * g.dot(gy) * e - gy(i) * g - g(i) * gy;
                    ScalarJet s = detail::profile_jet(prof, imag, x, y);
                    Jet j;
                    j.value = s.value * t;
                    j.dx = s.dx * t + s.value * tx;
                    j.dy = s.dy * t + s.value * ty;
                    return j;
                };
                out.emplace_back(DiskMap(f.grid(), ev, dim),
                                 "tan[k=" + std::to_string(k) + (imag ? ",im" : ",re") + ",e" + std::to_string(i + 1) + "]");
            }
    }
    return out;
}

inline std::vector<VariationField> admissible_basis(const DiskMap& f, const DefiningFunction& df,
                                                    const BasisParams& params = {}) {
    std::vector<VariationField> out;
    if (params.tangent) {
        auto t = tangent_fields(f, df, params.tangent_kmax);
        out.insert(out.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
    }
    if (params.bumps) {
        auto b = interior_bumps(f.grid(), f.dim(), params.bump_kmax);
        out.insert(out.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite-difference oracle

struct FdSecondVariation {
    double energy_value = 0.0;    // d^2/dt^2 E''(F_t) at t = 0
    double integral_value = 0.0;  // d^2/dt^2 int |dF/dx + J dF/dy|^2, i.e. 4x the above
    double coarse = 0.0;          // central difference with step h
    double fine = 0.0;            // central difference with step h/2
};

using MapFamily = std::function<DiskMap(double t)>;

// Central second difference of E'' along the family with one Richardson step.
inline FdSecondVariation fd_second_variation(const MapFamily& family, double h, const DefiningFunction* df = nullptr,
                                             const Tolerances& tol = {}) {
    if (!(h > 0.0)) throw InvalidArgument("step must be positive");
    auto energy = [&](double t) {
        DiskMap ft = family(t);
        if (df && t != 0.0) {
            Mat rim = ft.boundary_trace();
            int worst = 0;
            double worst_rho = 0.0;
            for (int m = 0; m < rim.rows(); ++m) {
                double r = df->rho(rim.row(m).transpose());
                if (std::abs(r) > std::abs(worst_rho)) {
                    worst_rho = r;
                    worst = m;
                }
            }
            if (!(std::abs(worst_rho) < tol.boundary))
                throw ConstraintViolation("deformed boundary leaves the hypersurface", worst, worst_rho);
        }
        return energies(ft).e_dbar;
    };
    const double e0 = energy(0.0);
    auto central = [&](double s) { return (energy(s) - 2.0 * e0 + energy(-s)) / (s * s); };
    FdSecondVariation out;
    out.coarse = central(h);
    out.fine = central(h / 2);
    out.energy_value = (4.0 * out.fine - out.coarse) / 3.0;
    out.integral_value = 4.0 * out.energy_value;
    return out;
}

// ---------------------------------------------------------------------------
// Logarithmic cutoff: 0 on r <= eps^2, 1 on r >= eps, log-linear in between,
// so that |d rho / dr| = 1 / (r |ln eps|) on the transition annulus.

inline void check_epsilon(double eps) {
    if (!(eps > 0.0 && eps < std::exp(-1.0))) throw InvalidArgument("cutoff needs 0 < epsilon < 1/e");
}

inline double cutoff_value(double r, double eps) {
    if (r <= eps * eps) return 0.0;
    if (r >= eps) return 1.0;
    return std::log(r / (eps * eps)) / std::abs(std::log(eps));
}

inline double cutoff_slope(double r, double eps) {
    if (r <= eps * eps || r >= eps) return 0.0;
    return 1.0 / (r * std::abs(std::log(eps)));
}

struct CutoffProfile {
    double epsilon = 0.0;
    Vec values;      // per ring of the grid, rim included
    Vec slopes;
    double dirichlet = 0.0;       // int_D |grad rho_eps|^2
    double max_slope_ratio = 0.0; // max over nodes of |rho'| r |ln eps| (<= 1)
};

// Composite radial rule on [0,1] split at eps^2 and eps; the middle segment
// uses Gauss-Legendre in log r. Returns (r, weight for dr) pairs.
inline std::vector<std::pair<double, double>> cutoff_radial_rule(double eps, int q) {
    Vec t, w;
    gauss_legendre(q, t, w);
    std::vector<std::pair<double, double>> rule;
    auto linear = [&](double a, double b) {
        for (int i = 0; i < q; ++i) rule.emplace_back(0.5 * (a + b) + 0.5 * (b - a) * t(i), 0.5 * (b - a) * w(i));
    };
    linear(0.0, eps * eps);
    const double sa = 2.0 * std::log(eps), sb = std::log(eps);
    for (int i = 0; i < q; ++i) {
        const double s = 0.5 * (sa + sb) + 0.5 * (sb - sa) * t(i);
        const double r = std::exp(s);
        rule.emplace_back(r, 0.5 * (sb - sa) * w(i) * r);
    }
    linear(eps, 1.0);
    return rule;
}

inline CutoffProfile log_cutoff(double eps, const DiskGrid& grid, int q = 48) {
    check_epsilon(eps);
    CutoffProfile p;
    p.epsilon = eps;
    p.values.resize(grid.rings());
    p.slopes.resize(grid.rings());
    const double le = std::abs(std::log(eps));
    for (int j = 0; j < grid.rings(); ++j) {
        const double r = grid.r(j);
        p.values(j) = cutoff_value(r, eps);
        p.slopes(j) = cutoff_slope(r, eps);
        p.max_slope_ratio = std::max(p.max_slope_ratio, p.slopes(j) * r * le);
    }
    double s = 0.0;
    for (auto [r, w] : cutoff_radial_rule(eps, q)) {
        const double d = cutoff_slope(r, eps);
        p.max_slope_ratio = std::max(p.max_slope_ratio, d * r * le);
        s += w * d * d * r;
    }
    p.dirichlet = 2.0 * M_PI * s;
    return p;
}

struct CutoffIndex {
    double base = 0.0;      // I(V, V)
    double cut = 0.0;       // I(rho_eps V, rho_eps V)
    double sup_v = 0.0;     // sup |V|
    double sup_grad = 0.0;  // sup |grad V|
    double constant = 0.0;  // C measured from the fields
    double bound = 0.0;     // C (1/|ln eps| + eps/|ln eps|)
};

// I(rho_eps V, rho_eps V) for an analytic field V, integrating the interior
// term on a composite rule that resolves the transition annulus. The boundary
// terms coincide with those of V since rho_eps = 1 near the rim.
inline CutoffIndex cutoff_index_form(const IndexForm& form, const VariationField& v, double eps, int q = 48) {
    check_epsilon(eps);
    if (!v.field.analytic()) throw InvalidArgument("cutoff index form needs an analytic field");
    const auto data = form.prepare(v);
    form.require_admissible(data);
    const auto parts = form.parts(data, data);
    CutoffIndex out;
    out.base = parts.total();

    const JetEvaluator& ev = v.field.evaluator();
    const int nt = 2 * v.field.grid().n_theta();
    double interior = 0.0;
    for (auto [r, w] : cutoff_radial_rule(eps, q)) {
        const double rho = cutoff_value(r, eps), slope = cutoff_slope(r, eps);
        double ring = 0.0;
        for (int m = 0; m < nt; ++m) {
            const double th = 2.0 * M_PI * m / nt, c = std::cos(th), s = std::sin(th);
            Jet j = ev(r * c, r * s);
            Vec gx = slope * c * j.value + rho * j.dx;
            Vec gy = slope * s * j.value + rho * j.dy;
            ring += gx.squaredNorm() + gy.squaredNorm();
            out.sup_v = std::max(out.sup_v, j.value.norm());
            out.sup_grad = std::max(out.sup_grad, std::sqrt(j.dx.squaredNorm() + j.dy.squaredNorm()));
        }
        interior += w * r * ring * (2.0 * M_PI / nt);
    }
    const auto& g = v.field.grid();
    for (int i = 0; i < g.size(); ++i) {
        out.sup_v = std::max(out.sup_v, data.v.row(i).norm());
        out.sup_grad = std::max(out.sup_grad, std::sqrt(data.vx.row(i).squaredNorm() + data.vy.row(i).squaredNorm()));
    }
    out.cut = 0.5 * (interior + parts.acceleration + parts.rotation);
    out.constant = std::max(M_PI * out.sup_v * out.sup_v,
                            2.0 * M_PI * out.sup_v * out.sup_grad + 0.5 * M_PI * out.sup_grad * out.sup_grad);
    const double le = std::abs(std::log(eps));
    out.bound = out.constant * (1.0 / le + eps / le);
    return out;
}

}  // namespace dbar
