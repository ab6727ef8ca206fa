#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "criticality.hpp"
#include "secondvar.hpp"

namespace dbar {

// ---------------------------------------------------------------------------
// Kernel of (A g)_i = dbar g^i + sum_j a_ij g^j on the disk with Im g = 0 on
// the circle, for C^{2n}-valued g. Each component is expanded in monomials
// z^a zbar^b, a + b <= P; the unknowns are the real and imaginary parts of the
// coefficients. Rows are the exact coefficient map of A (truncated at degree P)
// and Im g at equispaced boundary nodes.

struct KernelProblem {
    int degree = 0;        // P
    int boundary_nodes = 0;
};

inline KernelProblem kernel_problem(int n_r, int n_theta) {
    if (n_r < 4 || n_theta < 8) throw ResolutionError("kernel discretization needs n_r >= 4 and n_theta >= 8");
    KernelProblem kp;
    kp.degree = std::min(n_r, n_theta / 2) / 2;
    kp.boundary_nodes = n_theta;
    if (2 * kp.degree + 1 > kp.boundary_nodes)
        throw ResolutionError("boundary sampling cannot resolve the polynomial degree");
    return kp;
}

namespace detail {

inline std::vector<std::pair<int, int>> monomials(int p) {
    std::vector<std::pair<int, int>> out;
    for (int d = 0; d <= p; ++d)
        for (int b = 0; b <= d; ++b) out.emplace_back(d - b, b);
    return out;
}

// Operator matrix for one connected block of components.
inline Mat kernel_block_matrix(const std::vector<int>& comps, const Mat& coupling, const KernelProblem& kp) {
    const auto mono = monomials(kp.degree);
    const int m = static_cast<int>(mono.size());
    const int nc = static_cast<int>(comps.size());
    std::map<std::pair<int, int>, int> pos;
    for (int i = 0; i < m; ++i) pos[mono[i]] = i;
    // column of (component c, monomial i, real/imag part q)
    auto col = [&](int c, int i, int q) { return (c * m + i) * 2 + q; };
    const int cols = 2 * m * nc;
    const int rows = 2 * m * nc + kp.boundary_nodes * nc;
    Mat a = Mat::Zero(rows, cols);
    int row = 0;
    for (int c = 0; c < nc; ++c) {
        for (int t = 0; t < m; ++t) {
            const auto [ta, tb] = mono[t];
            for (int q = 0; q < 2; ++q) {
                auto it = pos.find({ta, tb + 1});
                if (it != pos.end()) a(row, col(c, it->second, q)) += tb + 1;
                for (int e = 0; e < nc; ++e) {
                    const double w = coupling(comps[c], comps[e]);
                    if (w != 0.0) a(row, col(e, t, q)) += w;
                }
                ++row;
            }
        }
    }
    for (int c = 0; c < nc; ++c)
        for (int k = 0; k < kp.boundary_nodes; ++k) {
            const double th = 2.0 * M_PI * k / kp.boundary_nodes;
            for (int i = 0; i < m; ++i) {
                const double f = mono[i].first - mono[i].second;
                a(row, col(c, i, 0)) = std::sin(f * th);
                a(row, col(c, i, 1)) = std::cos(f * th);
            }
            ++row;
        }
    return a;
}

inline int numerical_nullity(const Mat& a, double rel) {
    Eigen::BDCSVD<Mat> svd(a);
    const Vec& s = svd.singularValues();
    const double cut = rel * (s.size() ? s(0) : 0.0);
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++rank;
    return static_cast<int>(a.cols()) - rank;
}

}  // namespace detail

// Real dimension of the kernel. `coupling` is the 2n x 2n matrix a_ij of a
// constant connection form (zero in the flat trivialization).
inline int dbar_kernel_dimension(int n, int n_r = 32, int n_theta = 64, const Mat& coupling = Mat(), double rel = 1e-8) {
    if (n < 1) throw InvalidArgument("complex dimension must be >= 1");
    const int comps = 2 * n;
    Mat a = coupling.size() ? coupling : Mat::Zero(comps, comps);
    if (a.rows() != comps || a.cols() != comps) throw InvalidArgument("coupling must be 2n x 2n");
    const KernelProblem kp = kernel_problem(n_r, n_theta);

    // connected components of the coupling graph
    std::vector<int> label(comps, -1);
    int blocks = 0;
    for (int s = 0; s < comps; ++s) {
        if (label[s] >= 0) continue;
        std::vector<int> stack{s};
        label[s] = blocks;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < comps; ++v)
                if (label[v] < 0 && (a(u, v) != 0.0 || a(v, u) != 0.0)) {
                    label[v] = blocks;
                    stack.push_back(v);
                }
        }
        ++blocks;
    }

    int total = 0;
    int uncoupled = -1;  // nullity of the scalar problem without coupling, computed once
    for (int b = 0; b < blocks; ++b) {
        std::vector<int> members;
        for (int c = 0; c < comps; ++c)
            if (label[c] == b) members.push_back(c);
        if (members.size() == 1 && a(members[0], members[0]) == 0.0) {
            if (uncoupled < 0) uncoupled = detail::numerical_nullity(detail::kernel_block_matrix(members, a, kp), rel);
            total += uncoupled;
        } else {
            total += detail::numerical_nullity(detail::kernel_block_matrix(members, a, kp), rel);
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Frame of holomorphic sections real on the boundary. In the flat case these
// are the real constants; the selected ones are the x-directions, for which
// {W, JW} is the standard orthonormal basis.

struct HolomorphicFrame {
    int n = 0;
    Mat W;                      // columns W_1..W_2n
    std::vector<int> selected;  // i_1..i_n
    std::vector<CVec> V;        // complex coordinates of V_{i_j} = W - iJW
    double gram_defect = 0.0;   // max |Gram{W_sel, JW_sel} - I|
    double min_norm = 0.0;      // min over selected sections and nodes of |V|
};

inline HolomorphicFrame build_frame(const DiskMap& f, const DefiningFunction& df) {
    const int n = df.n();
    if (n < 2) throw InvalidArgument("holomorphic frame needs n >= 2");
    if (f.dim() != 2 * n) throw InvalidArgument("map target dimension does not match domain");
    ComplexStructure cs(n);
    HolomorphicFrame fr;
    fr.n = n;
    fr.W = Mat::Identity(2 * n, 2 * n);
    Mat basis(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        fr.selected.push_back(j);
        Vec w = fr.W.col(j);
        basis.col(2 * j) = w;
        basis.col(2 * j + 1) = cs.apply(w);
        fr.V.push_back(cs.to_complex(w));
    }
    fr.gram_defect = (basis.transpose() * basis - Mat::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff();
    fr.min_norm = std::numeric_limits<double>::infinity();
    for (const auto& v : fr.V) fr.min_norm = std::min(fr.min_norm, v.norm());  // constant over the grid
    return fr;
}

// ---------------------------------------------------------------------------
// The sections U_j = c_k V_j - c_j V_k, c_j = <<V_j, f_zbar>>, which are
// (1,0), holomorphic when f is harmonic, and orthogonal to f_zbar.

struct USections {
    int pivot = 0;
    std::vector<int> indices;                // j != pivot
    std::vector<VariationField> real_parts;  // X_j with U_j = X_j - iJX_j
    std::vector<DiskMap> coefficients;       // c_j as 2-component real maps
    double coefficient_dbar = 0.0;           // sup |dbar c_j|
    double orthogonality = 0.0;              // sup over the rim of |<<U_j, f_zbar>>|
    double max_dbar_density = 0.0;
};

inline DiskMap apply_j(const DiskMap& f) {
    if (f.analytic()) {
        auto ev = f.evaluator();
        const int n = f.n();
        ComplexStructure cs(n);
        return DiskMap(f.grid(), [ev, cs](double x, double y) {
            Jet j = ev(x, y);
            Jet o;
            o.value = cs.apply(j.value);
            o.dx = cs.apply(j.dx);
            o.dy = cs.apply(j.dy);
            o.has_second = j.has_second;
            if (j.has_second) {
                o.dxx = cs.apply(j.dxx);
                o.dxy = cs.apply(j.dxy);
                o.dyy = cs.apply(j.dyy);
            }
            return o;
        }, f.dim());
    }
    return DiskMap(f.grid(), apply_j_rows(f.values()));
}

inline USections build_U(const HolomorphicFrame& frame, const DiskMap& f, const Tolerances& tol = {}) {
    const int n = frame.n;
    if (f.dim() != 2 * n) throw InvalidArgument("map does not match frame dimension");
    const DiskGrid& g = f.grid();
    ComplexStructure cs(n);
    const DerivativeFields d = derivatives(f);
    USections out;
    out.max_dbar_density = max_dbar_density(d);
    if (!(out.max_dbar_density > tol.holomorphic))
        throw VacuousCertificate("map is holomorphic; the index certificate is vacuous");

    // Pairing c_j = <<V_j, f_zbar>> as a function on the grid and, for
    // analytic maps, as a jet built from the second derivatives of f.
    auto pairing = [V = frame.V, cs](const Vec& fzbar, int j) { return hermitian(V[j], cs.to_complex(fzbar)); };
    std::vector<DiskMap> coeffs;
    for (int j = 0; j < n; ++j) {
        if (f.analytic()) {
            auto ev = f.evaluator();
            coeffs.emplace_back(g, [ev, cs, pairing, j](double x, double y) {
                Jet fj = ev(x, y);
                if (!fj.has_second) throw InvalidArgument("map evaluator lacks second derivatives");
                Vec a = 0.5 * (fj.dx + cs.apply(fj.dy));
                Vec ax = 0.5 * (fj.dxx + cs.apply(fj.dxy));
                Vec ay = 0.5 * (fj.dxy + cs.apply(fj.dyy));
                cplx c = pairing(a, j), cx = pairing(ax, j), cy = pairing(ay, j);
                Jet o;
                o.value = Vec::Zero(2);
                o.dx = Vec::Zero(2);
                o.dy = Vec::Zero(2);
                o.value << c.real(), c.imag();
                o.dx << cx.real(), cx.imag();
                o.dy << cy.real(), cy.imag();
                return o;
            }, 2);
        } else {
            Mat v(g.size(), 2);
            for (int i = 0; i < g.size(); ++i) {
                cplx c = pairing(d.fzbar.row(i).transpose(), j);
                v(i, 0) = c.real();
                v(i, 1) = c.imag();
            }
            coeffs.emplace_back(g, std::move(v));
        }
    }

    // holomorphy of the coefficients; sampled maps skip the outermost rings
    for (const auto& c : coeffs) {
        DerivativeFields dc = derivatives(c);
        for (int i = 0; i < g.size(); ++i) {
            if (!c.analytic() && g.r(i / g.n_theta()) > 0.95) continue;
            out.coefficient_dbar = std::max(out.coefficient_dbar, dc.fzbar.row(i).norm());
        }
    }
    if (!(out.coefficient_dbar < tol.holomorphic))
        throw Refusal("pairing coefficients are not holomorphic (map is not harmonic)");

    std::vector<double> sup(n, 0.0);
    for (int j = 0; j < n; ++j) sup[j] = coeffs[j].values().rowwise().norm().maxCoeff();
    out.pivot = static_cast<int>(std::max_element(sup.begin(), sup.end()) - sup.begin());
    if (!(sup[out.pivot] > tol.holomorphic)) throw DegeneratePivot("all pairings with f_zbar vanish identically");
    const int k = out.pivot;

    for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        const CVec vj = frame.V[j], vk = frame.V[k];
        auto make_vec = [cs, vj, vk](cplx ck, cplx cj) { return cs.from_complex(ck * vj - cj * vk); };
        DiskMap x = [&]() {
            if (coeffs[k].analytic() && coeffs[j].analytic()) {
                auto ek = coeffs[k].evaluator(), ej = coeffs[j].evaluator();
                return DiskMap(g, [ek, ej, make_vec](double px, double py) {
                    Jet a = ek(px, py), b = ej(px, py);
                    auto c = [](const Vec& v) { return cplx(v(0), v(1)); };
                    Jet o;
                    o.value = make_vec(c(a.value), c(b.value));
                    o.dx = make_vec(c(a.dx), c(b.dx));
                    o.dy = make_vec(c(a.dy), c(b.dy));
                    return o;
                }, 2 * n);
            }
            Mat v(g.size(), 2 * n);
            for (int i = 0; i < g.size(); ++i) {
                const auto& a = coeffs[k].values();
                const auto& b = coeffs[j].values();
                v.row(i) = make_vec(cplx(a(i, 0), a(i, 1)), cplx(b(i, 0), b(i, 1))).transpose();
            }
            return DiskMap(g, std::move(v));
        }();
        for (int m = 0; m < g.n_theta(); ++m) {
            const int i = g.rim_index(m);
            cplx p = hermitian(cs.to_complex(x.values().row(i).transpose()), cs.to_complex(d.fzbar.row(i).transpose()));
            out.orthogonality = std::max(out.orthogonality, std::abs(p));
        }
        out.indices.push_back(j);
        out.real_parts.emplace_back(std::move(x), "U" + std::to_string(j + 1));
    }
    out.coefficients = std::move(coeffs);
    return out;
}

// Re U_j and Im U_j = -J X_j as real variation fields.
inline std::vector<VariationField> u_real_fields(const USections& u) {
    std::vector<VariationField> out;
    for (const auto& x : u.real_parts) {
        out.emplace_back(x.field, "Re(" + x.label + ")");
        out.emplace_back(apply_j(x.field).combine(-1.0, x.field, 0.0), "Im(" + x.label + ")");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Index certificates

enum class CertifyMode { pseudoconvex, k_pseudoconvex };

inline std::string to_string(CertifyMode m) { return m == CertifyMode::pseudoconvex ? "pc" : "kpc"; }

struct Certificate {
    CertifyMode mode = CertifyMode::pseudoconvex;
    int k = 1;
    int pivot = 0;
    std::vector<std::string> labels;
    std::vector<double> values;          // I(U_j, U_j), complex form
    std::vector<double> real_values;     // I(Re U_j) + I(Im U_j)
    std::vector<int> real_negative;      // 1 when Re U_j or Im U_j is a negative direction
    double crosscheck = 0.0;             // max relative mismatch between the two
    double max_subset_sum = 0.0;         // kpc: largest k-subset sum
    bool subsets_negative = false;
    int certified_bound = 0;
    double orthogonality = 0.0;
    double coefficient_dbar = 0.0;
    Classification domain_classification;
    USections sections;
};

inline Certificate certify_index(const DiskMap& f, const DefiningFunction& df, CertifyMode mode, int k = 1,
                                 const Tolerances& tol = {}) {
    const int n = df.n();
    if (n < 2) throw Refusal("index certificate needs n >= 2");
    if (mode == CertifyMode::pseudoconvex) k = 1;
    if (k < 1 || k > n - 1) throw InvalidArgument("k must satisfy 1 <= k <= n-1");

    CriticalityReport crit;
    try {
        crit = is_critical(f, df, tol);
    } catch (const ConstraintViolation& e) {
        throw Refusal(std::string("map is not critical: ") + e.what());
    }
    if (!crit.critical)
        throw Refusal("map is not critical (harmonic residual " + std::to_string(crit.harmonic_residual) +
                      ", boundary residual " + std::to_string(crit.boundary_residual) + ")");

    Certificate cert;
    cert.mode = mode;
    cert.k = k;
    std::vector<Vec> samples;
    const Mat rim = f.boundary_trace();
    for (int m = 0; m < rim.rows(); ++m) samples.push_back(rim.row(m).transpose());
    cert.domain_classification = classify_pseudoconvexity(df, samples, k, tol);
    if (cert.domain_classification.kind != Convexity::strict)
        throw Refusal("domain is not strictly " + std::string(k == 1 ? "" : std::to_string(k) + "-") +
                      "pseudoconvex along the boundary image (classified " +
                      to_string(cert.domain_classification.kind) + ", margin " +
                      std::to_string(cert.domain_classification.margin) + ")");

    const HolomorphicFrame frame = build_frame(f, df);
    cert.sections = build_U(frame, f, tol);
    cert.pivot = cert.sections.pivot;
    cert.orthogonality = cert.sections.orthogonality;
    cert.coefficient_dbar = cert.sections.coefficient_dbar;

    const IndexForm form(f, df, tol);
    const auto reals = u_real_fields(cert.sections);
    for (std::size_t j = 0; j < cert.sections.real_parts.size(); ++j) {
        const double v = form.complex(cert.sections.real_parts[j]);
        const double re = form.real(reals[2 * j]);
        const double im = form.real(reals[2 * j + 1]);
        cert.labels.push_back(cert.sections.real_parts[j].label);
        cert.values.push_back(v);
        cert.real_values.push_back(re + im);
        cert.real_negative.push_back((re < -tol.index_value || im < -tol.index_value) ? 1 : 0);
        const double scale = std::max(std::abs(v), 1.0);
        cert.crosscheck = std::max(cert.crosscheck, std::abs(v - (re + im)) / scale);
    }

    if (mode == CertifyMode::pseudoconvex) {
        cert.certified_bound =
            static_cast<int>(std::count_if(cert.values.begin(), cert.values.end(), [&](double v) { return v < -tol.index_value; }));
        cert.subsets_negative = cert.certified_bound == static_cast<int>(cert.values.size());
        cert.max_subset_sum = cert.values.empty() ? 0.0 : *std::max_element(cert.values.begin(), cert.values.end());
    } else {
        // every k-subset of the n-1 values must sum negative; then at most k-1
        // of them are nonnegative, leaving n-k negative directions.
        const int m = static_cast<int>(cert.values.size());
        if (k > m) throw Refusal("k exceeds the number of sections");
        std::vector<double> sorted = cert.values;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        // the largest subset sum is the sum of the k largest values
        cert.max_subset_sum = std::accumulate(sorted.begin(), sorted.begin() + k, 0.0);
        cert.subsets_negative = cert.max_subset_sum < -tol.index_value;
        cert.certified_bound = cert.subsets_negative ? m - (k - 1) : 0;
    }
    return cert;
}

}  // namespace dbar
