#include "sphx/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sphx {

namespace {

constexpr cplx I{0.0, 1.0};

bool is_noncompact_realization(const std::string& r) {
    return r == "sl2r" || r == "sl2c" || r == "sl3r" || r == "h2xh2";
}

/// Coordinates on the A2 flat: h(x) = x1*(1,-1,0)/sqrt2 + x2*(1,1,-2)/sqrt6.
Eigen::Vector3d a2_h_triple(const Vec& x) {
    Eigen::Vector3d h;
    double s2 = 1.0 / std::sqrt(2.0), s6 = 1.0 / std::sqrt(6.0);
    h << x(0) * s2 + x(1) * s6, -x(0) * s2 + x(1) * s6, -2.0 * x(1) * s6;
    return h;
}

Eigen::Vector3d a2_lift_functional(const Vec& lam) {
    // Functional lift: lam(h) = lift . (h1,h2,h3) with sum(lift)=0.
    Eigen::Vector3d l;
    double s2 = 1.0 / std::sqrt(2.0), s6 = 1.0 / std::sqrt(6.0);
    l << lam(0) * s2 + lam(1) * s6, -lam(0) * s2 + lam(1) * s6, -2.0 * lam(1) * s6;
    return l;
}

Mat rot2(double a) {
    Mat k(2, 2);
    k << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
    return k;
}

} // namespace

Eigen::Vector3d su3_torus_angles(const Vec& x) { return a2_h_triple(x); }

// ---------------------------------------------------------------------------
// Realizations
// ---------------------------------------------------------------------------

GroupElement exp_cartan(const SpaceDescriptor& s, const Vec& H) {
    GroupElement g;
    g.space_id = s.id;
    if (s.realization == "sl2r") {
        g.real_mat = Mat::Zero(2, 2);
        g.real_mat(0, 0) = std::exp(H(0) / 2);
        g.real_mat(1, 1) = std::exp(-H(0) / 2);
    } else if (s.realization == "sl2c") {
        g.complex_flag = true;
        g.cplx_mat = Eigen::MatrixXcd::Zero(2, 2);
        g.cplx_mat(0, 0) = std::exp(H(0) / 2);
        g.cplx_mat(1, 1) = std::exp(-H(0) / 2);
    } else if (s.realization == "sl3r") {
        Eigen::Vector3d h = a2_h_triple(H);
        g.real_mat = Mat::Zero(3, 3);
        for (int i = 0; i < 3; ++i) g.real_mat(i, i) = std::exp(h(i));
    } else if (s.realization == "h2xh2") {
        g.real_mat = Mat::Zero(4, 4);
        g.real_mat(0, 0) = std::exp(H(0) / 2);
        g.real_mat(1, 1) = std::exp(-H(0) / 2);
        g.real_mat(2, 2) = std::exp(H(1) / 2);
        g.real_mat(3, 3) = std::exp(-H(1) / 2);
    } else if (s.realization == "s2") {
        // Rotation about the polar axis: moves the base point (1,0,0) along the
        // equatorial torus.
        g.real_mat = Mat::Identity(3, 3);
        g.real_mat(0, 0) = std::cos(H(0));
        g.real_mat(0, 1) = -std::sin(H(0));
        g.real_mat(1, 0) = std::sin(H(0));
        g.real_mat(1, 1) = std::cos(H(0));
    } else if (s.realization == "su2") {
        g.complex_flag = true;
        g.cplx_mat = Eigen::MatrixXcd::Zero(2, 2);
        g.cplx_mat(0, 0) = std::exp(I * H(0));
        g.cplx_mat(1, 1) = std::exp(-I * H(0));
    } else if (s.realization == "su3") {
        Eigen::Vector3d th = a2_h_triple(H);
        g.complex_flag = true;
        g.cplx_mat = Eigen::MatrixXcd::Zero(3, 3);
        for (int i = 0; i < 3; ++i) g.cplx_mat(i, i) = std::exp(I * th(i));
    } else {
        throw std::invalid_argument("exp_cartan: unknown realization " + s.realization);
    }
    return g;
}

GroupElement group_identity(const SpaceDescriptor& s) { return exp_cartan(s, Vec::Zero(s.r)); }

GroupElement group_multiply(const GroupElement& a, const GroupElement& b) {
    if (a.space_id != b.space_id) throw std::invalid_argument("group_multiply: space mismatch");
    GroupElement g = a;
    if (a.complex_flag)
        g.cplx_mat = a.cplx_mat * b.cplx_mat;
    else
        g.real_mat = a.real_mat * b.real_mat;
    return g;
}

double GroupElement::realization_residual(const SpaceDescriptor& s) const {
    if (s.realization == "sl2r" || s.realization == "sl3r")
        return std::abs(real_mat.determinant() - 1.0);
    if (s.realization == "h2xh2") {
        double d1 = real_mat.block(0, 0, 2, 2).determinant();
        double d2 = real_mat.block(2, 2, 2, 2).determinant();
        return std::abs(d1 - 1.0) + std::abs(d2 - 1.0);
    }
    if (s.realization == "sl2c") return std::abs(cplx_mat.determinant() - 1.0);
    if (s.realization == "s2")
        return (real_mat * real_mat.transpose() - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() +
               std::abs(real_mat.determinant() - 1.0);
    if (s.realization == "su2" || s.realization == "su3") {
        int d = int(cplx_mat.rows());
        return (cplx_mat * cplx_mat.adjoint() - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() +
               std::abs(cplx_mat.determinant() - 1.0);
    }
    throw std::invalid_argument("realization_residual: unknown realization");
}

namespace {

/// UDU^T factorization of an SPD matrix from the bottom-right corner: S = U D U^T
/// with U unit upper triangular; corresponds to g = n a k with n in N (positive
/// root spaces).
template <typename MatT>
void udu_from_bottom(const MatT& S, Eigen::VectorXd& d, MatT& U) {
    int n = int(S.rows());
    MatT A = S;
    U = MatT::Identity(n, n);
    d.resize(n);
    for (int k = n - 1; k >= 0; --k) {
        double dk = std::real(A(k, k));
        if (!(dk > 0)) throw std::runtime_error("iwasawa: factorization breakdown (g outside realization?)");
        d(k) = dk;
        for (int i = 0; i < k; ++i) U(i, k) = A(i, k) / dk;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) A(i, j) -= U(i, k) * dk * Eigen::numext::conj(U(j, k));
    }
}

Vec h_triple_to_coords(const Eigen::Vector3d& h) {
    Vec x(2);
    x(0) = (h(0) - h(1)) / std::sqrt(2.0);
    x(1) = (h(0) + h(1) - 2.0 * h(2)) / std::sqrt(6.0);
    return x;
}

} // namespace

Vec iwasawa_H(const SpaceDescriptor& s, const GroupElement& g) {
    if (!is_noncompact_realization(s.realization))
        throw std::invalid_argument("iwasawa_H: noncompact realizations only");
    if (s.realization == "sl2r") {
        Mat S = g.real_mat * g.real_mat.transpose();
        Eigen::VectorXd d;
        Mat U;
        udu_from_bottom(S, d, U);
        Vec x(1);
        x(0) = 0.5 * (std::log(d(0)) - std::log(d(1)));
        return x;
    }
    if (s.realization == "sl2c") {
        Eigen::MatrixXcd S = g.cplx_mat * g.cplx_mat.adjoint();
        Eigen::VectorXd d;
        Eigen::MatrixXcd U;
        udu_from_bottom(S, d, U);
        Vec x(1);
        x(0) = 0.5 * (std::log(d(0)) - std::log(d(1)));
        return x;
    }
    if (s.realization == "sl3r") {
        Mat S = g.real_mat * g.real_mat.transpose();
        Eigen::VectorXd d;
        Mat U;
        udu_from_bottom(S, d, U);
        Eigen::Vector3d h;
        for (int i = 0; i < 3; ++i) h(i) = 0.5 * std::log(d(i));
        return h_triple_to_coords(h);
    }
    // h2xh2: blockwise.
    Vec x(2);
    for (int b = 0; b < 2; ++b) {
        Mat blk = g.real_mat.block(2 * b, 2 * b, 2, 2);
        Mat S = blk * blk.transpose();
        Eigen::VectorXd d;
        Mat U;
        udu_from_bottom(S, d, U);
        x(b) = 0.5 * (std::log(d(0)) - std::log(d(1)));
    }
    return x;
}

double iwasawa_residual(const SpaceDescriptor& s, const GroupElement& g) {
    auto resid = [](const auto& m) {
        using MatT = std::decay_t<decltype(m)>;
        MatT S = m * m.adjoint();
        Eigen::VectorXd d;
        MatT U;
        udu_from_bottom(S, d, U);
        MatT A = MatT::Zero(m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i) A(i, i) = std::sqrt(d(i));
        MatT K = A.inverse() * U.inverse() * m;
        double orth = (K * K.adjoint() - MatT::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
        double rec = (U * A * K - m).cwiseAbs().maxCoeff();
        return rec + orth;
    };
    if (s.realization == "sl2r" || s.realization == "sl3r") return resid(g.real_mat);
    if (s.realization == "sl2c") return resid(g.cplx_mat);
    if (s.realization == "h2xh2") {
        Mat b1 = g.real_mat.block(0, 0, 2, 2), b2 = g.real_mat.block(2, 2, 2, 2);
        return resid(b1) + resid(b2);
    }
    throw std::invalid_argument("iwasawa_residual: noncompact realizations only");
}

GroupElement weyl_representative(const SpaceDescriptor& s, int w) {
    GroupElement g;
    g.space_id = s.id;
    auto signed_perm = [&](int dim, const std::vector<int>& sigma) {
        // P with P(sigma[j], j) = 1; determinant fixed to +1 by negating row 0.
        Mat P = Mat::Zero(dim, dim);
        for (int j = 0; j < dim; ++j) P(sigma[j], j) = 1.0;
        if (P.determinant() < 0) P.row(sigma[0]) *= -1.0;
        return P;
    };
    // Identify the diagonal-entry permutation from the coordinate action on a
    // generic flat vector.
    if (s.realization == "sl2r" || s.realization == "sl2c" || s.realization == "su2") {
        Vec h(1);
        h << 0.7;
        Vec img = s.weyl.elements[w] * h;
        bool flip = img(0) < 0;
        if (s.realization == "sl2r") {
            g.real_mat = flip ? rot2(M_PI / 2) : Mat::Identity(2, 2);
        } else {
            g.complex_flag = true;
            g.cplx_mat = Eigen::MatrixXcd::Identity(2, 2);
            if (flip) {
                g.cplx_mat.setZero();
                g.cplx_mat(0, 1) = -1.0;
                g.cplx_mat(1, 0) = 1.0;
            }
        }
        return g;
    }
    if (s.realization == "sl3r") {
        Vec x(2);
        x << 0.37, 0.81;
        Eigen::Vector3d h = a2_h_triple(x);
        Eigen::Vector3d hi = a2_h_triple(s.weyl.elements[w] * x);
        std::vector<int> sigma(3, -1);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (std::abs(hi(i) - h(j)) < 1e-9 && sigma[j] < 0) {
                    // hi = P h with P(i, j) = 1.
                    sigma[j] = i;
                    break;
                }
        for (int j = 0; j < 3; ++j)
            if (sigma[j] < 0) throw std::logic_error("weyl_representative: permutation not found");
        g.real_mat = signed_perm(3, sigma);
        return g;
    }
    if (s.realization == "h2xh2") {
        Vec h(2);
        h << 0.7, 0.9;
        Vec img = s.weyl.elements[w] * h;
        g.real_mat = Mat::Identity(4, 4);
        for (int b = 0; b < 2; ++b)
            if (img(b) < 0) g.real_mat.block(2 * b, 2 * b, 2, 2) = rot2(M_PI / 2);
        return g;
    }
    throw std::invalid_argument("weyl_representative: unsupported realization " + s.realization);
}

// ---------------------------------------------------------------------------
// Noncompact spherical functions
// ---------------------------------------------------------------------------

namespace {

/// H2: trapezoid over K = SO(2), integrand through the matrix Iwasawa projection.
cplx phi_h2_nodes(const SpaceDescriptor& s, double t, double lam, double x, int N) {
    GroupElement a = exp_cartan(s, (Vec(1) << x).finished());
    cplx rho_it_lam = cplx(s.roots.rho(0), 0.0) + I * t * lam;
    cplx acc = 0;
    GroupElement ka = a;
    for (int j = 0; j < N; ++j) {
        double psi = 2.0 * M_PI * j / N;
        ka.real_mat = rot2(psi) * a.real_mat;
        Vec h = iwasawa_H(s, ka);
        acc += std::exp(rho_it_lam * h(0));
    }
    return acc / double(N);
}

/// H3: the K-integral collapses to |k_21|^2 ~ Uniform[0,1]; exponent -(1+ i t lam).
cplx phi_h3_nodes(double t, double lam, double x, int N) {
    GaussLegendre gl(N);
    cplx e = -(cplx(1.0, 0.0) + I * t * lam);
    cplx acc = 0;
    for (int j = 0; j < N; ++j) {
        double u = 0.5 * (gl.x[j] + 1.0);
        double base = u * std::exp(x) + (1.0 - u) * std::exp(-x);
        acc += gl.w[j] * 0.5 * std::exp(e * std::log(base));
    }
    return acc;
}

/// Tabulated J_E(rho) = (1/2pi) int (1 + rho cos phi)^E dphi on a grid uniform in
/// v = log(1-rho), where the table phase advances at constant rate |Im E|.
struct JTable {
    cplx E;
    double vmin = 0;
    int n = 0;
    std::vector<cplx> val;

    JTable(cplx E_, double rho_max) : E(E_) {
        rho_max = std::min(rho_max, 1.0 - 1e-12);
        vmin = std::log1p(-rho_max);
        double imE = std::abs(E.imag());
        n = 16 + int(imE * std::abs(vmin) / 0.05);
        val.resize(n);
        for (int k = 0; k < n; ++k) {
            double v = vmin * (1.0 - double(k) / (n - 1));
            double rho = -std::expm1(v);
            val[k] = entry(rho);
        }
    }

    cplx entry(double rho) const {
        if (rho < 1e-14) return cplx(1.0, 0.0);
        double osc = std::abs(E.imag()) * std::log((1.0 + rho) / (1.0 - rho));
        int N = 64 + int(2.5 * osc);
        cplx acc = 0;
        for (int j = 0; j < N; ++j) {
            double phi = 2.0 * M_PI * j / N;
            acc += std::exp(E * std::log(1.0 + rho * std::cos(phi)));
        }
        return acc / double(N);
    }

    cplx eval(double rho) const {
        // Clamp into the tabulated range; rounding noise in R^2 can push rho a
        // hair past the analytic bound tanh(h_max - h_min).
        rho = std::clamp(rho, 0.0, -std::expm1(vmin));
        if (rho < 1e-14) return cplx(1.0, 0.0);
        double v = std::log1p(-rho);
        double u = (1.0 - v / vmin) * (n - 1);   // grid position
        int i = std::clamp(int(std::floor(u)), 1, n - 3);
        double f = u - i;
        // Catmull-Rom through val[i-1..i+2].
        auto cr = [&](const cplx& p0, const cplx& p1, const cplx& p2, const cplx& p3) {
            return p1 + 0.5 * f * (p2 - p0 + f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + f * (3.0 * (p1 - p2) + p3 - p0)));
        };
        return cr(val[i - 1], val[i], val[i + 1], val[i + 2]);
    }
};

/// SL3R: phi = (1/4pi) int_{S^2} (u C^{-1} u)^{E1} A0^{E2} J_{E2}(R/A0) dsigma(u),
/// from splitting Haar measure on SO(3) into (row1, row3) = flag coordinates and
/// integrating the row3 circle analytically into J.
struct Sl3Evaluator {
    Eigen::Vector3d e2h;     // exp(2 h_i)
    Eigen::Vector3d e2hi;    // exp(-2 h_i)
    double trC;
    cplx E1, E2;
    JTable jt;

    Sl3Evaluator(const Vec& H, double t, const Vec& lam)
        : jt(make_E2(t, lam), rho_bound(H)) {
        Eigen::Vector3d h = a2_h_triple(H);
        for (int i = 0; i < 3; ++i) {
            e2h(i) = std::exp(2.0 * h(i));
            e2hi(i) = std::exp(-2.0 * h(i));
        }
        trC = e2h.sum();
        Eigen::Vector3d rho_lift(1.0, 0.0, -1.0);   // rho(h) = h1 - h3
        Eigen::Vector3d ll = a2_lift_functional(lam);
        Eigen::Vector3cd c = rho_lift.cast<cplx>() + I * t * ll.cast<cplx>();
        E1 = 0.5 * (c(1) - c(0));
        E2 = 0.5 * (c(2) - c(1));
    }

    static cplx make_E2(double t, const Vec& lam) {
        Eigen::Vector3d rho_lift(1.0, 0.0, -1.0);
        Eigen::Vector3d ll = a2_lift_functional(lam);
        Eigen::Vector3cd c = rho_lift.cast<cplx>() + I * t * ll.cast<cplx>();
        return 0.5 * (c(2) - c(1));
    }

    static double rho_bound(const Vec& H) {
        Eigen::Vector3d h = a2_h_triple(H);
        double spread = h.maxCoeff() - h.minCoeff();
        return std::min(1.0 - 1e-12, std::tanh(spread) + 1e-12);
    }

    cplx point(double c3, double phi) const {
        double st = std::sqrt(std::max(0.0, 1.0 - c3 * c3));
        Eigen::Vector3d u(st * std::cos(phi), st * std::sin(phi), c3);
        double uCu = e2h(0) * u(0) * u(0) + e2h(1) * u(1) * u(1) + e2h(2) * u(2) * u(2);
        double uCiu = e2hi(0) * u(0) * u(0) + e2hi(1) * u(1) * u(1) + e2hi(2) * u(2) * u(2);
        double A0 = 0.5 * (trC - uCu);
        double R2 = std::max(A0 * A0 - uCiu, 0.0);
        double rho = std::sqrt(R2) / A0;
        return std::exp(E1 * std::log(uCiu) + E2 * std::log(A0)) * jt.eval(rho);
    }

    cplx integrate(int n_theta) const {
        GaussLegendre gl(n_theta);
        int nphi = 2 * n_theta;
        cplx acc = 0;
        for (int i = 0; i < n_theta; ++i) {
            cplx row = 0;
            for (int j = 0; j < nphi; ++j) row += point(gl.x[i], 2.0 * M_PI * j / nphi);
            acc += gl.w[i] * row / double(nphi);
        }
        return acc / 2.0;   // GL weights sum to 2; phi average already applied.
    }
};

} // namespace

EvalResult phi_noncompact(const SpaceDescriptor& s, const SpectralParameter& lam,
                          const ChamberVector& H, const QuadratureSpec& q) {
    if (s.compact()) throw std::invalid_argument("phi_noncompact: space is compact");
    double t = lam.scale;
    const Vec& x = H.coords;

    if (s.realization == "sl2r" || s.realization == "sl2c") {
        double freq = t * std::abs(lam.direction(0)) * std::max(std::abs(x(0)), 0.5);
        int base = std::max(q.points_per_dim, int(2.0 * freq) + 32);
        auto eval = [&](int n) {
            return s.realization == "sl2r" ? phi_h2_nodes(s, t, lam.direction(0), x(0), n)
                                           : phi_h3_nodes(t, lam.direction(0), x(0), n);
        };
        QuadratureSpec qq = q;
        qq.points_per_dim = base;
        return adaptive_doubling(eval, qq);
    }
    if (s.realization == "sl3r") {
        Sl3Evaluator ev(x, t, lam.direction);
        Eigen::Vector3d h = a2_h_triple(x);
        double freq = t * lam.direction.norm() * std::max(h.maxCoeff() - h.minCoeff(), 0.5);
        int base = std::max(q.points_per_dim, int(1.2 * freq) + 24);
        QuadratureSpec qq = q;
        qq.points_per_dim = base;
        qq.max_doublings = std::min(q.max_doublings, 4);
        auto eval = [&](int n) { return ev.integrate(n); };
        EvalResult r = adaptive_doubling(eval, qq, /*nodes_per_call_dim=*/2);
        return r;
    }
    if (s.realization == "h2xh2") {
        const SpaceDescriptor& h2 = catalog_space("H2");
        EvalResult total;
        total.value = 1.0;
        for (int b = 0; b < 2; ++b) {
            SpectralParameter lb{(Vec(1) << lam.direction(b)).finished(), t};
            ChamberVector Hb{(Vec(1) << x(b)).finished(), false};
            EvalResult rb = phi_noncompact(h2, lb, Hb, q);
            total.value *= rb.value;
            total.abs_error_est += rb.abs_error_est;
            total.nodes_used += rb.nodes_used;
            total.converged = total.converged && rb.converged;
        }
        return total;
    }
    throw std::invalid_argument("phi_noncompact: unsupported realization " + s.realization);
}

// ---------------------------------------------------------------------------
// Compact spherical functions
// ---------------------------------------------------------------------------

double legendre_p(long ell, double x) {
    if (ell < 0) throw std::invalid_argument("legendre_p: ell >= 0");
    double p0 = 1.0, p1 = x;
    if (ell == 0) return p0;
    for (long n = 2; n <= ell; ++n) {
        double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double chebyshev_u(long n, double x) {
    if (n < 0) throw std::invalid_argument("chebyshev_u: n >= 0");
    double u0 = 1.0, u1 = 2.0 * x;
    if (n == 0) return u0;
    for (long k = 2; k <= n; ++k) {
        double u2 = 2.0 * x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    return u1;
}

namespace {

/// Complete homogeneous sums h_k(z1,z2,z3) by the elementary-symmetric linear
/// recurrence; a polynomial identity, stable at coincident z (torus walls).
std::vector<cplx> homogeneous_sums(const Eigen::Vector3cd& z, long kmax) {
    cplx e1 = z(0) + z(1) + z(2);
    cplx e2 = z(0) * z(1) + z(0) * z(2) + z(1) * z(2);
    cplx e3 = z(0) * z(1) * z(2);
    std::vector<cplx> h(std::max<long>(kmax + 1, 3), 0.0);
    h[0] = 1.0;
    if (kmax >= 1) h[1] = e1;
    if (kmax >= 2) h[2] = e1 * e1 - e2;
    for (long k = 3; k <= kmax; ++k) h[k] = e1 * h[k - 1] - e2 * h[k - 2] + e3 * h[k - 3];
    return h;
}

std::pair<long, long> su3_labels(const SpaceDescriptor& s, const Vec& mu) {
    // a = <mu, alpha1>/<alpha1,alpha1>, b likewise; must be nonnegative integers.
    const auto& rs = s.roots;
    double a = mu.dot(rs.simple(0).coords) / rs.simple(0).coords.squaredNorm();
    double b = mu.dot(rs.simple(1).coords) / rs.simple(1).coords.squaredNorm();
    long la = std::lround(a), lb = std::lround(b);
    if (std::abs(a - la) > 1e-6 || std::abs(b - lb) > 1e-6 || la < 0 || lb < 0)
        throw std::invalid_argument("su3: mu is not a dominant lattice weight");
    return {la, lb};
}

} // namespace

double su3_dimension(long a, long b) { return double((a + 1) * (b + 1)) * double(a + b + 2) / 2.0; }

cplx su3_character(long a, long b, const Vec& x) {
    Eigen::Vector3d th = a2_h_triple(x);
    Eigen::Vector3cd z;
    for (int i = 0; i < 3; ++i) z(i) = std::exp(I * th(i));
    // Jacobi-Trudi for the partition (a+b, b, 0): 2x2 determinant after the
    // trivial last row.
    auto h = homogeneous_sums(z, a + b + 1);
    cplx hbm1 = (b >= 1) ? h[b - 1] : cplx(0.0, 0.0);
    return h[a + b] * h[b] - h[a + b + 1] * hbm1;
}

cplx character_alternating_sum(const SpaceDescriptor& s, const Vec& mu, const Vec& x) {
    const auto& W = s.weyl;
    Vec rho = s.roots.rho;
    cplx num = 0, den = 0;
    for (int w = 0; w < W.order(); ++w) {
        double sign = W.det_sign(w);
        Vec wmr = W.elements[w] * (mu + rho);
        Vec wr = W.elements[w] * rho;
        num += sign * std::exp(I * wmr.dot(x));
        den += sign * std::exp(I * wr.dot(x));
    }
    if (std::abs(den) < 1e-10) throw std::runtime_error("character_alternating_sum: on a wall");
    return num / den;
}

EvalResult phi_compact(const SpaceDescriptor& s, const SpectralParameter& mu,
                       const ChamberVector& h, const QuadratureSpec&) {
    if (!s.compact()) throw std::invalid_argument("phi_compact: space is noncompact");
    Vec muv = mu.direction * mu.scale;
    EvalResult r;
    if (s.realization == "s2") {
        long ell = std::lround(muv(0));
        if (std::abs(muv(0) - ell) > 1e-6 || ell < 0)
            throw std::invalid_argument("s2: mu is not a lattice weight");
        r.value = legendre_p(ell, std::cos(h.coords(0)));
        r.nodes_used = ell + 1;
        r.abs_error_est = 1e-14 * (ell + 1.0);
        return r;
    }
    if (s.realization == "su2") {
        long n = std::lround(muv(0));
        if (std::abs(muv(0) - n) > 1e-6 || n < 0)
            throw std::invalid_argument("su2: mu is not a lattice weight");
        r.value = chebyshev_u(n, std::cos(h.coords(0))) / double(n + 1);
        r.nodes_used = n + 1;
        r.abs_error_est = 1e-14 * (n + 1.0);
        return r;
    }
    if (s.realization == "su3") {
        auto [a, b] = su3_labels(s, muv);
        r.value = su3_character(a, b, h.coords) / su3_dimension(a, b);
        r.nodes_used = a + b + 2;
        r.abs_error_est = 1e-13 * (a + b + 2.0);
        return r;
    }
    throw std::invalid_argument("phi_compact: unsupported realization " + s.realization);
}

double weyl_dimension_factor(const SpaceDescriptor& s, const Vec& mu) {
    const auto& rs = s.roots;
    double prod = 1.0;
    for (auto& a : rs.positive) {
        double num = (mu + rs.rho).dot(a.coords);
        double den = rs.rho.dot(a.coords);
        prod *= num / den;
    }
    return prod;
}

double weyl_dimension(const SpaceDescriptor& s, const Vec& mu) {
    if (!s.compact()) throw std::invalid_argument("weyl_dimension: compact spaces only");
    const auto& rs = s.roots;
    for (auto& a : rs.positive) {
        double ratio = mu.dot(a.coords) / a.coords.squaredNorm();
        if (ratio < -1e-9 || std::abs(ratio - std::lround(ratio)) > 1e-6)
            throw std::invalid_argument("weyl_dimension: mu is not a dominant lattice weight");
    }
    double prod = 1.0;
    for (auto& a : rs.positive) {
        double ratio = (mu + rs.rho).dot(a.coords) / rs.rho.dot(a.coords);
        for (int m = 0; m < a.multiplicity; ++m) prod *= ratio;
    }
    double rounded = std::round(prod);
    if (std::abs(prod - rounded) > 1e-6 * std::max(1.0, std::abs(prod)))
        throw std::logic_error("weyl_dimension: non-integer output signals normalization bug");
    return rounded;
}

// ---------------------------------------------------------------------------
// Beams
// ---------------------------------------------------------------------------

namespace {

cplx ipow(cplx z, long n) {
    cplx r = 1.0;
    while (n > 0) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

std::vector<long> beam_labels(const SpaceDescriptor& s, const SpectralParameter& mu) {
    Vec muv = mu.direction * mu.scale;
    if (s.realization == "s2" || s.realization == "su2") {
        long l = std::lround(muv(0));
        if (std::abs(muv(0) - l) > 1e-6 || l < 0) throw std::invalid_argument("beam: non-lattice weight");
        return {l};
    }
    if (s.realization == "su3") {
        auto [a, b] = su3_labels(s, muv);
        return {a, b};
    }
    throw std::invalid_argument("beam: compact catalog spaces only");
}

} // namespace

cplx beam_eval_s2(const BeamFunction& b, double theta, double phi) {
    const auto& s = catalog_space(b.space_id);
    long ell = beam_labels(s, b.mu)[0];
    return std::pow(std::sin(theta), double(ell)) * std::exp(I * double(ell) * phi);
}

cplx beam_eval(const BeamFunction& b, const GroupElement& u) {
    const auto& s = catalog_space(b.space_id);
    if (u.space_id != b.space_id) throw std::invalid_argument("beam_eval: space mismatch");
    if (u.realization_residual(s) > 1e-8) throw std::invalid_argument("beam_eval: point not in the realization group");
    auto lab = beam_labels(s, b.mu);
    if (s.realization == "s2") {
        Eigen::Vector3d p = u.real_mat * Eigen::Vector3d(1, 0, 0);
        double theta = std::acos(std::clamp(p(2), -1.0, 1.0));
        double phi = std::atan2(p(1), p(0));
        return beam_eval_s2(b, theta, phi);
    }
    if (s.realization == "su2") return ipow(u.cplx_mat(0, 0), lab[0]);
    // su3: highest-weight coefficient = product of leading principal minors.
    cplx d1 = u.cplx_mat(0, 0);
    cplx d2 = u.cplx_mat(0, 0) * u.cplx_mat(1, 1) - u.cplx_mat(0, 1) * u.cplx_mat(1, 0);
    return ipow(d1, lab[0]) * ipow(d2, lab[1]);
}

double beam_lp(const SpaceDescriptor& s, long ell, double p) {
    if (p < 1) throw std::invalid_argument("beam_lp: p >= 1");
    if (s.realization == "s2") {
        // (1/2) int_0^pi sin(theta)^{l p + 1}; integrand peaked at the equator.
        double k = double(ell) * p + 1.0;
        double w = std::min(M_PI / 2, 10.0 / std::sqrt(k + 1.0));
        double v = gl_integrate([&](double u) { return std::pow(std::cos(u), k); }, -w, w, 240) / 2.0;
        return std::pow(v, 1.0 / p);
    }
    if (s.realization == "su2") {
        // |u_11|^2 is uniform on [0,1] under Haar measure.
        return std::pow(2.0 / (double(ell) * p + 2.0), 1.0 / p);
    }
    throw std::invalid_argument("beam_lp: supported on S2 and SU2group");
}

FitReport beam_l2_lower(const SpaceDescriptor& s, const std::vector<double>& t_grid) {
    FitReport rep;
    for (double t : t_grid) {
        rep.t.push_back(t);
        rep.value.push_back(beam_lp(s, std::lround(t), 2.0));
    }
    rep.slope = loglog_slope(rep.t, rep.value);
    rep.expected = -double(s.n - s.r) / 4.0;
    rep.tolerance = 0.05;
    rep.pass = std::abs(rep.slope - rep.expected) <= rep.tolerance;
    return rep;
}

double beam_decay_max(const SpaceDescriptor& s, long ell, double dist_lo, double dist_hi) {
    if (dist_lo <= 0) throw std::invalid_argument("beam_decay_max: region must be bounded away from the torus");
    if (s.realization != "s2" && s.realization != "su2")
        throw std::invalid_argument("beam_decay_max: supported on S2 and SU2group");
    // |b| = cos(d)^ell at transverse distance d on both spaces.
    double m = 0;
    for (double d : linspace(dist_lo, std::min(dist_hi, M_PI / 2), 200))
        m = std::max(m, std::pow(std::cos(d), double(ell)));
    return m;
}

// ---------------------------------------------------------------------------
// Lp norms
// ---------------------------------------------------------------------------

namespace {

double grid_max_refined(const std::function<double(double)>& f, double a, double b, int n) {
    double lo = a, hi = b;
    double best = 0, arg = a;
    for (int level = 0; level < 3; ++level) {
        auto xs = linspace(lo, hi, n);
        for (double x : xs)
            if (double v = f(x); v > best) { best = v; arg = x; }
        double w = (hi - lo) / n * 2.0;
        lo = std::max(a, arg - w);
        hi = std::min(b, arg + w);
    }
    return best;
}

} // namespace

double lp_norm_class(const SpaceDescriptor& s, const std::function<double(const Vec&)>& f_abs,
                     double p, const QuadratureSpec& q) {
    if (!s.compact()) throw std::invalid_argument("lp_norm_class: compact spaces only");
    bool inf = !std::isfinite(p);
    if (!inf && p < 1) throw std::invalid_argument("lp_norm_class: p >= 1");

    if (s.realization == "s2" || s.realization == "su2") {
        auto density = [&](double x) {
            return s.realization == "s2" ? 0.5 * std::sin(x) : (2.0 / M_PI) * std::sin(x) * std::sin(x);
        };
        auto f1 = [&](double x) { return f_abs((Vec(1) << x).finished()); };
        if (inf) return grid_max_refined(f1, 0.0, M_PI, std::max(q.points_per_dim, 512));
        int n = std::max(q.points_per_dim, 400);
        double v = gl_integrate([&](double x) { return std::pow(f1(x), p) * density(x); }, 0.0, M_PI, n);
        return std::pow(v, 1.0 / p);
    }
    if (s.realization == "su3") {
        // Torus (theta1, theta2) in [0, 2pi)^2 with the Weyl-denominator density;
        // Weyl overcounting cancels in the normalized ratio.
        int n = std::max(q.points_per_dim, 96);
        auto coords = [](double t1, double t2) {
            Vec x(2);
            x(0) = (t1 - t2) / std::sqrt(2.0);
            x(1) = (t1 + t2 - 2.0 * (-t1 - t2)) / std::sqrt(6.0);
            return x;
        };
        auto density = [](double t1, double t2) {
            double t3 = -t1 - t2;
            auto s2 = [](double a) { double v = 2.0 * std::sin(a / 2); return v * v; };
            return s2(t1 - t2) * s2(t1 - t3) * s2(t2 - t3);
        };
        if (inf) {
            double best = 0;
            for (int i = 0; i < 4 * n; ++i)
                for (int j = 0; j < 4 * n; ++j)
                    best = std::max(best, f_abs(coords(2 * M_PI * i / (4.0 * n), 2 * M_PI * j / (4.0 * n))));
            return best;
        }
        double num = 0, den = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double t1 = 2 * M_PI * i / n, t2 = 2 * M_PI * j / n;
                double d = density(t1, t2);
                num += std::pow(f_abs(coords(t1, t2)), p) * d;
                den += d;
            }
        return std::pow(num / den, 1.0 / p);
    }
    throw std::invalid_argument("lp_norm_class: unsupported realization");
}

double lp_norm_radial_noncompact(const SpaceDescriptor& s,
                                 const std::function<double(double)>& f_abs, double p,
                                 double radius, const QuadratureSpec& q) {
    if (s.compact() || s.r != 1) throw std::invalid_argument("lp_norm_radial_noncompact: rank-one noncompact only");
    int mult = s.roots.positive[0].multiplicity;
    bool inf = !std::isfinite(p);
    if (inf) return grid_max_refined(f_abs, 0.0, radius, std::max(q.points_per_dim, 512));
    int n = std::max(q.points_per_dim, 400);
    double v = gl_integrate(
        [&](double x) { return std::pow(f_abs(x), p) * std::pow(std::sinh(x), double(mult)); }, 0.0,
        radius, n);
    return std::pow(v, 1.0 / p);
}

} // namespace sphx
