#include "sphx/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sphx/exponents.hpp"

namespace sphx {

namespace {
constexpr cplx I{0.0, 1.0};
}

std::vector<AsymptoticTerm> dkv_terms(const SpaceDescriptor& s, const Vec& lam_dir_in, double t,
                                      const Vec& H, double C0, double eps) {
    const auto& rs = s.roots;
    double gap = regularity_gap(rs, H);
    if (gap < std::pow(t, -1.0 + eps))
        throw std::invalid_argument("dkv_terms: H violates the regularity window |alpha(H)| >= t^{-1+eps}");
    // The sigma_w(H) phases are tied to the dominant chamber of the spectral
    // parameter; canonicalize lambda there (phi is W-invariant in lambda).
    Vec lam_dir = chamber_decompose(rs, s.weyl, lam_dir_in).second.coords;
    if (regularity_gap(rs, lam_dir) <= 0)
        throw std::invalid_argument("dkv_terms: lambda direction must be regular");
    std::vector<AsymptoticTerm> terms;
    double tpow = std::pow(t, -0.5 * (s.n - s.r));
    for (int w = 0; w < s.weyl.order(); ++w) {
        AsymptoticTerm term;
        term.w = w;
        term.constant = C0;
        Vec wl = s.weyl.elements[w] * lam_dir;
        term.phase = t * wl.dot(H) + M_PI * sigma_w(s, w, H) / 4.0;
        double amp = tpow;
        for (int k = 0; k < rs.num_positive(); ++k) {
            const Root& a = rs.positive[k];
            double pair_K = a.coords.dot(lam_dir) / rs.killing_rescale;
            auto [idx, sign] = s.weyl.act_on_root(w, k);
            double wa_H = sign * rs.positive[idx].coords.dot(H);
            double factor = std::abs(pair_K / (2.0 * M_PI) * std::sinh(wa_H));
            amp *= std::pow(factor, -0.5 * a.multiplicity);
        }
        term.amplitude = amp;
        terms.push_back(term);
    }
    return terms;
}

cplx dkv_main_term(const SpaceDescriptor& s, const Vec& lam_dir, double t, const Vec& H,
                   double C0, double eps) {
    cplx acc = 0;
    for (const auto& term : dkv_terms(s, lam_dir, t, H, C0, eps))
        acc += term.constant * term.amplitude * std::exp(I * term.phase);
    return acc;
}

double h2_dkv_constant() { return 1.0 / (2.0 * std::sqrt(2.0) * M_PI); }

double dkv_amplitude_sum(const SpaceDescriptor& s, const Vec& lam_dir, double t, const Vec& H,
                         double C0, double eps) {
    double acc = 0;
    for (const auto& term : dkv_terms(s, lam_dir, t, H, C0, eps)) acc += term.constant * term.amplitude;
    return acc;
}

double calibrate_dkv_constant(const SpaceDescriptor& s, const Vec& lam_dir, double t_cal,
                              const std::vector<Vec>& H_points, const QuadratureSpec& q) {
    // Linear least squares: phi ~ C0 * S(H), S the unit-constant W-sum.
    double num = 0, den = 0;
    for (const auto& H : H_points) {
        cplx S = dkv_main_term(s, lam_dir, t_cal, H, 1.0);
        SpectralParameter lam{lam_dir, t_cal};
        ChamberVector cv{H, is_dominant(s.roots, H)};
        cplx phi = phi_noncompact(s, lam, cv, q).value;
        num += (std::conj(S) * phi).real();
        den += std::norm(S);
    }
    if (den == 0) throw std::invalid_argument("calibrate_dkv_constant: degenerate sample");
    return num / den;
}

double classical_zonal_oracle_h2(double t, double lam, double x) {
    return std::sqrt(2.0 / (M_PI * t * lam * std::sinh(x))) * std::cos(t * lam * x - M_PI / 4.0);
}

double envelope_noncompact(const SpaceDescriptor& s, double t, const Vec& H) {
    double prod = 1.0;
    for (const auto& a : s.roots.positive)
        prod *= std::pow(1.0 + t * std::abs(a.coords.dot(H)), -0.5 * a.multiplicity);
    return prod;
}

double envelope_compact(const SpaceDescriptor& s, double t, const Vec& x, double ball_radius) {
    if (!s.compact()) throw std::invalid_argument("envelope_compact: compact spaces only");
    if (x.norm() > ball_radius + 1e-12)
        throw std::invalid_argument("envelope_compact: point outside the torus ball");
    double prod = 1.0;
    for (const auto& a : s.roots.positive) {
        double av = a.coords.dot(x);
        double dist = 2.0 * std::abs(std::sin(0.5 * av));   // |e^{i alpha(x)} - 1|
        prod *= std::pow(1.0 + t * dist, -0.5 * a.multiplicity);
    }
    return prod;
}

double phase_phi(const SpaceDescriptor& s, const Vec& Lambda, const Vec& H, const GroupElement& k) {
    GroupElement ka = group_multiply(k, exp_cartan(s, H));
    return -Lambda.dot(iwasawa_H(s, ka));
}

namespace {

Mat rot_block(int dim, int i, int j, double angle) {
    Mat R = Mat::Identity(dim, dim);
    R(i, i) = std::cos(angle);
    R(j, j) = std::cos(angle);
    R(i, j) = std::sin(angle);
    R(j, i) = -std::sin(angle);
    return R;
}

/// Root-adapted transverse directions in K for the noncompact realizations:
/// curve k -> k * exp(s X_alpha) with X_alpha unit for the coordinate form.
GroupElement transverse_flow(const SpaceDescriptor& s, const GroupElement& base, int root_idx,
                             double sarc) {
    GroupElement g = base;
    if (s.realization == "sl2r") {
        // form = 2 tr: unit X = Z/2, exp(s X) = rotation by s/2.
        g.real_mat = base.real_mat * rot_block(2, 0, 1, sarc / 2.0);
        return g;
    }
    if (s.realization == "sl3r") {
        // form = tr: unit X = (E_ij - E_ji)/sqrt2, exp = rotation by s/sqrt2.
        static const int plane[3][2] = {{0, 1}, {1, 2}, {0, 2}};
        g.real_mat = base.real_mat * rot_block(3, plane[root_idx][0], plane[root_idx][1],
                                               sarc / std::sqrt(2.0));
        return g;
    }
    if (s.realization == "h2xh2") {
        int b = root_idx;   // one root per block
        Mat R = Mat::Identity(4, 4);
        R.block(2 * b, 2 * b, 2, 2) = rot_block(2, 0, 1, sarc / 2.0);
        g.real_mat = base.real_mat * R;
        return g;
    }
    throw std::invalid_argument("transverse_flow: unsupported realization");
}

} // namespace

std::vector<CriticalComponent> critical_set(const SpaceDescriptor& s, const Vec& H, double wall_tol) {
    std::vector<int> vanishing;
    int dim = 0;
    for (int k = 0; k < s.roots.num_positive(); ++k)
        if (std::abs(s.roots.positive[k].coords.dot(H)) < wall_tol) {
            vanishing.push_back(k);
            dim += s.roots.positive[k].multiplicity;
        }
    // Components are distinct orbit points w H (w K_H = w' K_H iff wH = w'H).
    std::vector<CriticalComponent> comps;
    for (int w = 0; w < s.weyl.order(); ++w) {
        Vec img = s.weyl.elements[w] * H;
        bool merged = false;
        for (auto& c : comps) {
            Vec himg = s.weyl.elements[c.weyl_members.front()] * H;
            if ((img - himg).cwiseAbs().maxCoeff() < wall_tol) {
                c.weyl_members.push_back(w);
                merged = true;
                break;
            }
        }
        if (!merged) {
            CriticalComponent c;
            c.weyl_members = {w};
            c.representative = weyl_representative(s, w);
            c.vanishing_roots = vanishing;
            c.dimension = dim;
            comps.push_back(std::move(c));
        }
    }
    return comps;
}

double phase_gradient_norm(const SpaceDescriptor& s, const Vec& Lambda, const Vec& H,
                           const GroupElement& k, double step) {
    double acc = 0;
    for (int r = 0; r < s.roots.num_positive(); ++r) {
        double fp = phase_phi(s, Lambda, H, transverse_flow(s, k, r, step));
        double fm = phase_phi(s, Lambda, H, transverse_flow(s, k, r, -step));
        double d = (fp - fm) / (2.0 * step);
        acc += d * d;
    }
    return std::sqrt(acc);
}

Vec hessian_noncompact(const SpaceDescriptor& s, const Vec& Lambda, const Vec& H, int w) {
    if (s.compact()) throw std::invalid_argument("hessian_noncompact: noncompact spaces only");
    const auto& rs = s.roots;
    Vec out(rs.num_positive());
    for (int k = 0; k < rs.num_positive(); ++k) {
        Vec wHa = s.weyl.elements[w] * rs.positive[k].coords;   // w H_alpha (coords dual)
        auto [idx, sign] = s.weyl.act_on_root(w, k);
        (void)idx;
        double aH = rs.positive[k].coords.dot(H);
        // Entries vanish exactly on the wall set Delta_H.
        if (std::abs(aH) < 1e-13) {
            out(k) = 0.0;
            continue;
        }
        out(k) = Lambda.dot(wHa) * std::sinh(aH) * std::exp(double(sign) * aH);
    }
    return out;
}

double phase_fd_second(const SpaceDescriptor& s, const Vec& Lambda, const Vec& H, int w,
                       int root_idx, double step) {
    GroupElement kw = weyl_representative(s, w);
    auto f = [&](double sarc) {
        return phase_phi(s, Lambda, H, transverse_flow(s, kw, root_idx, sarc));
    };
    double f0 = f(0.0);
    return (f(step) - 2.0 * f0 + f(-step)) / (step * step);
}

std::vector<cplx> hessian_compact(const SpaceDescriptor& s, const Vec& mu_dir, double t,
                                  const Vec& h1, const Vec& h, int w) {
    if (!s.compact()) throw std::invalid_argument("hessian_compact: compact spaces only");
    const auto& rs = s.roots;
    Vec a_w = h1 + s.weyl.elements[w] * h;   // Cartan coordinate of h1 * w(h) on the torus
    std::vector<cplx> out(rs.num_positive());
    for (int k = 0; k < rs.num_positive(); ++k) {
        const Vec& al = rs.positive[k].coords;
        double sa = std::sin(al.dot(a_w));
        if (std::abs(sa) < 1e-9)
            throw std::invalid_argument("hessian_compact: alpha(a) = +-1 (degenerate configuration)");
        Vec wHa = s.weyl.elements[w] * al;
        // Sign fixed against the finite-difference oracle for the concrete
        // phase -mu(A(h1 k(h))); mu(.) on the compact torus carries an i.
        out[k] = I * t * mu_dir.dot(wHa) * std::sin(al.dot(h1)) * std::sin(al.dot(h)) / sa;
    }
    return out;
}

cplx su2_cartan_phase_fd(const Vec& mu_dir, double t, double h1, double h, int w, double step) {
    const SpaceDescriptor& s = catalog_space("SU2group");
    Eigen::Matrix2cd H1 = Eigen::Matrix2cd::Zero(), Hh = Eigen::Matrix2cd::Zero();
    H1(0, 0) = std::exp(I * h1);
    H1(1, 1) = std::exp(-I * h1);
    Hh(0, 0) = std::exp(I * h);
    Hh(1, 1) = std::exp(-I * h);
    Eigen::Matrix2cd W = Eigen::Matrix2cd::Identity();
    if (w != s.weyl.identity_index) {
        W.setZero();
        W(0, 1) = -1.0;
        W(1, 0) = 1.0;
    }
    // Unit transverse direction for the pair metric matching the flat
    // coordinates: conjugation by exp(s V) rotates the torus axis at unit
    // speed, which is the half-angle rotation matrix below.
    auto phase = [&](double sarc) {
        double a = sarc / 2.0;
        Eigen::Matrix2cd E = Eigen::Matrix2cd::Zero();
        E(0, 0) = std::cos(a);
        E(0, 1) = std::sin(a);
        E(1, 0) = -std::sin(a);
        E(1, 1) = std::cos(a);
        Eigen::Matrix2cd k = W * E;
        Eigen::Matrix2cd u = H1 * k * Hh * k.adjoint();
        double A = std::acos(std::clamp(0.5 * u.trace().real(), -1.0, 1.0));
        return -I * t * mu_dir(0) * A;
    };
    cplx f0 = phase(0.0);
    return (phase(step) - 2.0 * f0 + phase(-step)) / (step * step);
}

FitReport compact_regular_scaling(const SpaceDescriptor& s, const Vec& mu_dir, const Vec& H_reg,
                                  const std::vector<double>& t_grid, int window) {
    FitReport rep;
    QuadratureSpec q;
    ChamberVector h{H_reg, true};
    for (double t : t_grid) {
        double acc = 0;
        int cnt = 0;
        for (int k = 0; k < window; ++k) {
            SpectralParameter mu{mu_dir, t + k};
            acc += std::norm(phi_compact(s, mu, h, q).value);
            ++cnt;
        }
        // RMS over the window suppresses the oscillating W-sum cross terms;
        // the window shifts the effective spectral scale to its midpoint.
        rep.t.push_back(t + 0.5 * (window - 1));
        rep.value.push_back(std::sqrt(acc / cnt));
    }
    rep.slope = loglog_slope(rep.t, rep.value);
    rep.expected = -0.5 * (s.n - s.r);
    rep.tolerance = 0.1;
    rep.pass = std::abs(rep.slope - rep.expected) <= rep.tolerance;
    return rep;
}

std::vector<Vec> wall_crossing_path(const SpaceDescriptor& s, double t) {
    std::vector<Vec> path;
    if (s.r == 1) {
        // Radial path through the wall at 0, including the 1/t window.
        for (double x : {-1.2, -0.6, -0.25, -0.1}) path.push_back((Vec(1) << x).finished());
        for (double c : {-3.0, -1.0, -0.3, 0.0, 0.3, 1.0, 3.0})
            path.push_back((Vec(1) << c / t).finished());
        for (double x : {0.1, 0.25, 0.6, 0.9, 1.2}) path.push_back((Vec(1) << x).finished());
        return path;
    }
    // Rank two: fix alpha_2(H) = b, sweep alpha_1(H) = a through its wall.
    const auto& om = s.roots.coweights;
    double b = 0.7;
    std::vector<double> avals = {-0.9, -0.5, -0.2, -0.08, -3.0 / t, -1.0 / t, -0.3 / t, 0.0,
                                 0.3 / t, 1.0 / t, 3.0 / t, 0.08, 0.2, 0.5, 0.9};
    for (double a : avals) path.push_back(a * om[0] + b * om[1]);
    return path;
}

EnvelopeReport envelope_check_noncompact(const SpaceDescriptor& s, const Vec& lam_dir,
                                         const std::vector<double>& ts, const QuadratureSpec& q) {
    EnvelopeReport rep;
    for (double t : ts) {
        double worst = 0;
        for (const Vec& H : wall_crossing_path(s, t)) {
            SpectralParameter lam{lam_dir, t};
            ChamberVector cv{H, is_dominant(s.roots, H)};
            double phi = std::abs(phi_noncompact(s, lam, cv, q).value);
            double env = envelope_noncompact(s, t, H);
            EnvelopeRow row{t, H, phi, env, phi / env};
            rep.rows.push_back(row);
            worst = std::max(worst, row.ratio);
        }
        rep.ts.push_back(t);
        rep.max_ratio.push_back(worst);
    }
    rep.max_drift_factor = 1.0;
    for (size_t i = 0; i + 1 < rep.ts.size(); ++i) {
        double f = rep.max_ratio[i + 1] / rep.max_ratio[i];
        rep.max_drift_factor = std::max(rep.max_drift_factor, std::max(f, 1.0 / f));
    }
    return rep;
}

EnvelopeReport envelope_check_compact(const SpaceDescriptor& s, const Vec& mu_dir,
                                      const std::vector<double>& ts, double ball_radius,
                                      int grid_n) {
    EnvelopeReport rep;
    rep.ball_radius = ball_radius;
    QuadratureSpec q;
    for (double t : ts) {
        double worst = 0;
        auto push = [&](const Vec& x) {
            if (x.norm() > ball_radius) return;
            SpectralParameter mu{mu_dir, t};
            ChamberVector h{x, false};
            double phi = std::abs(phi_compact(s, mu, h, q).value);
            double env = envelope_compact(s, t, x, ball_radius);
            EnvelopeRow row{t, x, phi, env, phi / env};
            rep.rows.push_back(row);
            worst = std::max(worst, row.ratio);
        };
        if (s.r == 1) {
            for (double x : linspace(0.0, ball_radius, 160)) push((Vec(1) << x).finished());
            for (double c : {0.3, 1.0, 3.0}) push((Vec(1) << c / t).finished());
        } else {
            for (double x1 : linspace(-ball_radius, ball_radius, grid_n))
                for (double x2 : linspace(-ball_radius, ball_radius, grid_n))
                    push((Vec(2) << x1, x2).finished());
            // wall-crossing path near a root hyperplane at the 1/t scale
            const Vec a1 = s.roots.simple(0).coords;
            Vec tangent(2);
            tangent << -a1(1), a1(0);
            tangent.normalize();
            Vec normal = a1 / a1.norm();
            for (double c : {-3.0, -1.0, 0.0, 1.0, 3.0})
                push(0.3 * tangent + (c / t) * normal);
        }
        rep.ts.push_back(t);
        rep.max_ratio.push_back(worst);
    }
    rep.max_drift_factor = 1.0;
    for (size_t i = 0; i + 1 < rep.ts.size(); ++i) {
        double f = rep.max_ratio[i + 1] / rep.max_ratio[i];
        rep.max_drift_factor = std::max(rep.max_drift_factor, std::max(f, 1.0 / f));
    }
    return rep;
}

} // namespace sphx
