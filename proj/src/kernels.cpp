#include "sphx/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sphx/quadrature.hpp"
#include "sphx/spherical.hpp"

namespace sphx {

namespace {

constexpr cplx I{0.0, 1.0};

double bump_g(double x, double R) {
    double u = x / R;
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

/// Cubic Catmull-Rom on a uniform grid with values v[0..n-1] at step dx from 0.
double interp_uniform(const std::vector<double>& v, double dx, double xq) {
    double u = xq / dx;
    int n = int(v.size());
    int i = std::clamp(int(std::floor(u)), 1, n - 3);
    double f = u - i;
    double p0 = v[i - 1], p1 = v[i], p2 = v[i + 1], p3 = v[i + 2];
    return p1 + 0.5 * f * (p2 - p0 + f * (2 * p0 - 5 * p1 + 4 * p2 - p3 + f * (3 * (p1 - p2) + p3 - p0)));
}

cplx interp_uniform_c(const std::vector<cplx>& v, double dx, double xq) {
    double u = xq / dx;
    int n = int(v.size());
    int i = std::clamp(int(std::floor(u)), 1, n - 3);
    double f = u - i;
    cplx p0 = v[i - 1], p1 = v[i], p2 = v[i + 1], p3 = v[i + 2];
    return p1 + 0.5 * f * (p2 - p0 + f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + f * (3.0 * (p1 - p2) + p3 - p0)));
}

double plancherel_density(double lambda) { return lambda * std::tanh(M_PI * lambda); }

} // namespace

double PaleyWienerBump::h(double lambda) const {
    double a = std::abs(lambda);
    double hi = grid_step * (values.size() - 2);
    if (a >= hi) return 0.0;
    return std::max(0.0, interp_uniform(values, grid_step, a));
}

double PaleyWienerBump::decay_radius(double threshold) const {
    double peak = values[0];
    for (size_t k = values.size(); k-- > 0;)
        if (values[k] > threshold * peak) return grid_step * (k + 1);
    return 0.0;
}

PaleyWienerBump build_bump(double bump_radius, double lambda_max) {
    PaleyWienerBump b;
    b.bump_radius = bump_radius;
    b.support_radius = 2.0 * bump_radius;
    b.grid_step = 0.05;
    int n = int(lambda_max / b.grid_step) + 4;
    b.values.resize(n);
    // g_hat(xi) = int_{-R}^{R} g cos(xi x) dx, composite Gauss-Legendre.
    int panels = std::max(8, int(bump_radius * lambda_max / 3.0));
    GaussLegendre gl(12);
    auto ghat = [&](double xi) {
        double acc = 0;
        for (int p = 0; p < panels; ++p) {
            double a = -bump_radius + 2.0 * bump_radius * p / panels;
            double bnd = -bump_radius + 2.0 * bump_radius * (p + 1) / panels;
            double c = 0.5 * (bnd - a), mid = 0.5 * (a + bnd);
            for (int j = 0; j < 12; ++j) {
                double x = mid + c * gl.x[j];
                acc += c * gl.w[j] * bump_g(x, bump_radius) * std::cos(xi * x);
            }
        }
        return acc;
    };
    for (int k = 0; k < n; ++k) {
        double v = ghat(k * b.grid_step);
        b.values[k] = v * v;
    }
    // Normalize so h >= 1 on the unit ball.
    double mn = b.values[0];
    for (int k = 0; k * b.grid_step <= 1.0 && k < n; ++k) mn = std::min(mn, b.values[k]);
    if (mn <= 0) throw std::runtime_error("build_bump: positivity certificate failed on the unit ball");
    for (auto& v : b.values) v /= mn;
    b.min_on_unit_ball = 1.0;
    return b;
}

double h_t(const PaleyWienerBump& b, double Lambda, double t, double lambda) {
    return b.h(lambda - t * Lambda) + b.h(-lambda - t * Lambda);
}

double KernelTable::value_at(double xq) const {
    double dx = x[1] - x[0];
    return interp_uniform(K, dx, std::abs(xq));
}

namespace {

/// Spectral profile F(s) = int m(l) p(l) e^{-i l s} dl over the window, tabulated
/// on a uniform s-grid; F(-s) = conj(F(s)).
struct SpectralProfile {
    double smax, ds;
    std::vector<cplx> F;

    SpectralProfile(const PaleyWienerBump& b, double Lambda, double t, int power, double smax_,
                    double lam_lo, double lam_hi)
        : smax(smax_) {
        double lhi = lam_hi;
        ds = 0.10 / std::max(lhi, 20.0);
        int ns = int(smax / ds) + 4;
        F.resize(ns);
        int nl = 600;
        GaussLegendre gl(nl);
        std::vector<double> lam(nl), wgt(nl), mp(nl);
        for (int j = 0; j < nl; ++j) {
            lam[j] = 0.5 * (lam_lo + lam_hi) + 0.5 * (lam_hi - lam_lo) * gl.x[j];
            wgt[j] = 0.5 * (lam_hi - lam_lo) * gl.w[j];
            mp[j] = std::pow(h_t(b, Lambda, t, lam[j]), power) * plancherel_density(lam[j]);
        }
        for (int k = 0; k < ns; ++k) {
            double s = k * ds;
            cplx acc = 0;
            for (int j = 0; j < nl; ++j) acc += wgt[j] * mp[j] * std::exp(-I * lam[j] * s);
            F[k] = acc;
        }
    }

    cplx eval(double s) const {
        cplx v = interp_uniform_c(F, ds, std::min(std::abs(s), smax));
        return s >= 0 ? v : std::conj(v);
    }
};

double iwasawa_log_profile(double x, double theta) {
    // L(x, theta) = log(cosh x - sinh x cos theta); the Iwasawa phase of H2.
    return std::log(std::cosh(x) - std::sinh(x) * std::cos(theta));
}

} // namespace

KernelTable invert_transform(const SpaceDescriptor& s, const PaleyWienerBump& b, double Lambda,
                             double t, int multiplier_power, double x_max) {
    if (s.id != "H2") throw std::invalid_argument("invert_transform: rank-one noncompact (H2) only");
    if (multiplier_power != 2 && multiplier_power != 4)
        throw std::invalid_argument("invert_transform: multiplier power must be 2 or 4");
    KernelTable tab;
    tab.space_id = s.id;
    tab.t = t;
    tab.Lambda = Lambda;
    tab.multiplier_power = multiplier_power;
    tab.support_radius = b.support_radius;

    double window = b.decay_radius(1e-9) + 4.0;
    tab.lambda_lo = std::max(0.0, t * Lambda - window);
    tab.lambda_hi = t * Lambda + window;

    SpectralProfile prof(b, Lambda, t, multiplier_power, x_max * 1.02, tab.lambda_lo, tab.lambda_hi);

    double dx = 0.12 / (t * Lambda + 30.0);
    int nx = int(x_max / dx) + 2;
    tab.x.resize(nx);
    tab.K.resize(nx);
    int ntheta = 128 + int(1.5 * tab.lambda_hi * x_max);
    for (int i = 0; i < nx; ++i) {
        double x = i * dx;
        tab.x[i] = x;
        cplx acc = 0;
        for (int j = 0; j < ntheta; ++j) {
            double th = 2.0 * M_PI * j / ntheta;
            double L = iwasawa_log_profile(x, th);
            acc += std::exp(-0.5 * L) * prof.eval(L);
        }
        acc /= double(ntheta);
        tab.K[i] = acc.real();
        tab.max_imag = std::max(tab.max_imag, std::abs(acc.imag()));
    }
    tab.K0 = tab.K[0];

    // Round-trip calibration of the density constant at the spectral center.
    double center = t * Lambda;
    double fwd = forward_transform(tab, center);
    double target = std::pow(h_t(b, Lambda, t, center), multiplier_power);
    if (fwd <= 0) throw std::runtime_error("invert_transform: calibration failed (nonpositive transform)");
    tab.scale = target / fwd;
    for (auto& v : tab.K) v *= tab.scale;
    tab.K0 = tab.K[0];
    tab.max_imag *= std::abs(tab.scale);
    return tab;
}

namespace {

/// Forward transform of tabulated radial data against phi_lambda sinh(x) dx,
/// composite Gauss-Legendre in x (panel width ~ one phase oscillation) and
/// periodic trapezoid over the K-circle. Integration is restricted to the
/// support of the data.
double forward_transform_values(const std::vector<double>& xg, const std::vector<double>& vals,
                                double lambda) {
    double dx = xg[1] - xg[0];
    double peak = 0;
    for (double v : vals) peak = std::max(peak, std::abs(v));
    if (peak == 0) return 0.0;
    size_t ilo = 0, ihi = vals.size() - 1;
    while (ilo + 1 < vals.size() && std::abs(vals[ilo]) < 1e-14 * peak) ++ilo;
    while (ihi > 0 && std::abs(vals[ihi]) < 1e-14 * peak) --ihi;
    double xlo = std::max(0.0, xg[ilo > 0 ? ilo - 1 : 0]);
    double xhi = xg[std::min(ihi + 1, xg.size() - 1)];
    auto value_at = [&](double xq) { return interp_uniform(vals, dx, xq); };
    int ntheta = 96 + int(1.6 * std::max(lambda, 8.0) * xhi);
    int panels = std::max(24, int(std::max(lambda, 8.0) * (xhi - xlo) / 4.0));
    GaussLegendre gl(10);
    cplx acc = 0;
    for (int j = 0; j < ntheta; ++j) {
        double th = 2.0 * M_PI * j / ntheta;
        cplx inner = 0;
        for (int p = 0; p < panels; ++p) {
            double a = xlo + (xhi - xlo) * p / panels, bnd = xlo + (xhi - xlo) * (p + 1) / panels;
            double c = 0.5 * (bnd - a), mid = 0.5 * (a + bnd);
            for (int q9 = 0; q9 < 10; ++q9) {
                double x = mid + c * gl.x[q9];
                double L = iwasawa_log_profile(x, th);
                inner += c * gl.w[q9] * value_at(x) * std::sinh(x) *
                         std::exp(cplx(-0.5 * L, -lambda * L));
            }
        }
        acc += inner;
    }
    return (acc / double(ntheta)).real();
}

} // namespace

double forward_transform(const KernelTable& tab, double lambda) {
    return forward_transform_values(tab.x, tab.K, lambda);
}

RoundTrip round_trip_check(const KernelTable& tab, const PaleyWienerBump& b, int n_lambda) {
    RoundTrip rt;
    double center = tab.t * tab.Lambda;
    // Profile window where the target is not vanishingly small relative to peak.
    double peak = std::pow(h_t(b, tab.Lambda, tab.t, center), tab.multiplier_power);
    double half = 8.0;
    for (int k = 0; k < n_lambda; ++k) {
        double lam = center - half + 2.0 * half * k / (n_lambda - 1);
        if (lam <= 0) continue;
        double target = std::pow(h_t(b, tab.Lambda, tab.t, lam), tab.multiplier_power);
        if (target < 1e-3 * peak) continue;
        double fwd = forward_transform(tab, lam);
        rt.lambda.push_back(lam);
        rt.fwd.push_back(fwd);
        rt.target.push_back(target);
        rt.max_rel_err = std::max(rt.max_rel_err, std::abs(fwd - target) / target);
    }
    return rt;
}

KernelEnvelopeReport kernel_envelope_check(const std::vector<KernelTable>& tables) {
    KernelEnvelopeReport rep;
    for (const auto& tab : tables) {
        double t = tab.t;
        double worst = 0;
        for (size_t i = 0; i < tab.x.size(); ++i) {
            double env = t * std::pow(1.0 + t * tab.x[i], -0.5);
            worst = std::max(worst, std::abs(tab.K[i]) / env);
        }
        rep.ts.push_back(t);
        rep.max_ratio.push_back(worst);
        rep.K0.push_back(tab.K0);
    }
    rep.K0_slope = loglog_slope(rep.ts, rep.K0);

    // Far field: the spatial profile of the multiplier is t-independent, so the
    // (t r)-exponent is read off from the t-dependence at fixed radius. Bins
    // span at least a full kernel oscillation at the smallest scale used;
    // tables whose oscillatory zone is too short are skipped.
    double Lam = tables.front().Lambda;
    double xhi = 0.8 * tables.front().support_radius;   // inside the spatial window
    std::vector<const KernelTable*> used;
    for (auto& tab : tables) used.push_back(&tab);
    // Each bin must span a full oscillation and sit well past the near-field
    // plateau of (1 + t|alpha(H)|)^{-1/2}, i.e. t Lambda x >= 15.
    auto xlo_of = [&](double tm) {
        return std::max(2.0 * M_PI / (0.6 * tm * Lam), 15.0 / (tm * Lam));
    };
    double xlo = xlo_of(used.front()->t);
    while (xlo > xhi / 1.8 && used.size() > 2) {
        used.erase(used.begin());
        xlo = xlo_of(used.front()->t);
    }
    int nbins = std::max(2, int(std::log(xhi / xlo) / 0.45));
    double binw = std::log(xhi / xlo) / nbins;
    std::vector<double> slopes;
    for (int bidx = 0; bidx < nbins; ++bidx) {
        double a = xlo * std::exp(binw * bidx), bnd = xlo * std::exp(binw * (bidx + 1));
        std::vector<double> lt, lv;
        for (auto* tab : used) {
            double mx = 0;
            for (size_t i = 0; i < tab->x.size(); ++i)
                if (tab->x[i] >= a && tab->x[i] < bnd)
                    mx = std::max(mx, std::abs(tab->K[i]) / tab->t);
            if (mx > 0) {
                lt.push_back(std::log(tab->t));
                lv.push_back(std::log(mx));
            }
        }
        if (lt.size() >= 2) slopes.push_back(fit_slope(lt, lv));
    }
    if (!slopes.empty()) {
        double acc = 0;
        for (double sl : slopes) acc += sl;
        rep.farfield_slope = acc / slopes.size();
    }
    for (size_t i = 0; i + 1 < rep.ts.size(); ++i) {
        double f = rep.max_ratio[i + 1] / rep.max_ratio[i];
        rep.max_drift_factor = std::max(rep.max_drift_factor, std::max(f, 1.0 / f));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Dyadic decomposition
// ---------------------------------------------------------------------------

namespace {

double smooth_step(double u) {
    // C-infinity transition 0 -> 1 on [0,1].
    if (u <= 0) return 0.0;
    if (u >= 1) return 1.0;
    double fa = std::exp(-1.0 / u), fb = std::exp(-1.0 / (1.0 - u));
    return fa / (fa + fb);
}

} // namespace

double dyadic_alpha(double y) {
    double a = std::abs(y);
    if (a <= 1.0) return 1.0;
    if (a >= M_E) return 0.0;
    return 1.0 - smooth_step((a - 1.0) / (M_E - 1.0));
}

double beta_tm(double t, int m, double x) {
    if (m == 0) return dyadic_alpha(t * x);
    return dyadic_alpha(t * std::exp(-double(m)) * x) - dyadic_alpha(t * std::exp(-double(m - 1)) * x);
}

int dyadic_m_max(double t) { return int(std::ceil(std::log(t))); }

int dyadic_m_fit_max(const KernelTable& tab) {
    int shell_cap = int(std::floor(std::log(2.0 * tab.support_radius * tab.t))) - 1;
    return std::min(shell_cap, int(std::floor(std::log(tab.t))) - 1);
}

DyadicPiece dyadic_truncate(const KernelTable& tab, int m, bool with_transform) {
    DyadicPiece p;
    p.m = m;
    p.t = tab.t;
    p.values.resize(tab.x.size());
    for (size_t i = 0; i < tab.x.size(); ++i) {
        p.values[i] = beta_tm(tab.t, m, tab.x[i]) * tab.K[i];
        p.sup_norm = std::max(p.sup_norm, std::abs(p.values[i]));
    }
    if (with_transform) {
        // Coarse scan then local refinement for sup over lambda.
        double lhi = tab.lambda_hi + 10.0;
        double best = 0, barg = 0;
        int n0 = 140;
        for (int k = 1; k <= n0; ++k) {
            double lam = lhi * k / n0;
            double v = std::abs(forward_transform_values(tab.x, p.values, lam));
            if (v > best) { best = v; barg = lam; }
        }
        double w = lhi / n0;
        for (int k = -6; k <= 6; ++k) {
            double lam = barg + w * k / 6.0;
            if (lam <= 0) continue;
            best = std::max(best, std::abs(forward_transform_values(tab.x, p.values, lam)));
        }
        p.transform_sup = best;
    }
    return p;
}

ShellVolume shell_volume(const SpaceDescriptor& s, double t, int m) {
    if (s.r != 1 || s.compact()) throw std::invalid_argument("shell_volume: rank-one noncompact only");
    int mult = s.roots.positive[0].multiplicity;
    double lo = (m == 0) ? 0.0 : std::exp(double(m - 1)) / t;
    double hi = std::exp(double(m) + 1.0) / t;
    ShellVolume sv;
    sv.quadrature = gl_integrate(
        [&](double x) { return beta_tm(t, m, x) * std::pow(std::sinh(x), double(mult)); }, lo, hi, 200);
    double aHm = std::exp(double(m)) / t;   // alpha(H_m), alpha(omega) = 1
    sv.product = aHm * std::pow(aHm, double(mult));
    sv.ratio = sv.quadrature / sv.product;
    return sv;
}

int shell_volume_product_degree(const SpaceDescriptor& s) {
    int deg = s.r;
    for (const auto& a : s.roots.positive) deg += a.multiplicity;
    return deg;
}

// ---------------------------------------------------------------------------
// Compact projector (S2)
// ---------------------------------------------------------------------------

double CompactProjector::value_at(double theta) const {
    double u = std::cos(theta);
    double p0 = 1.0, p1 = u, acc = coeff[0] * p0;
    if (coeff.size() > 1) acc += coeff[1] * p1;
    for (size_t l = 2; l < coeff.size(); ++l) {
        double p2 = ((2.0 * l - 1.0) * u * p1 - (l - 1.0) * p0) / l;
        acc += coeff[l] * p2;
        p0 = p1;
        p1 = p2;
    }
    return acc;
}

double CompactProjector::pole_value() const {
    double acc = 0;
    for (double c : coeff) acc += c;
    return acc;
}

CompactProjector compact_projector(const SpaceDescriptor& s, double t, double cutoff_radius,
                                   int band) {
    if (s.id != "S2") throw std::invalid_argument("compact_projector: S2 only");
    long lt = std::lround(t);
    CompactProjector cp;
    cp.t = t;
    cp.cutoff_radius = cutoff_radius;
    cp.band = band > 0 ? band : std::max(40, int(t / 4));

    long L = 3 * lt + 60;
    int n = int(2.2 * L) + 200;
    GaussLegendre gl(n);
    // Legendre coefficients a_l of f(theta) = cutoff(theta) P_t(cos theta).
    std::vector<double> a(L + 1, 0.0);
    for (int j = 0; j < n; ++j) {
        double u = gl.x[j];
        double theta = std::acos(u);
        double cut = 1.0 - smooth_step((theta - 0.5 * cutoff_radius) / (0.5 * cutoff_radius));
        if (cut <= 0) continue;
        double f = cut * legendre_p(lt, u) * gl.w[j];
        double p0 = 1.0, p1 = u;
        a[0] += 0.5 * f;
        if (L >= 1) a[1] += 1.5 * f * p1;
        for (long l = 2; l <= L; ++l) {
            double p2 = ((2.0 * l - 1.0) * u * p1 - (l - 1.0) * p0) / l;
            a[l] += (l + 0.5) * f * p2;
            p0 = p1;
            p1 = p2;
        }
    }
    // Adjoint square: zonal convolution squares the coefficients with the
    // (2l+1)-weights; overall constants are irrelevant to the checks.
    cp.coeff.resize(L + 1);
    double total = 0, outside = 0;
    for (long l = 0; l <= L; ++l) {
        cp.coeff[l] = t * t * a[l] * a[l] / (2.0 * l + 1.0);
        total += cp.coeff[l];
        if (std::abs(l - lt) > cp.band) outside += cp.coeff[l];
    }
    cp.mass_outside_band = outside / total;
    return cp;
}

} // namespace sphx
