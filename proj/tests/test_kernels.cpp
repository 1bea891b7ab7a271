#include <doctest.h>

#include <cmath>

#include "sphx/kernels.hpp"
#include "sphx/quadrature.hpp"
#include "sphx/rootsys.hpp"
#include "sphx/spherical.hpp"

using namespace sphx;

namespace {
const PaleyWienerBump& bump() {
    static PaleyWienerBump b = build_bump();
    return b;
}
} // namespace

TEST_CASE("paley-wiener bump: positivity, ball condition, compact support") {
    const auto& b = bump();
    CHECK(b.h(0.0) >= 1.0);
    CHECK(b.min_on_unit_ball == doctest::Approx(1.0));
    for (double l : linspace(0.0, 1.0, 21)) CHECK(b.h(l) >= 1.0 - 1e-12);
    for (double l : linspace(0.0, 400.0, 200)) CHECK(b.h(l) >= 0.0);
    CHECK(b.h(2.0) == b.h(-2.0));   // even
    CHECK(b.support_radius == doctest::Approx(2.0 * b.bump_radius));

    // Inverse transform (autocorrelation of g) is supported in [-2R, 2R]:
    // beyond it the integral cancels to the numerical floor.
    auto autoc = [&](double x) {
        return gl_integrate([&](double l) { return b.h(l) * std::cos(l * x); }, 0.0, 470.0, 4000);
    };
    double a0 = autoc(0.0);
    CHECK(a0 > 0);
    for (double x : {0.5, 0.7, 1.0}) CHECK(std::abs(autoc(x) / a0) < 1e-9);
    CHECK(autoc(0.1) / a0 > 0.3);   // inside the support it is genuinely nonzero
}

TEST_CASE("h_t: W-sum, center value, rapid decay") {
    const auto& b = bump();
    double t = 30, L = 1.0;
    CHECK(h_t(b, L, t, t * L) >= 1.0);                       // ball condition at the center
    CHECK(h_t(b, L, t, 5.0) == h_t(b, L, t, -5.0));          // W-invariance
    double rad = b.decay_radius(1e-8 / b.h(0.0));
    for (double d : {rad + 5.0, rad + 40.0})
        CHECK(h_t(b, L, t, t * L + d) < 1e-8 * h_t(b, L, t, t * L));
}

TEST_CASE("invert_transform: self-consistency at 0, imaginary residue, support") {
    const auto& s = catalog_space("H2");
    KernelTable tab = invert_transform(s, bump(), 1.0, 20.0);
    CHECK(tab.K0 > 0);
    // K(0) equals the plancherel integral of the multiplier (after the
    // round-trip scale), by an independent 1-d quadrature.
    double direct = gl_integrate(
        [&](double l) {
            return std::pow(h_t(bump(), 1.0, 20.0, l), 2.0) * l * std::tanh(M_PI * l);
        },
        tab.lambda_lo, tab.lambda_hi, 2000);
    CHECK(tab.K0 == doctest::Approx(tab.scale * direct).epsilon(1e-8));
    CHECK(tab.max_imag < 1e-8 * std::abs(tab.K0));
    // compact support: |K| < 1e-6 K(0) beyond 2 * support_radius.
    for (size_t i = 0; i < tab.x.size(); ++i)
        if (tab.x[i] > 2.0 * bump().support_radius)
            CHECK(std::abs(tab.K[i]) < 1e-6 * tab.K0);
    CHECK_THROWS(invert_transform(catalog_space("H3"), bump(), 1.0, 20.0));
    CHECK_THROWS(invert_transform(s, bump(), 1.0, 20.0, 3));
}

TEST_CASE("transform round trip within 1e-5 near the spectral center") {
    const auto& s = catalog_space("H2");
    for (double t : {20.0, 40.0}) {
        KernelTable tab = invert_transform(s, bump(), 1.0, t);
        auto rt = round_trip_check(tab, bump());
        CHECK(rt.lambda.size() >= 8);
        CHECK(rt.max_rel_err < 1e-5);
    }
}

TEST_CASE("kernel envelope: K0 growth and far-field decay on a short ladder") {
    const auto& s = catalog_space("H2");
    std::vector<KernelTable> tabs;
    for (double t : {20.0, 40.0, 80.0}) tabs.push_back(invert_transform(s, bump(), 1.0, t));
    auto rep = kernel_envelope_check(tabs);
    CHECK(rep.K0_slope == doctest::Approx(1.0).epsilon(0.06));
    CHECK(rep.farfield_slope == doctest::Approx(-0.5).epsilon(0.25));
    CHECK(rep.max_drift_factor < 1.12);
    for (double m : rep.max_ratio) CHECK(m < 10.0);
}

TEST_CASE("dyadic cutoffs: telescoping, vanishing, reconstruction") {
    double t = 40.0;
    // alpha: 1 on [-1,1], 0 beyond e.
    CHECK(dyadic_alpha(0.5) == 1.0);
    CHECK(dyadic_alpha(-1.0) == 1.0);
    CHECK(dyadic_alpha(M_E + 0.01) == 0.0);
    CHECK(dyadic_alpha(1.5) > 0.0);
    CHECK(dyadic_alpha(1.5) < 1.0);
    // telescoping sum = 1 on the kernel support.
    int M = dyadic_m_max(t) + 1;
    for (double x : linspace(0.001, 1.0, 50)) {
        double acc = 0;
        for (int m = 0; m <= M; ++m) acc += beta_tm(t, m, x);
        CHECK(acc == doctest::Approx(1.0).epsilon(1e-12));
    }
    // pieces vanish for m >= log t on the kernel support.
    for (double x : linspace(0.001, 1.0, 50))
        for (int m = dyadic_m_max(t); m <= M; ++m)
            if (t * std::exp(-double(m)) <= 1.0) CHECK(beta_tm(t, m, x) == 0.0);

    const auto& s = catalog_space("H2");
    KernelTable tab = invert_transform(s, bump(), 1.0, t);
    std::vector<double> recon(tab.x.size(), 0.0);
    for (int m = 0; m <= M; ++m) {
        auto piece = dyadic_truncate(tab, m, /*with_transform=*/false);
        for (size_t i = 0; i < recon.size(); ++i) recon[i] += piece.values[i];
    }
    for (size_t i = 0; i < recon.size(); ++i) CHECK(std::abs(recon[i] - tab.K[i]) < 1e-8);
}

TEST_CASE("dyadic slopes at moderate t") {
    const auto& s = catalog_space("H2");
    double t = 40.0;
    KernelTable tab = invert_transform(s, bump(), 1.0, t);
    std::vector<double> ms, lsup, ltr;
    for (int m = 1; m <= int(std::floor(std::log(t))); ++m) {
        auto piece = dyadic_truncate(tab, m);
        ms.push_back(m);
        lsup.push_back(std::log(piece.sup_norm));
        ltr.push_back(std::log(piece.transform_sup));
    }
    CHECK(fit_slope(ms, lsup) == doctest::Approx(-0.5).epsilon(0.5));
    CHECK(fit_slope(ms, ltr) == doctest::Approx(1.0).epsilon(0.35));
    // interpolation-consistency bands: log sup / log t near L(sigma, inf),
    // log transform-sup / log t near L(sigma, 2).
    for (size_t i = 0; i < ms.size(); ++i) {
        double sigma = ms[i] / std::log(t);
        double Linf = 1.0 - 0.5 * sigma;   // H2: n-r - m sigma/2
        double L2 = -1.0 + sigma;
        CHECK(std::abs(lsup[i] / std::log(t) - Linf) < 0.8);
        CHECK(std::abs(ltr[i] / std::log(t) - L2) < 0.8);
    }
}

TEST_CASE("shell volume: quadrature against the product formula") {
    const auto& h2 = catalog_space("H2");
    double t = std::exp(6.0);
    for (int m = 0; m <= 5; ++m) {
        auto sv = shell_volume(h2, t, m);
        CHECK(sv.ratio > 0.25);
        CHECK(sv.ratio < 4.0);
    }
    // m = 0 cell volume of order t^{-n} = t^{-2}.
    for (double tt : {50.0, 100.0, 200.0}) {
        auto sv = shell_volume(h2, tt, 0);
        CHECK(sv.quadrature * tt * tt > 0.1);
        CHECK(sv.quadrature * tt * tt < 10.0);
    }
    // degree of the product formula = n.
    CHECK(shell_volume_product_degree(catalog_space("SL3R")) == 5);
    CHECK(shell_volume_product_degree(h2) == 2);
    CHECK(shell_volume_product_degree(catalog_space("H3")) == 3);
}

TEST_CASE("compact projector: positivity, localization, pole growth, pointwise bound") {
    const auto& s2 = catalog_space("S2");
    std::vector<double> ts = {20, 40, 80};
    std::vector<double> poles;
    for (double t : ts) {
        auto cp = compact_projector(s2, t);
        for (double c : cp.coeff) CHECK(c >= 0.0);   // self-adjoint square
        CHECK(cp.mass_outside_band < 1e-6);
        poles.push_back(cp.pole_value());
        // pointwise bound against t * max of nearby Legendre values.
        long lt = std::lround(t);
        for (double theta : linspace(0.05, 2.5, 12)) {
            double maxp = 0;
            for (long nu = lt - cp.band; nu <= lt + cp.band; nu += std::max(1, cp.band / 6))
                maxp = std::max(maxp, std::abs(legendre_p(std::max(0L, nu), std::cos(theta))));
            CHECK(std::abs(cp.value_at(theta)) <= 20.0 * t * maxp);
        }
    }
    CHECK(loglog_slope(ts, poles) == doctest::Approx(1.0).epsilon(0.12));
    CHECK_THROWS(compact_projector(catalog_space("SU2group"), 20.0));
}
