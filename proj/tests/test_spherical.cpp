#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "sphx/quadrature.hpp"
#include "sphx/rootsys.hpp"
#include "sphx/spherical.hpp"

using namespace sphx;
using namespace std::complex_literals;

namespace {

/// Independent H2 oracle: the classical conical-function integral
/// (1/2pi) int (cosh r - sinh r cos theta)^{-(1/2 + i lam)} dtheta.
cplx mehler_oracle(double lam, double r, int n = 4096) {
    cplx acc = 0;
    for (int j = 0; j < n; ++j) {
        double th = 2.0 * M_PI * j / n;
        double base = std::cosh(r) - std::sinh(r) * std::cos(th);
        acc += std::exp(cplx(-0.5, -lam) * std::log(base));
    }
    return acc / double(n);
}

/// Brute-force SO(3) Haar integral of e^{(rho + i t lam)(H(k a))} via ZYZ Euler
/// angles; independent of the separable evaluator.
cplx sl3_bruteforce(const SpaceDescriptor& s, const Vec& lam, double t, const Vec& H, int n) {
    GroupElement a = exp_cartan(s, H);
    Vec rho = s.roots.rho;
    auto Rz = [](double c) {
        Mat m = Mat::Identity(3, 3);
        m(0, 0) = std::cos(c); m(0, 1) = -std::sin(c);
        m(1, 0) = std::sin(c); m(1, 1) = std::cos(c);
        return m;
    };
    auto Ry = [](double c) {
        Mat m = Mat::Identity(3, 3);
        m(0, 0) = std::cos(c); m(0, 2) = std::sin(c);
        m(2, 0) = -std::sin(c); m(2, 2) = std::cos(c);
        return m;
    };
    GaussLegendre gl(n);
    cplx acc = 0;
    double wsum = 0;
    GroupElement ka = a;
    for (int ib = 0; ib < n; ++ib) {
        double cb = gl.x[ib];   // cos(beta)
        Mat ry = Ry(std::acos(cb));
        for (int ia = 0; ia < n; ++ia) {
            Mat rza = Rz(2.0 * M_PI * ia / n);
            Mat left = rza * ry;
            for (int ic = 0; ic < n; ++ic) {
                Mat k = left * Rz(2.0 * M_PI * ic / n);
                ka.real_mat = k * a.real_mat;
                Vec h = iwasawa_H(s, ka);
                acc += gl.w[ib] * std::exp(rho.dot(h) + 1i * t * lam.dot(h));
                wsum += gl.w[ib];
            }
        }
    }
    return acc / wsum;
}

} // namespace

TEST_CASE("iwasawa projection: split elements, K, reconstruction") {
    for (auto id : {"H2", "SL3R", "H3", "H2xH2"}) {
        const auto& s = catalog_space(id);
        SplitMix rng(11);
        Vec H(s.r);
        for (int i = 0; i < s.r; ++i) H(i) = rng.uniform(-1, 1);
        GroupElement a = exp_cartan(s, H);
        CHECK((iwasawa_H(s, a) - H).norm() < 1e-12);
        CHECK(a.realization_residual(s) < 1e-10);
        CHECK(iwasawa_residual(s, a) < 1e-10);
    }
    // k in K maps to 0.
    const auto& h2 = catalog_space("H2");
    GroupElement k = weyl_representative(h2, 1);
    CHECK(iwasawa_H(h2, k).norm() < 1e-12);
    const auto& sl3 = catalog_space("SL3R");
    for (int w = 0; w < 6; ++w) {
        GroupElement kw = weyl_representative(sl3, w);
        CHECK(iwasawa_H(sl3, kw).norm() < 1e-12);
        CHECK(kw.realization_residual(sl3) < 1e-12);
    }
    // random SL(2,R) elements: reconstruct n a k and compare.
    SplitMix rng(23);
    for (int rep = 0; rep < 10; ++rep) {
        GroupElement g;
        g.space_id = "H2";
        Mat m(2, 2);
        m << rng.uniform(0.3, 2.0), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.3, 2.0);
        m /= std::sqrt(std::abs(m.determinant()));
        if (m.determinant() < 0) m.col(0) *= -1.0;
        g.real_mat = m;
        CHECK(iwasawa_residual(h2, g) < 1e-10);
    }
}

TEST_CASE("phi_noncompact H2: normalization, Mehler oracle, W-invariance, realness") {
    const auto& s = catalog_space("H2");
    QuadratureSpec q;
    q.refinement = 1e-10;
    SpectralParameter lam{(Vec(1) << 0.9).finished(), 3.0};

    CHECK(std::abs(phi_noncompact(s, lam, ChamberVector{Vec::Zero(1), true}, q).value - 1.0) < 1e-12);

    for (double x : {0.2, 0.7, 1.4}) {
        ChamberVector H{(Vec(1) << x).finished(), true};
        EvalResult r = phi_noncompact(s, lam, H, q);
        cplx oracle = mehler_oracle(3.0 * 0.9, x);
        CHECK(std::abs(r.value - oracle) < 1e-8);
        CHECK(std::abs(r.value.imag()) < 1e-9);   // -1 in W: phi real for real lambda
        // W-invariance in H.
        ChamberVector Hm{(Vec(1) << -x).finished(), false};
        CHECK(std::abs(phi_noncompact(s, lam, Hm, q).value - r.value) < 1e-7);
        CHECK(r.abs_error_est < 1e-8);
    }
}

TEST_CASE("phi_noncompact H3: closed form sin(t lam x)/(t lam sinh x)") {
    const auto& s = catalog_space("H3");
    QuadratureSpec q;
    q.refinement = 1e-11;
    double t = 5.0, lam = 1.1;
    SpectralParameter sp{(Vec(1) << lam).finished(), t};
    for (double x : {0.3, 0.9}) {
        ChamberVector H{(Vec(1) << x).finished(), true};
        double closed = std::sin(t * lam * x) / (t * lam * std::sinh(x));
        CHECK(std::abs(phi_noncompact(s, sp, H, q).value - closed) < 1e-9);
    }
    CHECK(std::abs(phi_noncompact(s, sp, ChamberVector{Vec::Zero(1), true}, q).value - 1.0) < 1e-12);
}

TEST_CASE("phi_noncompact SL3R: separable evaluator vs brute-force Haar integral") {
    const auto& s = catalog_space("SL3R");
    QuadratureSpec q;
    q.refinement = 1e-10;
    Vec lam(2);
    lam << 0.8, 0.6;
    double t = 2.5;
    for (auto [a, b] : {std::pair{0.5, 0.7}, {0.9, 0.2}}) {
        Vec H = a * s.roots.coweights[0] + b * s.roots.coweights[1];
        SpectralParameter sp{lam, t};
        ChamberVector cv{H, true};
        cplx sep = phi_noncompact(s, sp, cv, q).value;
        cplx bf = sl3_bruteforce(s, lam, t, H, 40);
        CHECK(std::abs(sep - bf) < 2e-6);
    }
    // phi(e) = 1 and W-invariance of the argument.
    CHECK(std::abs(phi_noncompact(s, SpectralParameter{lam, t}, ChamberVector{Vec::Zero(2), true}, q).value -
                   1.0) < 1e-10);
    Vec H = 0.6 * s.roots.coweights[0] + 0.4 * s.roots.coweights[1];
    cplx base = phi_noncompact(s, SpectralParameter{lam, t}, ChamberVector{H, true}, q).value;
    for (int w = 0; w < s.weyl.order(); ++w) {
        ChamberVector cw{s.weyl.elements[w] * H, false};
        CHECK(std::abs(phi_noncompact(s, SpectralParameter{lam, t}, cw, q).value - base) < 1e-7);
    }
    // conj(phi(exp H)) = phi(exp(-H)) for real lambda.
    ChamberVector cm{(-H).eval(), false};
    CHECK(std::abs(std::conj(base) - phi_noncompact(s, SpectralParameter{lam, t}, cm, q).value) < 5e-7);
}

TEST_CASE("phi_noncompact H2xH2 is the product of the factors") {
    const auto& s = catalog_space("H2xH2");
    const auto& h2 = catalog_space("H2");
    QuadratureSpec q;
    Vec lam(2);
    lam << 1.0, 0.7;
    Vec H(2);
    H << 0.5, 0.9;
    cplx prod = phi_noncompact(h2, SpectralParameter{(Vec(1) << 1.0).finished(), 4.0},
                               ChamberVector{(Vec(1) << 0.5).finished(), true}, q)
                    .value *
                phi_noncompact(h2, SpectralParameter{(Vec(1) << 0.7).finished(), 4.0},
                               ChamberVector{(Vec(1) << 0.9).finished(), true}, q)
                    .value;
    cplx both = phi_noncompact(s, SpectralParameter{lam, 4.0}, ChamberVector{H, true}, q).value;
    CHECK(std::abs(both - prod) < 1e-9);
}

TEST_CASE("phi_compact S2: Legendre recurrence") {
    const auto& s = catalog_space("S2");
    QuadratureSpec q;
    SpectralParameter mu{(Vec(1) << 1.0).finished(), 1.0};
    ChamberVector h{(Vec(1) << 0.8).finished(), true};
    CHECK(phi_compact(s, mu, h, q).value.real() == doctest::Approx(std::cos(0.8)));   // P_1
    SpectralParameter mu0{(Vec(1) << 1.0).finished(), 0.0};
    CHECK(phi_compact(s, mu0, h, q).value.real() == doctest::Approx(1.0));
    // |phi| <= 1 everywhere, = 1 at e.
    SpectralParameter mu9{(Vec(1) << 1.0).finished(), 9.0};
    CHECK(phi_compact(s, mu9, ChamberVector{Vec::Zero(1), true}, q).value.real() ==
          doctest::Approx(1.0));
    for (double x : linspace(0.0, M_PI, 40))
        CHECK(std::abs(phi_compact(s, mu9, ChamberVector{(Vec(1) << x).finished(), true}, q).value) <=
              1.0 + 1e-12);
}

TEST_CASE("phi_compact SU2group: character formula vs explicit representation trace") {
    const auto& s = catalog_space("SU2group");
    QuadratureSpec q;
    long n = 10;
    double x = 0.3;
    SpectralParameter mu{(Vec(1) << 1.0).finished(), double(n)};
    ChamberVector h{(Vec(1) << x).finished(), true};
    cplx val = phi_compact(s, mu, h, q).value;
    CHECK(std::abs(val - std::sin((n + 1) * x) / ((n + 1) * std::sin(x))) < 1e-12);
    // trace over the explicit (n+1)-dimensional representation: weights n-2k.
    cplx tr = 0;
    for (long k = 0; k <= n; ++k) tr += std::exp(1i * double(n - 2 * k) * x);
    CHECK(std::abs(val - tr / double(n + 1)) < 1e-12);
    // wall evaluation (x = 0, pi) via the recurrence limit.
    CHECK(phi_compact(s, mu, ChamberVector{Vec::Zero(1), true}, q).value.real() == doctest::Approx(1.0));
    cplx at_pi = phi_compact(s, mu, ChamberVector{(Vec(1) << M_PI).finished(), true}, q).value;
    CHECK(std::abs(at_pi - cplx(n % 2 == 0 ? 1.0 : -1.0, 0.0)) < 1e-9);
}

TEST_CASE("phi_compact SU3group: Schur polynomial character") {
    const auto& s = catalog_space("SU3group");
    QuadratureSpec q;
    Vec mu_dir = s.weight_lattice_basis[0] + s.weight_lattice_basis[1];
    // adjoint character chi(u) = |tr u|^2 - 1.
    Vec x(2);
    x << 0.4, 0.25;
    auto th = su3_torus_angles(x);
    cplx trace = std::exp(1i * th(0)) + std::exp(1i * th(1)) + std::exp(1i * th(2));
    cplx chi = su3_character(1, 1, x);
    CHECK(std::abs(chi - (std::norm(trace) - 1.0)) < 1e-12);
    CHECK(su3_dimension(1, 1) == doctest::Approx(8.0));
    SpectralParameter mu{mu_dir, 1.0};
    CHECK(std::abs(phi_compact(s, mu, ChamberVector{x, false}, q).value - chi / 8.0) < 1e-12);
    // against the alternating Weyl sum off the walls, higher weight.
    SpectralParameter mu5{mu_dir, 5.0};
    cplx a = phi_compact(s, mu5, ChamberVector{x, false}, q).value;
    cplx b = character_alternating_sum(s, (5.0 * mu_dir).eval(), x) / su3_dimension(5, 5);
    CHECK(std::abs(a - b) < 1e-10);
    // wall evaluation: x on the alpha_1 hyperplane; finite and equal to the
    // directional limit of the alternating-sum route.
    Vec xw = 0.3 * s.roots.coweights[1];   // alpha_1(xw) = 0
    cplx wall = phi_compact(s, mu5, ChamberVector{xw, false}, q).value;
    CHECK(std::isfinite(wall.real()));
    Vec xnear = xw + 1e-6 * s.roots.coweights[0];
    cplx near_wall = character_alternating_sum(s, (5.0 * mu_dir).eval(), xnear) / su3_dimension(5, 5);
    CHECK(std::abs(wall - near_wall) < 1e-4);
    // phi(e) = 1 exactly through the dimension.
    CHECK(std::abs(phi_compact(s, mu5, ChamberVector{Vec::Zero(2), true}, q).value - 1.0) < 1e-10);
}

TEST_CASE("weyl_dimension: pair dimension and per-root factor") {
    const auto& s2 = catalog_space("S2");
    const auto& su2 = catalog_space("SU2group");
    const auto& su3 = catalog_space("SU3group");
    CHECK(weyl_dimension(s2, Vec::Zero(1)) == doctest::Approx(1.0));
    CHECK(weyl_dimension(su2, Vec::Zero(1)) == doctest::Approx(1.0));
    // U-factor values: n+1 for the (n+1)-dimensional representation, 8 for the adjoint.
    CHECK(weyl_dimension_factor(su2, (Vec(1) << 10.0).finished()) == doctest::Approx(11.0));
    Vec adj = su3.weight_lattice_basis[0] + su3.weight_lattice_basis[1];
    CHECK(weyl_dimension_factor(su3, adj) == doctest::Approx(8.0));
    // Pair dimensions.
    CHECK(weyl_dimension(s2, (Vec(1) << 7.0).finished()) == doctest::Approx(15.0));     // 2l+1
    CHECK(weyl_dimension(su2, (Vec(1) << 10.0).finished()) == doctest::Approx(121.0));  // (n+1)^2
    CHECK(weyl_dimension(su3, adj) == doctest::Approx(64.0));
    CHECK_THROWS(weyl_dimension(su2, (Vec(1) << 0.5).finished()));   // non-lattice
}

TEST_CASE("beam evaluation: normalization, torus modulus, equator chart") {
    // b(e) = 1 on every compact catalog space.
    for (auto id : {"S2", "SU2group", "SU3group"}) {
        const auto& s = catalog_space(id);
        Vec dir = s.r == 1 ? (Vec(1) << 1.0).finished()
                           : (s.weight_lattice_basis[0] + s.weight_lattice_basis[1]).eval();
        BeamFunction b{s.id, SpectralParameter{dir, 6.0}};
        CHECK(std::abs(beam_eval(b, group_identity(s)) - 1.0) < 1e-12);
        // |b| = 1 on the torus.
        Vec x(s.r);
        for (int i = 0; i < s.r; ++i) x(i) = 0.3 + 0.2 * i;
        CHECK(std::abs(std::abs(beam_eval(b, exp_cartan(s, x))) - 1.0) < 1e-12);
    }
    // S2 chart: maximal modulus on the equator torus.
    BeamFunction b{"S2", SpectralParameter{(Vec(1) << 1.0).finished(), 12.0}};
    CHECK(std::abs(beam_eval_s2(b, M_PI / 2, 0.25)) == doctest::Approx(1.0));
    CHECK(std::abs(beam_eval_s2(b, M_PI / 3, 0.0)) ==
          doctest::Approx(std::pow(std::sin(M_PI / 3), 12.0)));
}

TEST_CASE("beam integral representation reproduces the spherical function") {
    // S2: average of b over the stabilizer of the base point = P_l(cos x).
    BeamFunction b{"S2", SpectralParameter{(Vec(1) << 1.0).finished(), 4.0}};
    double x = 0.7;
    int n = 512;
    cplx acc = 0;
    for (int j = 0; j < n; ++j) {
        double psi = 2.0 * M_PI * j / n;
        double z = std::sin(x) * std::sin(psi);
        double theta = std::acos(z);
        double phi = std::atan2(std::sin(x) * std::cos(psi), std::cos(x));
        acc += beam_eval_s2(b, theta, phi);
    }
    acc /= double(n);
    CHECK(std::abs(acc - legendre_p(4, std::cos(x))) < 1e-10);

    // SU2group: int_K b(k u k^{-1}) dk = chi_n(u)/(n+1); the last Euler angle
    // acts trivially on diagonal u, leaving a 2-d integral.
    const auto& su2 = catalog_space("SU2group");
    long nn = 6;
    double xx = 0.4;
    BeamFunction bg{"SU2group", SpectralParameter{(Vec(1) << 1.0).finished(), double(nn)}};
    GroupElement u = exp_cartan(su2, (Vec(1) << xx).finished());
    int na = 160, nb = 160;
    GaussLegendre gl(nb);
    cplx acc2 = 0;
    double wsum = 0;
    for (int ib = 0; ib < nb; ++ib) {
        double beta = std::acos(gl.x[ib]);
        Eigen::Matrix2cd B;
        B << std::cos(beta / 2), std::sin(beta / 2), -std::sin(beta / 2), std::cos(beta / 2);
        for (int ia = 0; ia < na; ++ia) {
            double alpha = 2.0 * M_PI * ia / na;
            Eigen::Matrix2cd A = Eigen::Matrix2cd::Zero();
            A(0, 0) = std::exp(1i * alpha / 2.0);
            A(1, 1) = std::exp(-1i * alpha / 2.0);
            Eigen::Matrix2cd K = A * B;
            GroupElement kuk{su2.id, Mat(), K * u.cplx_mat * K.adjoint(), true};
            acc2 += gl.w[ib] * beam_eval(bg, kuk);
            wsum += gl.w[ib];
        }
    }
    acc2 /= wsum;
    double expect = std::sin((nn + 1) * xx) / ((nn + 1) * std::sin(xx));
    CHECK(std::abs(acc2 - expect) < 1e-8);
}

TEST_CASE("beam transverse Gaussian profile (torus Hessian)") {
    // -log|b(exp(s V) h)| = t mu~(H_alpha) s^2/2 + O(s^4 t), arclength s.
    auto fd_hess = [](auto&& f, double step) {
        double a = (f(step) - 2.0 * f(0.0) + f(-step)) / (step * step);
        double b = (f(step / 2) - 2.0 * f(0.0) + f(-step / 2)) / (step * step / 4);
        return (4.0 * b - a) / 3.0;
    };
    {
        long t = 24;
        BeamFunction b{"S2", SpectralParameter{(Vec(1) << 1.0).finished(), double(t)}};
        auto f = [&](double sarc) {
            return -std::log(std::abs(beam_eval_s2(b, M_PI / 2 + sarc, 0.2)));
        };
        double expect = double(t) * 1.0;   // mu~(H_alpha) = <(1),(1)> = 1
        CHECK(std::abs(fd_hess(f, 1e-2) - expect) < 1e-4 * t);
        for (double sarc : {0.02, 0.05, 0.1})
            CHECK(std::abs(f(sarc) - 0.5 * expect * sarc * sarc) <= 0.2 * t * std::pow(sarc, 4));
    }
    {
        const auto& su2 = catalog_space("SU2group");
        long t = 24;
        BeamFunction b{"SU2group", SpectralParameter{(Vec(1) << 1.0).finished(), double(t)}};
        GroupElement h = exp_cartan(su2, (Vec(1) << 0.4).finished());
        auto f = [&](double sarc) {
            Eigen::Matrix2cd E;
            E << std::cos(sarc), std::sin(sarc), -std::sin(sarc), std::cos(sarc);
            GroupElement u{su2.id, Mat(), E * h.cplx_mat, true};
            return -std::log(std::abs(beam_eval(b, u)));
        };
        CHECK(std::abs(fd_hess(f, 1e-2) - double(t)) < 1e-4 * t);
    }
    {
        // SU3group along the first root direction: expected t <mu~, alpha_r> = t/2
        // for mu~ = omega_1 + omega_2.
        const auto& su3 = catalog_space("SU3group");
        long t = 12;
        Vec dir = su3.weight_lattice_basis[0] + su3.weight_lattice_basis[1];
        BeamFunction b{"SU3group", SpectralParameter{dir, double(t)}};
        GroupElement h = exp_cartan(su3, (Vec(2) << 0.2, 0.3).finished());
        auto f = [&](double sarc) {
            double ang = sarc / std::sqrt(2.0);
            Eigen::Matrix3cd R = Eigen::Matrix3cd::Identity();
            R(0, 0) = std::cos(ang);
            R(0, 1) = std::sin(ang);
            R(1, 0) = -std::sin(ang);
            R(1, 1) = std::cos(ang);
            GroupElement u{su3.id, Mat(), R * h.cplx_mat, true};
            return -std::log(std::abs(beam_eval(b, u)));
        };
        double expect = 0.5 * t;
        CHECK(std::abs(fd_hess(f, 1e-2) - expect) < 1e-4 * t);
    }
}

TEST_CASE("beam L2 slopes and decay") {
    auto s2rep = beam_l2_lower(catalog_space("S2"), {20, 40, 80, 160});
    CHECK(s2rep.pass);
    CHECK(s2rep.slope == doctest::Approx(-0.25).epsilon(0.2));
    auto su2rep = beam_l2_lower(catalog_space("SU2group"), {20, 40, 80, 160});
    CHECK(su2rep.pass);
    CHECK(su2rep.slope == doctest::Approx(-0.5).epsilon(0.1));
    // SU2group closed form: ||b_n||_2 = (n+1)^{-1/2}.
    CHECK(beam_lp(catalog_space("SU2group"), 15, 2.0) == doctest::Approx(0.25));
    // mu = 0: constant beam, norm 1 for all t.
    CHECK(beam_lp(catalog_space("S2"), 0, 2.0) == doctest::Approx(1.0));
    CHECK(beam_lp(catalog_space("SU2group"), 0, 4.0) == doctest::Approx(1.0));

    // decay: S2 region theta in [0, pi/4] is at distance >= pi/4 from the equator.
    double m1 = beam_decay_max(catalog_space("S2"), 16, M_PI / 4, M_PI / 2);
    CHECK(m1 == doctest::Approx(std::pow(std::sin(M_PI / 4), 16.0)));
    CHECK_THROWS(beam_decay_max(catalog_space("S2"), 16, 0.0, 0.3));   // D touching T
    // log max |b| at least doubles in magnitude when t doubles.
    double l1 = std::log(beam_decay_max(catalog_space("S2"), 16, M_PI / 4, M_PI / 2));
    double l2 = std::log(beam_decay_max(catalog_space("S2"), 32, M_PI / 4, M_PI / 2));
    CHECK(l2 <= 2.0 * l1 * 0.999);
}

TEST_CASE("lp norms: constants, Legendre orthogonality, Schur") {
    QuadratureSpec q;
    const auto& s2 = catalog_space("S2");
    auto one = [](const Vec&) { return 1.0; };
    CHECK(lp_norm_class(s2, one, 2.0, q) == doctest::Approx(1.0));
    CHECK(lp_norm_class(catalog_space("SU3group"), one, 4.0, q) == doctest::Approx(1.0));

    for (long ell : {5L, 17L}) {
        auto f = [&](const Vec& x) { return std::abs(legendre_p(ell, std::cos(x(0)))); };
        QuadratureSpec qq;
        qq.points_per_dim = int(6 * ell) + 200;
        double l2 = lp_norm_class(s2, f, 2.0, qq);
        CHECK(l2 * l2 == doctest::Approx(1.0 / (2.0 * ell + 1.0)).epsilon(1e-10));
        // Schur: ||phi||_2 * sqrt(D) = 1.
        CHECK(l2 * std::sqrt(weyl_dimension(s2, (Vec(1) << double(ell)).finished())) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
    {
        const auto& su2 = catalog_space("SU2group");
        long n = 9;
        auto f = [&](const Vec& x) {
            return std::abs(chebyshev_u(n, std::cos(x(0)))) / double(n + 1);
        };
        QuadratureSpec qq;
        qq.points_per_dim = 400;
        double l2 = lp_norm_class(su2, f, 2.0, qq);
        CHECK(l2 == doctest::Approx(1.0 / double(n + 1)).epsilon(1e-9));   // = 1/d_U
        CHECK(l2 * std::sqrt(weyl_dimension(su2, (Vec(1) << double(n)).finished())) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
    {
        const auto& su3 = catalog_space("SU3group");
        QuadratureSpec qq;
        qq.points_per_dim = 180;
        Vec adj = su3.weight_lattice_basis[0] + su3.weight_lattice_basis[1];
        auto f = [&](const Vec& x) { return std::abs(su3_character(1, 1, x)) / 8.0; };
        double l2 = lp_norm_class(su3, f, 2.0, qq);
        CHECK(l2 * std::sqrt(weyl_dimension(su3, adj)) == doctest::Approx(1.0).epsilon(1e-6));
    }
    // p = infinity via refined grid max.
    auto fp = [&](const Vec& x) { return std::abs(legendre_p(12, std::cos(x(0)))); };
    CHECK(lp_norm_class(s2, fp, std::numeric_limits<double>::infinity(), q) ==
          doctest::Approx(1.0).epsilon(1e-6));
    // noncompact radial measure sanity: int_0^R sinh = cosh R - 1.
    const auto& h2 = catalog_space("H2");
    auto c1 = [](double) { return 1.0; };
    CHECK(lp_norm_radial_noncompact(h2, c1, 1.0, 2.0, q) == doctest::Approx(std::cosh(2.0) - 1.0));
}

TEST_CASE("quadrature spec validation") {
    QuadratureSpec q;
    q.points_per_dim = 4;
    CHECK_THROWS(q.validate());
    q.points_per_dim = 16;
    q.refinement = -1;
    CHECK_THROWS(q.validate());
}
