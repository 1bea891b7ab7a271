#ifndef SPHX_ASYMPTOTICS_HPP
#define SPHX_ASYMPTOTICS_HPP

#include <array>
#include <vector>

#include "sphx/numeric.hpp"
#include "sphx/quadrature.hpp"
#include "sphx/rootsys.hpp"
#include "sphx/spherical.hpp"

namespace sphx {

struct AsymptoticTerm {
    int w = 0;
    double phase = 0;       // t (w lambda)(H) + pi sigma_w(H)/4
    double amplitude = 0;   // t^{-(n-r)/2} prod |<a,l>_K/(2pi) sinh (wa)(H)|^{-m/2}
    double constant = 1;    // per-space constant factor
};

/// Stationary-phase main term of phi_{t lambda}(exp H): C0 * sum over W of
/// exp(i phase_w) * amplitude_w. Requires |alpha(H)| >= t^{-1+eps} for all roots.
std::vector<AsymptoticTerm> dkv_terms(const SpaceDescriptor& s, const Vec& lam_dir, double t,
                                      const Vec& H, double C0, double eps = 0.1);
cplx dkv_main_term(const SpaceDescriptor& s, const Vec& lam_dir, double t, const Vec& H,
                   double C0, double eps = 0.1);

/// Closed-form constant for H2: Vol0(M)/Vol0(K) = 1/(2 sqrt(2) pi).
double h2_dkv_constant();

/// Least-squares constant against quadrature ground truth at one scale.
double calibrate_dkv_constant(const SpaceDescriptor& s, const Vec& lam_dir, double t_cal,
                              const std::vector<Vec>& H_points, const QuadratureSpec& q);

/// Classical large-degree zonal asymptotic on H2:
/// sqrt(2/(pi t lam sinh x)) cos(t lam x - pi/4).
double classical_zonal_oracle_h2(double t, double lam, double x);

/// prod (1 + t|alpha(H)|)^{-m(alpha)/2}.
double envelope_noncompact(const SpaceDescriptor& s, double t, const Vec& H);

/// prod (1 + t|e^{i alpha(x)} - 1|)^{-m(alpha)/2} on the log-torus ball.
double envelope_compact(const SpaceDescriptor& s, double t, const Vec& x, double ball_radius = 0.5);

/// phi_a(k) = -Lambda(H(k exp H)).
double phase_phi(const SpaceDescriptor& s, const Vec& Lambda, const Vec& H, const GroupElement& k);

struct CriticalComponent {
    std::vector<int> weyl_members;     // all w with the same wH
    GroupElement representative;
    std::vector<int> vanishing_roots;  // indices into positive roots with alpha(H) = 0
    int dimension = 0;                 // sum of m(alpha) over Delta_H^+
};

std::vector<CriticalComponent> critical_set(const SpaceDescriptor& s, const Vec& H,
                                            double wall_tol = 1e-9);

/// Finite-difference gradient norm of phase_phi over K at k (transverse frame).
double phase_gradient_norm(const SpaceDescriptor& s, const Vec& Lambda, const Vec& H,
                           const GroupElement& k, double step = 1e-5);

/// Diagonal Hessian of phase_phi at the Weyl point w in the root-adapted
/// orthonormal frame: entry per positive root =
/// Lambda(w H_alpha) sinh(alpha(H)) e^{eps_w(alpha) alpha(H)},  eps_w = +1 iff w alpha > 0.
Vec hessian_noncompact(const SpaceDescriptor& s, const Vec& Lambda, const Vec& H, int w);

/// Finite-difference oracle for one root direction (with Richardson pairing).
double phase_fd_second(const SpaceDescriptor& s, const Vec& Lambda, const Vec& H, int w,
                       int root_idx, double step);

/// Compact-case Hessian of -mu(A(h1 k(h))) at the Weyl point w:
/// entry per positive root = -i <t mu~, w alpha> sin(alpha(h1)) sin(alpha(h)) / sin(alpha(a_w)),
/// a_w the Cartan coordinate of h1 * w(h).
std::vector<cplx> hessian_compact(const SpaceDescriptor& s, const Vec& mu_dir, double t,
                                  const Vec& h1, const Vec& h, int w);

/// Finite-difference oracle on SU2group: second derivative of
/// -i t mu~ A(h1 exp(sV) h exp(-sV)) with V the unit transverse direction.
cplx su2_cartan_phase_fd(const Vec& mu_dir, double t, double h1, double h, int w, double step);

/// Sum of the |terms| (the oscillation-free magnitude scale of the main term).
double dkv_amplitude_sum(const SpaceDescriptor& s, const Vec& lam_dir, double t, const Vec& H,
                         double C0, double eps = 0.1);

/// Window-averaged |phi_{t mu~}(exp H)| slope fit; expected -(n-r)/2.
FitReport compact_regular_scaling(const SpaceDescriptor& s, const Vec& mu_dir, const Vec& H_reg,
                                  const std::vector<double>& t_grid, int window = 16);

struct EnvelopeRow {
    double t = 0;
    Vec H;
    double abs_phi = 0;
    double envelope = 0;
    double ratio = 0;
};

struct EnvelopeReport {
    std::vector<EnvelopeRow> rows;
    std::vector<double> ts;
    std::vector<double> max_ratio;      // per t
    double max_drift_factor = 1.0;      // max over doublings of R_{2t}/R_t ratio distance from 1
    double ball_radius = 0.0;           // compact case
};

/// Wall-crossing H-path for the noncompact envelope check; includes points at
/// distance ~1/t from a wall.
std::vector<Vec> wall_crossing_path(const SpaceDescriptor& s, double t);

EnvelopeReport envelope_check_noncompact(const SpaceDescriptor& s, const Vec& lam_dir,
                                         const std::vector<double>& ts, const QuadratureSpec& q);
EnvelopeReport envelope_check_compact(const SpaceDescriptor& s, const Vec& mu_dir,
                                      const std::vector<double>& ts, double ball_radius = 0.5,
                                      int grid_n = 28);

} // namespace sphx

#endif
