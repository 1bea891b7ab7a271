#ifndef SPHX_SPHERICAL_HPP
#define SPHX_SPHERICAL_HPP

#include <functional>
#include <string>
#include <vector>

#include "sphx/numeric.hpp"
#include "sphx/quadrature.hpp"
#include "sphx/rootsys.hpp"

namespace sphx {

/// An element of the realization group of a catalog space.
struct GroupElement {
    std::string space_id;
    Mat real_mat;                  // sl2r, sl3r, s2 (SO(3))
    Eigen::MatrixXcd cplx_mat;     // sl2c, su2, su3
    bool complex_flag = false;

    /// Distance from the realization group (|det-1| plus orthogonality/unitarity
    /// defect where applicable).
    double realization_residual(const SpaceDescriptor& s) const;
};

/// exp of a flat vector: Cartan one-parameter point (noncompact a = exp(H),
/// compact torus point h_x).
GroupElement exp_cartan(const SpaceDescriptor& s, const Vec& H);
GroupElement group_identity(const SpaceDescriptor& s);
GroupElement group_multiply(const GroupElement& a, const GroupElement& b);

/// Iwasawa projection H(g) in flat coordinates, g = n exp(H(g)) k with n unit
/// upper triangular. Noncompact realizations only.
Vec iwasawa_H(const SpaceDescriptor& s, const GroupElement& g);
/// || n exp(H) k - g || for the factors recovered from g.
double iwasawa_residual(const SpaceDescriptor& s, const GroupElement& g);

/// Weyl representative matrices inside K for the noncompact realizations (and
/// su2), indexed like the WeylGroup elements.
GroupElement weyl_representative(const SpaceDescriptor& s, int w);

/// phi_{t lambda}(exp H) = int_K e^{(rho + it lambda)(H(k exp H))} dk with
/// probability Haar measure.
EvalResult phi_noncompact(const SpaceDescriptor& s, const SpectralParameter& lam,
                          const ChamberVector& H, const QuadratureSpec& q);

/// Compact spherical function: Legendre on S2, normalized character on the
/// group cases (exact at torus walls).
EvalResult phi_compact(const SpaceDescriptor& s, const SpectralParameter& mu,
                       const ChamberVector& h, const QuadratureSpec& q);

/// Dimension of the spherical representation V_mu of the pair:
/// prod_{alpha in Delta^+} [<mu+rho,alpha>/<rho,alpha>]^{m(alpha)}.
double weyl_dimension(const SpaceDescriptor& s, const Vec& mu);
/// Per-root product without multiplicities (the U-factor dimension on the
/// group manifolds, 2l+1 on S2).
double weyl_dimension_factor(const SpaceDescriptor& s, const Vec& mu);

/// Highest-weight matrix coefficient b_mu, normalized b_mu(e) = 1.
struct BeamFunction {
    std::string space_id;
    SpectralParameter mu;    // direction in the weight lattice basis, integer scale
};

/// Group-case beams evaluate as products of leading principal minors.
cplx beam_eval(const BeamFunction& b, const GroupElement& u);
/// S2 beam in the polar chart, b = (sin theta)^l e^{i l phi} (torus = equator).
cplx beam_eval_s2(const BeamFunction& b, double theta, double phi);

struct FitReport {
    std::vector<double> t;
    std::vector<double> value;
    double slope = 0;
    double expected = 0;
    double tolerance = 0;
    bool pass = false;
};

/// ||b_{t mu~}||_2 slope fit against the predicted -(n-r)/4.
FitReport beam_l2_lower(const SpaceDescriptor& s, const std::vector<double>& t_grid);

/// L^p norm of the catalog beam of weight ell (exact measure reductions:
/// 1-d polar integral on S2, |u_11|^2 ~ uniform on SU(2)).
double beam_lp(const SpaceDescriptor& s, long ell, double p);

/// max |b| over the region at transverse distance [lo, hi] from the torus.
double beam_decay_max(const SpaceDescriptor& s, long ell, double dist_lo, double dist_hi);

/// L^p norm of a class function given by |f| on Cartan/torus coordinates,
/// against the normalized Weyl-density measure. p = inf via refined grid max.
double lp_norm_class(const SpaceDescriptor& s, const std::function<double(const Vec&)>& f_abs,
                     double p, const QuadratureSpec& q);

/// Rank-one noncompact L^p over a truncated radial domain with sinh density.
double lp_norm_radial_noncompact(const SpaceDescriptor& s,
                                 const std::function<double(double)>& f_abs, double p,
                                 double radius, const QuadratureSpec& q);

// Special-function kernels (exposed for oracles/tests).
double legendre_p(long ell, double x);
double chebyshev_u(long n, double x);
cplx su3_character(long a, long b, const Vec& torus_coords);
double su3_dimension(long a, long b);
/// Alternating Weyl-sum character (off-wall route, used as a cross-check).
cplx character_alternating_sum(const SpaceDescriptor& s, const Vec& mu, const Vec& x);

/// Torus angles (theta_1,theta_2,theta_3) of the SU(3) realization at coords x.
Eigen::Vector3d su3_torus_angles(const Vec& x);

} // namespace sphx

#endif
