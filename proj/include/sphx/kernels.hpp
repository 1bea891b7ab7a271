#ifndef SPHX_KERNELS_HPP
#define SPHX_KERNELS_HPP

#include <string>
#include <vector>

#include "sphx/numeric.hpp"
#include "sphx/rootsys.hpp"

namespace sphx {

/// Paley-Wiener multiplier profile h = g_hat^2 / min_{|l|<=1} g_hat^2, where g is
/// the standard compactly supported bump exp(-1/(1-(x/R)^2)). h >= 0, h >= 1 on
/// the unit ball, inverse transform supported in [-2R, 2R].
struct PaleyWienerBump {
    double bump_radius = 0.125;    // R
    double support_radius = 0.25;  // 2R
    double grid_step = 0.05;
    std::vector<double> values;    // h on k*grid_step, k = 0.. (even in lambda)
    double min_on_unit_ball = 0;   // positivity certificate

    double h(double lambda) const;
    /// Smallest radius beyond which the tabulated h stays below `threshold`.
    double decay_radius(double threshold) const;
};

PaleyWienerBump build_bump(double bump_radius = 0.125, double lambda_max = 1050.0);

/// h_t(lambda) = sum_{w in W} h(w lambda - t Lambda) for the rank-one Weyl group.
double h_t(const PaleyWienerBump& b, double Lambda, double t, double lambda);

struct KernelTable {
    std::string space_id;     // H2
    double t = 0;
    double Lambda = 1.0;      // spectral direction (scalar, rank one)
    int multiplier_power = 2; // K^ = h_t^power
    double support_radius = 0.25;   // of the underlying bump (2R)
    double lambda_lo = 0, lambda_hi = 0;
    std::vector<double> x;    // radial grid, alpha(H) coordinate
    std::vector<double> K;    // kernel values (real)
    double max_imag = 0;      // diagnostic: imaginary residue of the inversion
    double scale = 1.0;       // round-trip calibration factor already applied
    double K0 = 0;            // K at x = 0

    double value_at(double xq) const;   // cubic interpolation on the grid
};

/// Invert the spherical transform on H2 against the lambda*tanh(pi*lambda)
/// density; the overall density constant is fixed by the round-trip calibration
/// at lambda = t*Lambda, never hand-entered.
KernelTable invert_transform(const SpaceDescriptor& s, const PaleyWienerBump& b, double Lambda,
                             double t, int multiplier_power = 2, double x_max = 0.8);

/// Forward spherical transform of the table at spectral parameter lambda.
double forward_transform(const KernelTable& tab, double lambda);

struct RoundTrip {
    std::vector<double> lambda;
    std::vector<double> fwd;       // forward transform values
    std::vector<double> target;    // h_t^power
    double max_rel_err = 0;        // over the spectral window
};

RoundTrip round_trip_check(const KernelTable& tab, const PaleyWienerBump& b, int n_lambda = 21);

struct KernelEnvelopeReport {
    std::vector<double> ts;
    std::vector<double> max_ratio;      // |K| / [t^{n-r} prod(1+t|x|)^{-1/2}]
    std::vector<double> K0;             // K(0) per t
    double K0_slope = 0;                // fitted ~ n-r
    double farfield_slope = 0;          // fitted ~ -1/2 in log(t x)
    double max_drift_factor = 1.0;
};

KernelEnvelopeReport kernel_envelope_check(const std::vector<KernelTable>& tables);

/// Smooth dyadic cutoff: alpha == 1 on [-1,1], supported in [-e, e].
double dyadic_alpha(double y);
double beta_tm(double t, int m, double x);
int dyadic_m_max(double t);
/// Largest m whose dyadic shell [e^{m-1}/t, e^{m+1}/t] stays inside the
/// spatial support of the kernel (2 * support_radius); scaling fits are
/// meaningful only there.
int dyadic_m_fit_max(const KernelTable& tab);

struct DyadicPiece {
    int m = 0;
    double t = 0;
    std::vector<double> values;    // beta_{t,m} K on the table grid
    double sup_norm = 0;
    double transform_sup = 0;      // sup over lambda of |forward transform|
};

DyadicPiece dyadic_truncate(const KernelTable& tab, int m, bool with_transform = true);

/// Quadrature of the rank-one Cartan density over supp(beta_{t,m}) against the
/// product formula prod_{Phi} alpha(H_m) * prod_{Delta+} alpha(H_m)^{m(alpha)}.
struct ShellVolume {
    double quadrature = 0;
    double product = 0;
    double ratio = 0;
};
ShellVolume shell_volume(const SpaceDescriptor& s, double t, int m);

/// Degree of the volume product formula in the entries of H_m (= n when the
/// factor count r + m(Delta^+) matches the dimension).
int shell_volume_product_degree(const SpaceDescriptor& s);

/// S2 spectral projector built from Legendre coefficients of the cutoff zonal
/// function b * P_t, squared with the convolution weights.
struct CompactProjector {
    double t = 0;
    int band = 0;
    double cutoff_radius = 0.7;
    std::vector<double> coeff;      // K_l >= 0
    double mass_outside_band = 0;   // relative coefficient mass with |l - t| > band
    double value_at(double theta) const;
    double pole_value() const;
};

CompactProjector compact_projector(const SpaceDescriptor& s, double t, double cutoff_radius = 0.7,
                                   int band = -1);

} // namespace sphx

#endif
