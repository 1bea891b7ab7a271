#ifndef SPHX_EXPONENTS_HPP
#define SPHX_EXPONENTS_HPP

#include <set>
#include <string>
#include <vector>

#include "sphx/numeric.hpp"
#include "sphx/rootsys.hpp"

namespace sphx {

// All exponent formulas run in exact rational arithmetic in q = 1/p in [0, 1/2];
// floats appear only in the progression fits. q = 0 encodes p = infinity.

enum class KinkBranch { Below, At, Above };

struct ExponentReport {
    Rat inv_p;
    Rat delta0;
    Rat delta;
    Rat kink_inv_p;     // 1/p at the kink of delta
    KinkBranch branch = KinkBranch::Above;
};

/// Hoermander-Sogge exponent, Eq. (delta0): piecewise linear in 1/p with kink at
/// 1/p = (n-1)/(2(n+1)).
Rat delta0(const Rat& inv_p, int n);

/// Higher-rank exponent, Eq. (delta): kink at 1/p = (n-r)/(2(n+r)).
Rat delta(const Rat& inv_p, int n, int r);

Rat delta_kink_inv_p(int n, int r);
Rat delta0_kink_inv_p(int n);

ExponentReport exponent_report(const SpaceDescriptor& s, const Rat& inv_p);

/// delta(p; n, r) == r * delta0(p; n/r) on a dense rational grid (exact).
bool product_delta_check(int n, int r);

/// sigma_w(H) = -sum_{alpha in Delta^+} m(alpha) sgn(w alpha (H)); H must be regular.
int sigma_w(const SpaceDescriptor& s, int w, const Vec& H);

/// Vertex data: v in {0,1}^r identified with sum v_i omega_i; Delta_v = roots
/// vanishing there, Phi_v the simple ones.
struct VertexProfile {
    std::vector<int> v;
    int delta_v_plus_mass = 0;   // m(Delta_v^+)
    int phi_v_count = 0;         // |Phi_v|
};

VertexProfile vertex_profile(const SpaceDescriptor& s, const std::vector<int>& v);

/// L(v, p) for a cube vertex, exact: linear in 1/p through
/// (0, (n-r)/2 + m(Delta_v^+)/2) and (1/2, -|Phi_v|).
Rat vertex_value(const SpaceDescriptor& s, const std::vector<int>& v, const Rat& inv_p);

/// L(x, p) from the max-formulas of the dyadic interpolation profile.
double L_of(const SpaceDescriptor& s, const std::vector<double>& x, double inv_p);
Rat L_of_exact(const SpaceDescriptor& s, const std::vector<Rat>& x, const Rat& inv_p);

/// max{L(v0,p), L(v1,p)} == 2 delta(p), exact (Eq. (deltaL)).
bool delta_relation_check(const SpaceDescriptor& s, const Rat& inv_p);

/// M(s) = max{m(Delta_v^+) : |Phi_v| = s} by brute force over {0,1}^r.
int M_of_s(const SpaceDescriptor& s, int sval);

struct ConvexityCertificate {
    bool strictly_convex = false;
    bool reducible_flagged = false;
    std::vector<int> M;                         // M(0..r)
    std::vector<std::vector<int>> witnesses;    // maximizing Phi_v (vertex) per s
    std::vector<bool> witness_connected;        // Dynkin-connectivity of the witness
};

ConvexityCertificate convexity_certificate(const SpaceDescriptor& s);

/// argmax over {0,1}^r of vertex_value at inv_p (exact comparison).
std::vector<std::vector<int>> maximizer_locus(const SpaceDescriptor& s, const Rat& inv_p);

/// H_m = t^{-1} sum_i omega_i e^{m_i}.
ChamberVector H_of_m(const SpaceDescriptor& s, double t, const std::vector<int>& m);

struct DyadicIndex {
    std::vector<int> m;
    double t = 0;
    bool regular = true;
    std::vector<std::vector<int>> class_members;   // S(m)
};

/// Equivalence classes of Z^r cap [0, log t]^r under the wall-merging relation;
/// representatives have maximal entries.
std::vector<DyadicIndex> dyadic_index_set(const SpaceDescriptor& s, double t, double delta_param = 0.1);

struct ProgressionResult {
    double value = 0;                 // sum over sigma of t^{L(sigma,p)}
    double predicted_exponent = 0;    // fitted M(p) over the t-ladder
    double predicted_log_power = 0;   // fitted d(p)
};

/// Eq. (geometric): direct summation at scale t plus fits across a built-in
/// ladder around t.
ProgressionResult progression_sum(const SpaceDescriptor& s, const Rat& inv_p, double t);

} // namespace sphx

#endif
