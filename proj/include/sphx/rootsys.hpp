#ifndef SPHX_ROOTSYS_HPP
#define SPHX_ROOTSYS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sphx/numeric.hpp"

namespace sphx {

/// A restricted root: coordinates in an orthonormal basis of a*, integer
/// coordinates in the simple-root basis, and the root-space dimension m(alpha).
struct Root {
    Vec coords;
    std::vector<int> simple_coeffs;   // alpha = sum_j simple_coeffs[j] * alpha_j
    int multiplicity = 1;
};

struct RootSystem {
    int rank = 0;
    std::vector<Root> positive;       // Delta^+
    std::vector<int> simple_idx;      // indices into `positive` of Phi, in order
    Mat killing;                      // Gram matrix of the coordinate basis (identity by construction)
    Vec rho;                          // (1/2) sum m(alpha) alpha over Delta^+
    std::vector<Vec> coweights;       // omega_i in a with alpha_j(omega_i) = delta_ij
    double killing_rescale = 1.0;     // <,>_Killing = killing_rescale * <,>_coords on a

    int num_positive() const { return int(positive.size()); }
    const Root& simple(int j) const { return positive[simple_idx[j]]; }
    /// alpha(H) for coordinate vectors.
    static double pair(const Vec& alpha, const Vec& H) { return alpha.dot(H); }
    /// m(Delta) = 2 * sum over Delta^+ of m(alpha).
    int m_delta() const {
        int s = 0;
        for (auto& a : positive) s += a.multiplicity;
        return 2 * s;
    }
    /// Exact incidence alpha(omega_i) = simple_coeffs[i] (integer).
    int root_on_coweight(int root_idx, int i) const { return positive[root_idx].simple_coeffs[i]; }
};

struct WeylGroup {
    std::vector<Mat> elements;              // orthogonal matrices acting on coords of a
    std::vector<std::vector<int>> words;    // reduced words in simple reflections
    int identity_index = 0;
    int long_index = 0;
    // action[w][k] = signed index: w * positive[k] = sign * positive[|idx|], encoded
    // as (idx+1) with sign.
    std::vector<std::vector<int>> root_action;

    int order() const { return int(elements.size()); }
    int det_sign(int w) const { return words[w].size() % 2 == 0 ? 1 : -1; }
    /// w * positive[k] as (index into positive, sign).
    std::pair<int, int> act_on_root(int w, int k) const {
        int s = root_action[w][k];
        return {std::abs(s) - 1, s > 0 ? 1 : -1};
    }
};

enum class Duality { Noncompact, Compact };

struct SpaceDescriptor {
    std::string id;
    Duality duality = Duality::Noncompact;
    int n = 0;                        // dimension of the symmetric space
    int r = 0;                        // rank
    RootSystem roots;
    WeylGroup weyl;
    std::string realization;          // sl2r | sl2c | sl3r | s2 | su2 | su3 | h2xh2
    std::vector<Vec> weight_lattice_basis;   // compact only
    bool irreducible = true;

    bool compact() const { return duality == Duality::Compact; }
};

struct ChamberVector {
    Vec coords;
    bool dominant_flag = false;
};

struct SpectralParameter {
    Vec direction;    // strictly dominant element of the dual chamber
    double scale = 1; // t
};

/// Catalog of model spaces. Deterministic order.
std::vector<SpaceDescriptor> build_catalog();
const SpaceDescriptor& catalog_space(const std::string& id);

/// Weyl group generated by the simple reflections of rs; deterministic element
/// order (word length, then lexicographic word).
WeylGroup generate_weyl(const RootSystem& rs);

/// H_alpha in a with <H_alpha, H> = alpha(H) for all H (killing-coordinate dual).
Vec dual_vector(const RootSystem& rs, const Vec& alpha);

/// (w, H+) with elements[w] * H = H+ dominant; first matching w in Weyl order.
std::pair<int, ChamberVector> chamber_decompose(const RootSystem& rs, const WeylGroup& W, const Vec& H);

/// min over alpha in Delta of |alpha(H)|.
double regularity_gap(const RootSystem& rs, const Vec& H);

bool is_dominant(const RootSystem& rs, const Vec& H, double tol = 1e-12);

/// Serialize the catalog entry per the external interface.
std::string space_to_json(const SpaceDescriptor& s);
std::string catalog_to_json();

} // namespace sphx

#endif
