#include "sphx/rootsys.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sphx {

namespace {

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Vec vec1(double a) {
    Vec v(1);
    v << a;
    return v;
}

Root mk_root(Vec c, std::vector<int> sc, int mult) {
    Root r;
    r.coords = std::move(c);
    r.simple_coeffs = std::move(sc);
    r.multiplicity = mult;
    return r;
}

void finish_system(RootSystem& rs) {
    rs.killing = Mat::Identity(rs.rank, rs.rank);
    rs.rho = Vec::Zero(rs.rank);
    for (auto& a : rs.positive) rs.rho += 0.5 * a.multiplicity * a.coords;
    // Coweights: solve alpha_j(omega_i) = delta_ij.
    Mat A(rs.rank, rs.rank);
    for (int j = 0; j < rs.rank; ++j) A.row(j) = rs.simple(j).coords.transpose();
    Mat Om = A.inverse();
    rs.coweights.clear();
    for (int i = 0; i < rs.rank; ++i) rs.coweights.push_back(Om.col(i));
}

/// Rank-one A1 system with root alpha = (scale) and multiplicity m.
RootSystem make_A1(double scale, int mult) {
    RootSystem rs;
    rs.rank = 1;
    rs.positive = {mk_root(vec1(scale), {1}, mult)};
    rs.simple_idx = {0};
    finish_system(rs);
    return rs;
}

/// A2 system with <alpha,alpha> = norm2 for every root, all multiplicities m.
RootSystem make_A2(double norm2, int mult) {
    double s = std::sqrt(norm2 / 2.0);
    Vec a1 = vec2(std::sqrt(2.0) * s, 0.0);
    Vec a2 = vec2(-std::sqrt(0.5) * s, std::sqrt(1.5) * s);
    RootSystem rs;
    rs.rank = 2;
    rs.positive = {mk_root(a1, {1, 0}, mult), mk_root(a2, {0, 1}, mult),
                   mk_root(a1 + a2, {1, 1}, mult)};
    rs.simple_idx = {0, 1};
    finish_system(rs);
    return rs;
}

RootSystem make_A1xA1(double scale, int mult) {
    RootSystem rs;
    rs.rank = 2;
    rs.positive = {mk_root(vec2(scale, 0), {1, 0}, mult), mk_root(vec2(0, scale), {0, 1}, mult)};
    rs.simple_idx = {0, 1};
    finish_system(rs);
    return rs;
}

SpaceDescriptor mk_space(std::string id, Duality d, int n, int r, RootSystem rs,
                         std::string realization, double killing_rescale,
                         std::vector<Vec> wbasis = {}, bool irred = true) {
    SpaceDescriptor s;
    s.id = std::move(id);
    s.duality = d;
    s.n = n;
    s.r = r;
    s.roots = std::move(rs);
    s.roots.killing_rescale = killing_rescale;
    s.realization = std::move(realization);
    s.weight_lattice_basis = std::move(wbasis);
    s.irreducible = irred;
    s.weyl = generate_weyl(s.roots);
    if (s.roots.m_delta() != 2 * s.n - 2 * s.r)
        throw std::logic_error("catalog space " + s.id + ": m(Delta) != 2n-2r");
    return s;
}

} // namespace

std::vector<SpaceDescriptor> build_catalog() {
    std::vector<SpaceDescriptor> out;
    // Noncompact. Coordinates are geodesic (curvature -1 metric) for the rank-one
    // hyperbolic spaces and the trace form for SL(3,R)/SO(3).
    out.push_back(mk_space("H2", Duality::Noncompact, 2, 1, make_A1(1.0, 1), "sl2r", 2.0));
    out.push_back(mk_space("H3", Duality::Noncompact, 3, 1, make_A1(1.0, 2), "sl2c", 4.0));
    out.push_back(mk_space("SL3R", Duality::Noncompact, 5, 2, make_A2(2.0, 1), "sl3r", 6.0));
    out.push_back(mk_space("H2xH2", Duality::Noncompact, 4, 2, make_A1xA1(1.0, 1), "h2xh2", 2.0, {},
                           /*irred=*/false));
    // Compact. Restricted roots in torus arclength coordinates; weight lattice
    // bases chosen so that <mu,alpha>/<alpha,alpha> is a nonnegative integer for
    // dominant lattice points.
    out.push_back(mk_space("S2", Duality::Compact, 2, 1, make_A1(1.0, 1), "s2", 1.0,
                           {vec1(1.0)}));
    out.push_back(mk_space("SU2group", Duality::Compact, 3, 1, make_A1(1.0, 2), "su2", 1.0,
                           {vec1(1.0)}));
    {
        // SU(3) group manifold: restricted roots are half the su(3) character
        // frequencies, multiplicity 2; weight basis = character fundamental weights.
        RootSystem rs = make_A2(0.5, 2);
        std::vector<Vec> wb = {vec2(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0)),
                               vec2(0.0, 2.0 / std::sqrt(6.0))};
        out.push_back(mk_space("SU3group", Duality::Compact, 8, 2, std::move(rs), "su3", 1.0, wb));
    }
    return out;
}

const SpaceDescriptor& catalog_space(const std::string& id) {
    static const std::vector<SpaceDescriptor> cat = build_catalog();
    for (auto& s : cat)
        if (s.id == id) return s;
    throw std::invalid_argument("unknown catalog space: " + id);
}

namespace {

Mat reflection_matrix(const Vec& alpha) {
    int r = int(alpha.size());
    return Mat::Identity(r, r) - (2.0 / alpha.squaredNorm()) * (alpha * alpha.transpose());
}

bool mat_equal(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff() < 1e-9; }

} // namespace

WeylGroup generate_weyl(const RootSystem& rs) {
    std::vector<Mat> gens;
    for (int j = 0; j < rs.rank; ++j) gens.push_back(reflection_matrix(rs.simple(j).coords));

    WeylGroup W;
    W.elements = {Mat::Identity(rs.rank, rs.rank)};
    W.words = {{}};
    size_t frontier_begin = 0;
    const size_t bound = 1000;   // closure bound; exceeded means invalid root data
    while (frontier_begin < W.elements.size()) {
        size_t frontier_end = W.elements.size();
        // Extend each frontier element by each generator, keeping new elements in
        // (length, lexicographic word) order: generators tried in index order.
        for (size_t e = frontier_begin; e < frontier_end; ++e) {
            for (int j = 0; j < rs.rank; ++j) {
                Mat cand = gens[j] * W.elements[e];
                bool known = false;
                for (auto& m : W.elements)
                    if (mat_equal(m, cand)) { known = true; break; }
                if (!known) {
                    std::vector<int> word = W.words[e];
                    word.insert(word.begin(), j);
                    W.elements.push_back(cand);
                    W.words.push_back(word);
                    if (W.elements.size() > bound)
                        throw std::runtime_error("generate_weyl: closure bound exceeded (invalid root data)");
                }
            }
        }
        frontier_begin = frontier_end;
    }
    W.identity_index = 0;
    W.long_index = 0;
    for (size_t e = 0; e < W.words.size(); ++e)
        if (W.words[e].size() > W.words[W.long_index].size()) W.long_index = int(e);

    // Root action tables; also validates closure of Delta under W with
    // multiplicity equality.
    W.root_action.assign(W.order(), std::vector<int>(rs.num_positive(), 0));
    for (int w = 0; w < W.order(); ++w) {
        for (int k = 0; k < rs.num_positive(); ++k) {
            Vec img = W.elements[w] * rs.positive[k].coords;
            int found = 0;
            for (int l = 0; l < rs.num_positive(); ++l) {
                if ((img - rs.positive[l].coords).cwiseAbs().maxCoeff() < 1e-9) found = l + 1;
                if ((img + rs.positive[l].coords).cwiseAbs().maxCoeff() < 1e-9) found = -(l + 1);
            }
            if (found == 0) throw std::runtime_error("generate_weyl: Delta not closed under reflection");
            int l = std::abs(found) - 1;
            if (rs.positive[l].multiplicity != rs.positive[k].multiplicity)
                throw std::runtime_error("generate_weyl: multiplicity not Weyl-invariant");
            W.root_action[w][k] = found;
        }
    }
    return W;
}

Vec dual_vector(const RootSystem& rs, const Vec& alpha) {
    Eigen::FullPivLU<Mat> lu(rs.killing);
    if (!lu.isInvertible()) throw std::runtime_error("dual_vector: singular killing matrix");
    return lu.solve(alpha);
}

bool is_dominant(const RootSystem& rs, const Vec& H, double tol) {
    for (auto& a : rs.positive)
        if (a.coords.dot(H) < -tol) return false;
    return true;
}

std::pair<int, ChamberVector> chamber_decompose(const RootSystem& rs, const WeylGroup& W, const Vec& H) {
    for (int w = 0; w < W.order(); ++w) {
        Vec img = W.elements[w] * H;
        if (is_dominant(rs, img)) {
            ChamberVector cv;
            cv.coords = img;
            cv.dominant_flag = true;
            return {w, cv};
        }
    }
    throw std::logic_error("chamber_decompose: no dominant image (Weyl group not closed?)");
}

double regularity_gap(const RootSystem& rs, const Vec& H) {
    double m = std::numeric_limits<double>::infinity();
    for (auto& a : rs.positive) m = std::min(m, std::abs(a.coords.dot(H)));
    return m;
}

std::string space_to_json(const SpaceDescriptor& s) {
    nlohmann::json j;
    j["id"] = s.id;
    j["duality"] = s.compact() ? "compact" : "noncompact";
    j["n"] = s.n;
    j["r"] = s.r;
    j["realization"] = s.realization;
    auto vec_to_json = [](const Vec& v) {
        std::vector<double> o(v.data(), v.data() + v.size());
        return o;
    };
    for (int k : s.roots.simple_idx) j["simple_roots"].push_back(vec_to_json(s.roots.positive[k].coords));
    for (auto& a : s.roots.positive) {
        j["positive_roots"].push_back(vec_to_json(a.coords));
        j["multiplicities"].push_back(a.multiplicity);
    }
    for (int i = 0; i < s.roots.rank; ++i)
        j["killing"].push_back(vec_to_json(s.roots.killing.row(i).transpose()));
    j["killing_rescale"] = s.roots.killing_rescale;
    return j.dump(2);
}

std::string catalog_to_json() {
    std::ostringstream os;
    os << "[\n";
    auto cat = build_catalog();
    for (size_t i = 0; i < cat.size(); ++i)
        os << space_to_json(cat[i]) << (i + 1 < cat.size() ? ",\n" : "\n");
    os << "]\n";
    return os.str();
}

} // namespace sphx
