#include "sphx/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sphx {

namespace {

void check_inv_p(const Rat& q) {
    if (q < Rat(0) || q > Rat(1, 2))
        throw std::invalid_argument("inv_p must lie in [0, 1/2] (p in [2, inf])");
}

/// Line through (0, y_inf) and (1/2, y_2), evaluated at q.
Rat line(const Rat& y_inf, const Rat& y_2, const Rat& q) {
    return y_inf + Rat(2) * q * (y_2 - y_inf);
}

} // namespace

Rat delta0_kink_inv_p(int n) { return Rat(n - 1, 2 * (n + 1)); }
Rat delta_kink_inv_p(int n, int r) { return Rat(n - r, 2 * (n + r)); }

Rat delta0(const Rat& inv_p, int n) {
    check_inv_p(inv_p);
    if (n < 2) throw std::invalid_argument("delta0: n >= 2");
    Rat kink = delta0_kink_inv_p(n);
    if (inv_p <= kink) return Rat(n) * (Rat(1, 2) - inv_p) - Rat(1, 2);
    return Rat(n - 1, 2) * (Rat(1, 2) - inv_p);
}

Rat delta(const Rat& inv_p, int n, int r) {
    check_inv_p(inv_p);
    if (r < 1 || r >= n) throw std::invalid_argument("delta: need 1 <= r < n");
    Rat kink = delta_kink_inv_p(n, r);
    if (inv_p <= kink) return Rat(n) * (Rat(1, 2) - inv_p) - Rat(r, 2);
    return Rat(n - r, 2) * (Rat(1, 2) - inv_p);
}

ExponentReport exponent_report(const SpaceDescriptor& s, const Rat& inv_p) {
    ExponentReport rep;
    rep.inv_p = inv_p;
    rep.delta0 = delta0(inv_p, s.n);
    rep.delta = delta(inv_p, s.n, s.r);
    rep.kink_inv_p = delta_kink_inv_p(s.n, s.r);
    rep.branch = inv_p < rep.kink_inv_p   ? KinkBranch::Above
                 : inv_p > rep.kink_inv_p ? KinkBranch::Below
                                          : KinkBranch::At;
    return rep;
}

bool product_delta_check(int n, int r) {
    if (n % r != 0) throw std::invalid_argument("product_delta_check: r must divide n");
    for (int k = 0; k <= 60; ++k) {
        Rat q(k, 120);   // dense grid in [0, 1/2], includes both kinks for small n
        if (delta(q, n, r) != Rat(r) * delta0(q, n / r)) return false;
    }
    // Exact agreement at both kinks as well.
    for (Rat q : {delta_kink_inv_p(n, r), delta0_kink_inv_p(n / r)})
        if (delta(q, n, r) != Rat(r) * delta0(q, n / r)) return false;
    return true;
}

int sigma_w(const SpaceDescriptor& s, int w, const Vec& H) {
    const auto& rs = s.roots;
    int acc = 0;
    for (int k = 0; k < rs.num_positive(); ++k) {
        auto [idx, sign] = s.weyl.act_on_root(w, k);
        double val = double(sign) * rs.positive[idx].coords.dot(H);
        if (std::abs(val) < 1e-12)
            throw std::invalid_argument("sigma_w: H lies on a wall, sign undefined");
        acc += rs.positive[k].multiplicity * (val > 0 ? 1 : -1);
    }
    return -acc;
}

VertexProfile vertex_profile(const SpaceDescriptor& s, const std::vector<int>& v) {
    const auto& rs = s.roots;
    if (int(v.size()) != rs.rank) throw std::invalid_argument("vertex_profile: wrong length");
    VertexProfile p;
    p.v = v;
    for (int k = 0; k < rs.num_positive(); ++k) {
        // alpha(sum v_i omega_i) = sum_i v_i * simple_coeffs[i], exact integers.
        long val = 0;
        for (int i = 0; i < rs.rank; ++i) val += long(v[i]) * rs.positive[k].simple_coeffs[i];
        if (val == 0) {
            p.delta_v_plus_mass += rs.positive[k].multiplicity;
            bool is_simple = std::count(rs.simple_idx.begin(), rs.simple_idx.end(), k) > 0;
            if (is_simple) p.phi_v_count += 1;
        }
    }
    return p;
}

Rat vertex_value(const SpaceDescriptor& s, const std::vector<int>& v, const Rat& inv_p) {
    check_inv_p(inv_p);
    VertexProfile p = vertex_profile(s, v);
    Rat l_inf = Rat(s.n - s.r, 2) + Rat(p.delta_v_plus_mass, 2);
    Rat l_2(-p.phi_v_count);
    return line(l_inf, l_2, inv_p);
}

double L_of(const SpaceDescriptor& s, const std::vector<double>& x, double inv_p) {
    const auto& rs = s.roots;
    if (int(x.size()) != rs.rank) throw std::invalid_argument("L_of: wrong length");
    double l_inf = s.n - s.r, l_2 = -s.r;
    for (int k = 0; k < rs.num_positive(); ++k) {
        double mx = 0;
        bool seen = false;
        for (int i = 0; i < rs.rank; ++i)
            if (rs.positive[k].simple_coeffs[i] != 0) {
                mx = seen ? std::max(mx, x[i]) : x[i];
                seen = true;
            }
        l_inf -= rs.positive[k].multiplicity * mx / 2.0;
        bool is_simple = std::count(rs.simple_idx.begin(), rs.simple_idx.end(), k) > 0;
        if (is_simple) l_2 += mx;
    }
    return l_inf + 2.0 * inv_p * (l_2 - l_inf);
}

Rat L_of_exact(const SpaceDescriptor& s, const std::vector<Rat>& x, const Rat& inv_p) {
    check_inv_p(inv_p);
    const auto& rs = s.roots;
    if (int(x.size()) != rs.rank) throw std::invalid_argument("L_of_exact: wrong length");
    Rat l_inf(s.n - s.r), l_2(-s.r);
    for (int k = 0; k < rs.num_positive(); ++k) {
        Rat mx(0);
        bool seen = false;
        for (int i = 0; i < rs.rank; ++i)
            if (rs.positive[k].simple_coeffs[i] != 0) {
                mx = seen ? std::max(mx, x[i]) : x[i];
                seen = true;
            }
        l_inf -= Rat(rs.positive[k].multiplicity) * mx / Rat(2);
        bool is_simple = std::count(rs.simple_idx.begin(), rs.simple_idx.end(), k) > 0;
        if (is_simple) l_2 += mx;
    }
    return line(l_inf, l_2, inv_p);
}

namespace {

std::vector<std::vector<int>> all_vertices(int r) {
    std::vector<std::vector<int>> out;
    for (int mask = 0; mask < (1 << r); ++mask) {
        std::vector<int> v(r);
        for (int i = 0; i < r; ++i) v[i] = (mask >> i) & 1;
        out.push_back(v);
    }
    return out;
}

} // namespace

bool delta_relation_check(const SpaceDescriptor& s, const Rat& inv_p) {
    std::vector<int> v0(s.r, 0), v1(s.r, 1);
    Rat lhs = std::max(vertex_value(s, v0, inv_p), vertex_value(s, v1, inv_p));
    return lhs == Rat(2) * delta(inv_p, s.n, s.r);
}

int M_of_s(const SpaceDescriptor& s, int sval) {
    if (sval < 0 || sval > s.r) throw std::invalid_argument("M_of_s: 0 <= s <= r");
    int best = -1;
    for (auto& v : all_vertices(s.r)) {
        VertexProfile p = vertex_profile(s, v);
        if (p.phi_v_count == sval) best = std::max(best, p.delta_v_plus_mass);
    }
    return best;
}

ConvexityCertificate convexity_certificate(const SpaceDescriptor& s) {
    ConvexityCertificate c;
    if (!s.irreducible) {
        c.reducible_flagged = true;
        return c;
    }
    c.M.resize(s.r + 1, -1);
    c.witnesses.resize(s.r + 1);
    c.witness_connected.resize(s.r + 1, true);
    for (auto& v : all_vertices(s.r)) {
        VertexProfile p = vertex_profile(s, v);
        if (p.delta_v_plus_mass > c.M[p.phi_v_count]) {
            c.M[p.phi_v_count] = p.delta_v_plus_mass;
            c.witnesses[p.phi_v_count] = v;
        }
    }
    // Dynkin connectivity of the witness Phi_v = {alpha_j : v_j = 0}.
    const auto& rs = s.roots;
    for (int sv = 0; sv <= s.r; ++sv) {
        std::vector<int> zeros;
        for (int i = 0; i < s.r; ++i)
            if (c.witnesses[sv][i] == 0) zeros.push_back(i);
        if (zeros.size() <= 1) continue;
        std::vector<bool> vis(zeros.size(), false);
        std::vector<int> stack = {0};
        vis[0] = true;
        while (!stack.empty()) {
            int a = stack.back();
            stack.pop_back();
            for (size_t b = 0; b < zeros.size(); ++b)
                if (!vis[b] && std::abs(rs.simple(zeros[a]).coords.dot(rs.simple(zeros[b]).coords)) > 1e-9) {
                    vis[b] = true;
                    stack.push_back(int(b));
                }
        }
        c.witness_connected[sv] = std::all_of(vis.begin(), vis.end(), [](bool b) { return b; });
    }
    c.strictly_convex = true;
    for (int sv = 1; sv + 1 <= s.r; ++sv)
        if (c.M[sv + 1] - c.M[sv] <= c.M[sv] - c.M[sv - 1]) c.strictly_convex = false;
    return c;
}

std::vector<std::vector<int>> maximizer_locus(const SpaceDescriptor& s, const Rat& inv_p) {
    Rat best;
    bool first = true;
    std::vector<std::vector<int>> arg;
    for (auto& v : all_vertices(s.r)) {
        Rat val = vertex_value(s, v, inv_p);
        if (first || val > best) {
            best = val;
            arg = {v};
            first = false;
        } else if (val == best) {
            arg.push_back(v);
        }
    }
    return arg;
}

ChamberVector H_of_m(const SpaceDescriptor& s, double t, const std::vector<int>& m) {
    if (t <= 1) throw std::invalid_argument("H_of_m: t > 1");
    if (int(m.size()) != s.r) throw std::invalid_argument("H_of_m: wrong length");
    Vec H = Vec::Zero(s.r);
    for (int i = 0; i < s.r; ++i) H += s.roots.coweights[i] * std::exp(double(m[i]));
    H /= t;
    ChamberVector cv;
    cv.coords = H;
    cv.dominant_flag = is_dominant(s.roots, H);
    return cv;
}

std::vector<DyadicIndex> dyadic_index_set(const SpaceDescriptor& s, double t, double delta_param) {
    if (t <= std::exp(1.0)) throw std::invalid_argument("dyadic_index_set: t > e");
    if (delta_param <= 0 || delta_param >= 1)
        throw std::invalid_argument("dyadic_index_set: 0 < delta < 1");
    int M = int(std::floor(std::log(t)));
    int r = s.r;
    // Canonical representative: entries <= delta*|m| are pushed up to floor(delta*|m|).
    auto rep_of = [&](const std::vector<int>& m) {
        int mx = *std::max_element(m.begin(), m.end());
        std::vector<int> rep = m;
        int cap = int(std::floor(delta_param * mx));
        for (int i = 0; i < r; ++i)
            if (m[i] <= delta_param * mx) rep[i] = cap;
        return rep;
    };
    std::map<std::vector<int>, std::vector<std::vector<int>>> classes;
    std::vector<int> m(r, 0);
    while (true) {
        classes[rep_of(m)].push_back(m);
        int i = 0;
        while (i < r && m[i] == M) m[i++] = 0;
        if (i == r) break;
        m[i] += 1;
    }
    std::vector<DyadicIndex> out;
    for (auto& [rep, members] : classes) {
        DyadicIndex d;
        d.m = rep;
        d.t = t;
        d.class_members = members;
        d.regular = (members.size() == 1);
        out.push_back(std::move(d));
    }
    return out;
}

ProgressionResult progression_sum(const SpaceDescriptor& s, const Rat& inv_p, double t) {
    if (t <= std::exp(1.0)) throw std::invalid_argument("progression_sum: t > e");
    double q = to_d(inv_p);
    auto value_at = [&](double tt) {
        double logt = std::log(tt);
        int M = int(std::floor(logt));
        std::vector<int> m(s.r, 0);
        double sum = 0;
        while (true) {
            std::vector<double> sigma(s.r);
            for (int i = 0; i < s.r; ++i) sigma[i] = m[i] / logt;
            sum += std::exp(L_of(s, sigma, q) * logt);
            int i = 0;
            while (i < s.r && m[i] == M) m[i++] = 0;
            if (i == s.r) break;
            m[i] += 1;
        }
        return sum;
    };

    ProgressionResult res;
    res.value = value_at(t);

    // value ~ (log t)^{d(p)} t^{2 delta(p)}: fit the t-power on the integer-log
    // ladder (where floor(log t) is exact), then the log-power with the exact
    // t-power divided out.
    double two_delta = 2.0 * to_d(delta(inv_p, s.n, s.r));
    std::vector<double> lt, lv, llt, lres;
    for (int k = 5; k <= 9; ++k) {
        double tt = std::exp(double(k));
        double v = value_at(tt);
        lt.push_back(double(k));
        lv.push_back(std::log(v));
        llt.push_back(std::log(double(k)));
        lres.push_back(std::log(v) - two_delta * k);
    }
    res.predicted_exponent = fit_slope(lt, lv);
    res.predicted_log_power = fit_slope(llt, lres);
    return res;
}

} // namespace sphx
