#ifndef SPHX_QUADRATURE_HPP
#define SPHX_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphx {

/// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n.
struct GaussLegendre {
    std::vector<double> x, w;
    explicit GaussLegendre(int n) : x(n), w(n) {
        if (n < 1) throw std::invalid_argument("GaussLegendre: n >= 1");
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p2 = p1; p1 = p0;
                    p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1);
                }
                pp = n * (z * p0 - p1) / (z * z - 1.0);
                double dz = p0 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-15) break;
            }
            x[i] = -z; x[n - 1 - i] = z;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
    }
};

/// Integrate f over [a,b] with n-point Gauss-Legendre.
inline double gl_integrate(const std::function<double(double)>& f, double a, double b, int n) {
    GaussLegendre g(n);
    double s = 0, c = 0.5 * (b - a), m = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) s += g.w[i] * f(m + c * g.x[i]);
    return c * s;
}

enum class QuadScheme { GaussLegendre, TrapezoidPeriodic, ProductEulerAngles };

inline QuadScheme quad_scheme_from_string(const std::string& s) {
    if (s == "gauss-legendre") return QuadScheme::GaussLegendre;
    if (s == "trapezoid-periodic") return QuadScheme::TrapezoidPeriodic;
    if (s == "product-euler-angles") return QuadScheme::ProductEulerAngles;
    throw std::invalid_argument("unknown quadrature scheme: " + s);
}

struct QuadratureSpec {
    QuadScheme scheme = QuadScheme::TrapezoidPeriodic;
    int points_per_dim = 64;           // >= 8
    double refinement = 1e-9;          // adaptive doubling target (Richardson difference)
    int max_doublings = 6;

    void validate() const {
        if (points_per_dim < 8) throw std::invalid_argument("QuadratureSpec: points_per_dim >= 8");
        if (refinement <= 0) throw std::invalid_argument("QuadratureSpec: refinement > 0");
    }
};

struct EvalResult {
    std::complex<double> value{0.0, 0.0};
    double abs_error_est = 0.0;
    long nodes_used = 0;
    bool converged = true;
};

/// Adaptive doubling driver: eval(n) computes the full estimate with n points per
/// dimension; error estimate is the difference between successive refinements.
inline EvalResult adaptive_doubling(const std::function<std::complex<double>(int)>& eval,
                                    const QuadratureSpec& q, long nodes_per_call_dim = 1) {
    q.validate();
    int n = q.points_per_dim;
    std::complex<double> prev = eval(n);
    EvalResult r;
    r.value = prev;
    r.nodes_used = n * nodes_per_call_dim;
    for (int k = 0; k < q.max_doublings; ++k) {
        int n2 = 2 * n;
        std::complex<double> cur = eval(n2);
        r.nodes_used += n2 * nodes_per_call_dim;
        r.abs_error_est = std::abs(cur - prev);
        r.value = cur;
        if (r.abs_error_est < q.refinement) return r;
        prev = cur;
        n = n2;
    }
    r.converged = (r.abs_error_est < q.refinement);
    return r;
}

} // namespace sphx

#endif
