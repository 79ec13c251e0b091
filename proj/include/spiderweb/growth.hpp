#pragma once

#include <cmath>
#include <limits>

#include "spiderweb/polynomial.hpp"
#include "spiderweb/util.hpp"

namespace spiderweb {

// Constants for the near-infinity sandwich
//   (1-eps)|a_d||z|^d <= |p(z)| <= (1+eps)|a_d||z|^d  for |z| > R_eps,
// iterated to bounds on log|p^n(z)| through q_n(d) = (d^n-1)/(d-1).
struct GrowthBounds {
    double eps = 0.01;
    double R_eps = 1.0;
    double k_eps = 0.0;  // log((1-eps)|a_d|)
    double K_eps = 0.0;  // log((1+eps)|a_d|)
};

// q_n(d) = d^{n-1} + ... + d + 1, as a double (inf when it overflows).
inline double q_n(int d, int n) {
    if (n <= 0) return 0.0;
    double dn = std::pow(static_cast<double>(d), static_cast<double>(n));
    if (!std::isfinite(dn)) return std::numeric_limits<double>::infinity();
    return (dn - 1.0) / (static_cast<double>(d) - 1.0);
}

inline GrowthBounds make_growth_bounds(const Polynomial& p, double eps = 0.01) {
    if (!(eps > 0.0 && eps < 0.5)) throw PreconditionError("eps must lie in (0, 1/2)");
    GrowthBounds gb;
    gb.eps = eps;
    const double ad = std::abs(p.coeffs.back());
    gb.k_eps = std::log((1.0 - eps) * ad);
    gb.K_eps = std::log((1.0 + eps) * ad);
    const int d = p.degree();

    // smallest R >= 1 with sum_{i<d} |a_i| R^{i-d} <= eps*|a_d|
    auto defect = [&](double R) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += std::abs(p.coeffs[i]) * std::pow(R, i - d);
        return s;
    };
    double R = 1.0;
    while (defect(R) > eps * ad && R < 1e12) R *= 2.0;
    if (R > 1.0) {
        double lo = R / 2.0, hi = R;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (defect(mid) > eps * ad ? lo : hi) = mid;
        }
        R = hi;
    }
    // side condition (1-eps)|a_d| R^{d-1} > 1 keeps iterates outside R_eps
    double side = std::pow(1.0 / ((1.0 - eps) * ad), 1.0 / (d - 1));
    gb.R_eps = std::max({1.0, R, side * (1.0 + 1e-9)});
    return gb;
}

struct LogInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return lo <= x && x <= hi; }
    double width() const { return hi - lo; }
};

// Bounds on log|p^n(z)| from a starting log-modulus > log R_eps.
inline LogInterval iterate_log_bounds_from_logmod(const Polynomial& p, double logmod_z, int n,
                                                  const GrowthBounds& gb) {
    if (!(logmod_z > std::log(gb.R_eps)))
        throw PreconditionError("iterate_log_bounds: |z| must exceed R_eps");
    if (n < 0) throw PreconditionError("iterate_log_bounds: n must be >= 0");
    const int d = p.degree();
    const double q = q_n(d, n);
    const double dn = std::pow(static_cast<double>(d), static_cast<double>(n));
    LogInterval iv;
    iv.lo = q * gb.k_eps + dn * logmod_z;
    iv.hi = q * gb.K_eps + dn * logmod_z;
    if (!std::isfinite(iv.lo)) iv.lo = iv.lo > 0 ? std::numeric_limits<double>::infinity()
                                                 : -std::numeric_limits<double>::infinity();
    if (!std::isfinite(iv.hi)) iv.hi = std::numeric_limits<double>::infinity();
    return iv;
}

inline LogInterval iterate_log_bounds(const Polynomial& p, cplx z, int n, const GrowthBounds& gb) {
    return iterate_log_bounds_from_logmod(p, std::log(std::abs(z)), n, gb);
}

}  // namespace spiderweb
