#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "spiderweb/util.hpp"

namespace spiderweb {

// The map under study: p(z) = a_0 + a_1 z + ... + a_d z^d with d >= 2, a_d != 0.
struct Polynomial {
    std::vector<cplx> coeffs;  // a_0 .. a_d

    Polynomial() = default;
    explicit Polynomial(std::vector<cplx> c) : coeffs(std::move(c)) { validate(); }

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    void validate() const {
        if (coeffs.size() < 3) throw PreconditionError("polynomial degree must be >= 2");
        for (const auto& a : coeffs)
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw PreconditionError("polynomial coefficients must be finite");
        if (coeffs.back() == cplx(0.0, 0.0))
            throw PreconditionError("leading coefficient a_d must be nonzero");
    }
};

inline cplx poly_eval(const std::vector<cplx>& c, cplx z) {
    cplx v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * z + c[i];
    return v;
}

// Horner pass carrying the derivative along.
inline std::pair<cplx, cplx> eval_with_derivative(const Polynomial& p, cplx z) {
    cplx v = 0.0, dv = 0.0;
    for (std::size_t i = p.coeffs.size(); i-- > 0;) {
        dv = dv * z + v;
        v = v * z + p.coeffs[i];
    }
    return {v, dv};
}

inline std::vector<cplx> derivative_coeffs(const std::vector<cplx>& c) {
    std::vector<cplx> d;
    if (c.size() <= 1) return {cplx(0.0, 0.0)};
    d.reserve(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
    return d;
}

// Taylor shift: coefficients b_k of p(z0 + w) = sum b_k w^k, via repeated
// synthetic division.
inline std::vector<cplx> recenter(const std::vector<cplx>& c, cplx z0) {
    std::vector<cplx> a = c;
    std::vector<cplx> b(c.size());
    const std::size_t n = c.size();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = n - 1; i > k; --i) a[i - 1] += z0 * a[i];
        b[k] = a[k];
    }
    return b;
}

// Composition with an affine argument: q(z) = p(a z + b).
inline std::vector<cplx> compose_affine_inner(const std::vector<cplx>& p, cplx a, cplx b) {
    std::vector<cplx> q = {p.back()};
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        // q <- q * (a z + b) + p[i]
        std::vector<cplx> nq(q.size() + 1, cplx(0.0, 0.0));
        for (std::size_t j = 0; j < q.size(); ++j) {
            nq[j] += q[j] * b;
            nq[j + 1] += q[j] * a;
        }
        nq[0] += p[i];
        q = std::move(nq);
    }
    return q;
}

inline double coeff_abs_sum_below_top(const Polynomial& p) {
    double s = 0.0;
    for (int i = 0; i < p.degree(); ++i) s += std::abs(p.coeffs[i]);
    return s;
}

// Coefficient-only radius forcing |p(z)| > |z|: beyond it every orbit escapes.
inline double escape_radius(const Polynomial& p) {
    double ad = std::abs(p.coeffs.back());
    return std::max(2.0, (1.0 + coeff_abs_sum_below_top(p)) / ad) + 1.0;
}

// Upper bound K for the radius of a disk containing the filled Julia set:
// |z| > K implies |p(z)| > |z|, so z escapes.
inline double filled_julia_bound(const Polynomial& p) {
    return std::max(1.0, escape_radius(p));
}

}  // namespace spiderweb
