#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "spiderweb/polynomial.hpp"
#include "spiderweb/util.hpp"

namespace spiderweb {

struct RootOptions {
    int max_iter = 400;
    double tol = 1e-13;  // relative residual target per root
    std::uint64_t seed = 0x5eed;
};

// Aberth-Ehrlich simultaneous iteration. Robust for all roots at once at the
// degrees we care about (d <= ~50).
inline std::vector<cplx> find_roots(const std::vector<cplx>& coeffs, RootOptions opts = {}) {
    std::vector<cplx> c = coeffs;
    while (c.size() > 1 && c.back() == cplx(0.0, 0.0)) c.pop_back();
    const int n = static_cast<int>(c.size()) - 1;
    if (n <= 0) return {};
    if (n == 1) return {-c[0] / c[1]};

    // Cauchy bound for the root radius.
    double ad = std::abs(c.back());
    double bound = 0.0;
    for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(c[i]) / ad);
    double radius = 1.0 + bound;

    SplitMix64 rng(opts.seed);
    double phase = rng.uniform(0.0, 2.0 * kPi);
    std::vector<cplx> z(n);
    for (int i = 0; i < n; ++i) {
        double th = phase + 2.0 * kPi * i / n + 0.35 * i / n;
        z[i] = 0.5 * radius * cplx(std::cos(th), std::sin(th));
    }

    auto residual_scale = [&](cplx x) {
        double ax = std::abs(x), s = 0.0, pw = 1.0;
        for (int i = 0; i <= n; ++i) {
            s += std::abs(c[i]) * pw;
            pw *= ax;
        }
        return s;
    };

    std::vector<cplx> dc = derivative_coeffs(c);
    for (int it = 0; it < opts.max_iter; ++it) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx pv = poly_eval(c, z[i]);
            double rel = std::abs(pv) / std::max(residual_scale(z[i]), 1e-300);
            worst = std::max(worst, rel);
            if (rel < opts.tol) continue;
            cplx dpv = poly_eval(dc, z[i]);
            cplx newton = (dpv == cplx(0.0, 0.0)) ? cplx(0.0, 0.0) : pv / dpv;
            cplx sum = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                cplx diff = z[i] - z[j];
                if (std::abs(diff) < 1e-14 * (1.0 + std::abs(z[i])))
                    diff = cplx(1e-14 * (1.0 + std::abs(z[i])), 0.0);
                sum += 1.0 / diff;
            }
            cplx denom = 1.0 - newton * sum;
            cplx step = (std::abs(denom) < 1e-300) ? newton : newton / denom;
            if (dpv == cplx(0.0, 0.0)) {
                // nudge off a critical point
                step = cplx(1e-6 * (1.0 + std::abs(z[i])), 1e-6);
            }
            z[i] -= step;
        }
        if (worst < opts.tol) break;
    }
    std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return z;
}

enum class FixedPointClass { superattracting, attracting, indifferent, repelling };

inline const char* to_string(FixedPointClass c) {
    switch (c) {
        case FixedPointClass::superattracting: return "superattracting";
        case FixedPointClass::attracting: return "attracting";
        case FixedPointClass::indifferent: return "indifferent";
        case FixedPointClass::repelling: return "repelling";
    }
    return "?";
}

struct FixedPointInfo {
    cplx z0;
    cplx multiplier;  // lambda = p'(z0)
    FixedPointClass cls = FixedPointClass::repelling;
    bool simple = true;  // false when the fixed point is a multiple root of p(z)-z
    double residual = 0.0;
};

inline constexpr double kClassTol = 1e-8;

inline FixedPointClass classify_multiplier(cplx mu, double tol = kClassTol) {
    double m = std::abs(mu);
    if (m == 0.0) return FixedPointClass::superattracting;
    if (std::abs(m - 1.0) <= tol) return FixedPointClass::indifferent;
    return m < 1.0 ? FixedPointClass::attracting : FixedPointClass::repelling;
}

// All d roots of p(z) - z with multiplier and class. Residual contract:
// |p(z0) - z0| <= 1e-10 * (1 + |z0|).
inline std::vector<FixedPointInfo> find_fixed_points(const Polynomial& p, RootOptions opts = {}) {
    std::vector<cplx> q = p.coeffs;
    q[1] -= 1.0;
    std::vector<cplx> roots = find_roots(q, opts);
    std::vector<FixedPointInfo> out;
    out.reserve(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        auto [pv, dpv] = eval_with_derivative(p, roots[i]);
        FixedPointInfo info;
        info.z0 = roots[i];
        info.multiplier = dpv;
        info.cls = classify_multiplier(dpv);
        info.residual = std::abs(pv - roots[i]);
        for (std::size_t j = 0; j < roots.size(); ++j)
            if (j != i && std::abs(roots[j] - roots[i]) < 1e-7 * (1.0 + std::abs(roots[i])))
                info.simple = false;
        out.push_back(info);
    }
    for (const auto& fp : out) {
        if (fp.residual > 1e-10 * (1.0 + std::abs(fp.z0))) {
            throw NumericError("fixed-point solver did not converge: residual " +
                               fmt17(fp.residual) + " at z0 = (" + fmt17(fp.z0.real()) + "," +
                               fmt17(fp.z0.imag()) + ")");
        }
    }
    return out;
}

inline std::vector<cplx> critical_points(const Polynomial& p, RootOptions opts = {}) {
    return find_roots(derivative_coeffs(p.coeffs), opts);
}

}  // namespace spiderweb
