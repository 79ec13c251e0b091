#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "spiderweb/curve.hpp"
#include "spiderweb/escape.hpp"
#include "spiderweb/eval.hpp"
#include "spiderweb/growth_checks.hpp"
#include "spiderweb/levels.hpp"
#include "spiderweb/profile.hpp"
#include "spiderweb/util.hpp"

namespace spiderweb {

// Scaling data behind a minimum-modulus ring: the escaping curve gamma_delta
// around z0, its series preimage Gamma_delta around 0, radial extent [s,t],
// the first iterate j clearing R_eps, and the (r,m)-dependent integer
// bookkeeping l(r), l(t) with the constants C, c, l_eps, R_m.
struct CurveScaling {
    double delta = 0.0;
    ClosedCurve gamma_delta;  // in the p-plane, winds z0 once
    ClosedCurve Gamma_delta;  // preimage under L, winds 0 once
    double s = 0.0;           // min |z| on Gamma_delta
    double t = 0.0;           // max |z| on Gamma_delta
    int j = 0;                // first iterate with p^j(gamma) outside R_eps
    long long l_r = 0;
    long long l_t = 0;
    double C = 0.0;
    double c_small = 0.0;
    double l_eps = 0.0;
    double R_m = 0.0;  // analytic sufficiency threshold for this (curve, m)
};

// |lambda|^{l_r - 1} <= r < |lambda|^{l_r} and t |lambda|^{l_t} <= r^m <
// t |lambda|^{l_t + 1}, solved in logs.
inline void ring_bookkeeping(CurveScaling& cs, double log_lambda, double log_r, int m,
                             const GrowthBounds& gb, int degree) {
    cs.l_r = static_cast<long long>(std::floor(log_r / log_lambda)) + 1;
    cs.l_t = static_cast<long long>(std::floor((m * log_r - std::log(cs.t)) / log_lambda));
    cs.C = std::log(cs.t) / log_lambda + m + 1;
    cs.c_small = std::log(cs.t) / log_lambda;
    double num = gb.K_eps + std::log(gb.R_eps);           // log((1+eps)|a_d| R_eps)
    double den = gb.k_eps + degree * std::log(gb.R_eps);  // log((1-eps)|a_d| R_eps^d)
    cs.l_eps = (num / den) * std::exp((cs.C + cs.j + 1) * std::log(static_cast<double>(degree)));
    double first = (log_lambda + std::log(cs.t) - std::log(cs.s)) / (m - 1);
    double second = cs.l_eps > 0.0
                        ? log_lambda * std::log(cs.l_eps) / std::log(static_cast<double>(degree))
                        : -std::numeric_limits<double>::infinity();
    cs.R_m = std::exp(std::max(first, second));
}

// Build gamma_delta and its L-preimage. Newton inversion per vertex inside the
// validated disk, warm-started along the curve; delta halves on failure.
inline std::optional<CurveScaling> prepare_curve_scaling(const LinearizerSeries& s,
                                                         const Polynomial& p, double delta0,
                                                         int resolution = 96,
                                                         int max_shrinks = 12) {
    GrowthBounds gb = make_growth_bounds(p);
    double delta = delta0;
    for (int attempt = 0; attempt <= max_shrinks; ++attempt, delta *= 0.5) {
        auto gamma = escape_curve(p, s.z0, delta, resolution, 512, 256);
        if (!gamma) continue;
        // invert L along the curve
        std::vector<cplx> pre(gamma->pts.size());
        bool ok = true;
        cplx guess = (gamma->pts.front() - s.z0) / s.coeffs[1];
        for (std::size_t k = 0; k < gamma->pts.size() && ok; ++k) {
            cplx w = gamma->pts[k];
            cplx zeta = guess;
            bool conv = false;
            for (int it = 0; it < 80; ++it) {
                cplx f = s.eval(zeta) - w;
                cplx df = s.eval_prime(zeta);
                if (df == cplx(0.0, 0.0)) break;
                cplx step = f / df;
                zeta -= step;
                if (std::abs(zeta) > s.r0) break;
                if (std::abs(step) <= 1e-13 * (1.0 + std::abs(zeta))) {
                    conv = true;
                    break;
                }
            }
            if (!conv || std::abs(s.eval(zeta) - w) > 1e-9 * (1.0 + std::abs(w))) {
                ok = false;
                break;
            }
            pre[k] = zeta;
            guess = zeta;
        }
        if (!ok) continue;

        CurveScaling cs;
        cs.delta = delta;
        cs.gamma_delta = *gamma;
        cs.Gamma_delta = make_closed_curve(std::move(pre), cplx(0.0, 0.0));
        if (cs.Gamma_delta.winding == -1) {
            std::reverse(cs.Gamma_delta.pts.begin(), cs.Gamma_delta.pts.end());
            std::reverse(cs.gamma_delta.pts.begin(), cs.gamma_delta.pts.end());
            cs.Gamma_delta.winding = 1;
            cs.gamma_delta.winding = winding_number(cs.gamma_delta.pts, s.z0);
        }
        if (cs.Gamma_delta.winding != 1) continue;
        cs.s = cs.Gamma_delta.min_abs();
        cs.t = cs.Gamma_delta.max_abs();
        if (!(cs.s > 0.0)) continue;

        // first iterate pushing the whole curve beyond R_eps
        std::vector<cplx> orbit = cs.gamma_delta.pts;
        int j = 0;
        bool clear = false;
        for (; j < 4096 && !clear; ++j) {
            clear = true;
            for (const auto& z : orbit) clear = clear && std::abs(z) > gb.R_eps;
            if (clear) break;
            for (auto& z : orbit) z = poly_eval(p.coeffs, z);
        }
        if (!clear) continue;
        cs.j = j;
        return cs;
    }
    return std::nullopt;
}

// Per-level certificate: the ring lambda^{l_t} Gamma_delta separates S_{r}
// and S_{r^m}, and the minimum of |L| on it beats M(L,r).
struct RingCertificate {
    int n = 0;
    ClosedCurve ring;  // empty when |lambda|^{l_t} overflows the complex range
    long long l_t = 0;
    double log_min_on_ring = 0.0;  // certified lower bound (interval lows)
    double log_max_inner = 0.0;    // sampled log M(L,r)
    bool separates = false;
    bool verdict = false;          // raw comparison && separates
    bool verdict_slacked = false;  // 1% slack on the dominant side
    bool guaranteed_regime = false;  // r > R_m (the analytic sufficiency zone)
    double log_r = 0.0;
    int m = 0;
};

// Evaluate the certificate at log r. L on the ring equals p^{l_t} o L on
// Gamma_delta, and L on Gamma_delta is gamma_delta itself, so the ring
// minimum is the pushforward minimum of the stored curve vertices.
inline RingCertificate ring_certificate(const LinearizerSeries& s, const Polynomial& p,
                                        CurveScaling& cs, double log_r, int m,
                                        int samples = 1024) {
    if (m < 2) throw PreconditionError("ring_certificate: m must be >= 2");
    if (cs.gamma_delta.empty() || cs.Gamma_delta.empty())
        throw PreconditionError("ring_certificate: curve scaling has no curves");
    Evaluator ev(s, p);
    const GrowthBounds& gb = ev.growth_bounds();
    const double log_lambda = std::log(std::abs(s.lambda));
    ring_bookkeeping(cs, log_lambda, log_r, m, gb, p.degree());

    RingCertificate cert;
    cert.log_r = log_r;
    cert.m = m;
    cert.l_t = cs.l_t;
    cert.guaranteed_regime = log_r > std::log(cs.R_m);

    // ring vertices: exact complex scaling when representable
    double scale_log = cs.l_t * log_lambda;
    if (scale_log + std::log(std::max(cs.t, 1.0)) < 700.0 && cs.l_t >= 0) {
        cplx lam_pow = std::pow(s.lambda, static_cast<double>(cs.l_t));
        std::vector<cplx> pts(cs.Gamma_delta.pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = lam_pow * cs.Gamma_delta.pts[i];
        cert.ring = make_closed_curve(std::move(pts), cplx(0.0, 0.0));
    }

    double min_lo = std::numeric_limits<double>::infinity();
    const auto& gpts = cs.gamma_delta.pts;
    std::vector<double> lows(gpts.size());
    parallel_for(gpts.size(), [&](std::size_t a, std::size_t b) {
        for (std::size_t i = a; i < b; ++i) {
            EvalOutcome out = ev.pusher().push(BigComplex::from(gpts[i]), cs.l_t);
            lows[i] = out.lo;
        }
    });
    for (double lo : lows) min_lo = std::min(min_lo, lo);
    cert.log_min_on_ring = min_lo;
    cert.log_max_inner = circle_extremum(ev, log_r, samples, true).log_value;

    double log_s_ring = std::log(cs.s) + cs.l_t * log_lambda;
    double log_t_ring = std::log(cs.t) + cs.l_t * log_lambda;
    cert.separates = (log_s_ring > log_r) && (log_t_ring <= m * log_r);
    cert.verdict = (cert.log_min_on_ring > cert.log_max_inner) && cert.separates;
    cert.verdict_slacked =
        cert.separates && (cert.log_max_inner > 0.0
                               ? cert.log_min_on_ring > cert.log_max_inner * kGrowthSlack
                               : cert.log_min_on_ring > cert.log_max_inner);
    return cert;
}

}  // namespace spiderweb
