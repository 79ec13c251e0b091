#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "spiderweb/eval.hpp"
#include "spiderweb/profile.hpp"
#include "spiderweb/util.hpp"

namespace spiderweb {

// Base radius R with M(L,r) > r for r >= R (condition for level sets), the
// explicit fast-growth constant R_1, and the sequence r_n = |lambda|^n M^n(L,R),
// all carried in log form. u_seq[n-1] = log M^n(L,R) with eval brackets.
struct LevelParams {
    double R = 0.0;
    double R_L = 0.0;
    double R_1 = 0.0;
    std::vector<double> r_seq;  // log r_n, n = 1..depth
    std::vector<double> u_seq;  // log M^n(L,R) midpoints
    std::vector<double> u_lo;
    std::vector<double> u_hi;
    int depth = 0;
    bool depth_capped = false;  // representability or step budget cut it short

    int available_depth() const { return static_cast<int>(u_seq.size()); }
};

// log R_1 = 2 max{log|a_d|, log(2/|a_d|), log|lambda|}. The fast-growth
// sufficiency condition bounds log R_k, so the constant is the log of the
// radius; the radius reading is demonstrably too small (the n=2 fast-growth
// inequality fails for z^2-5 with it).
inline double fast_growth_R1(const Polynomial& p, const LinearizerSeries& s) {
    double ad = std::abs(p.coeffs.back());
    return std::exp(2.0 *
                    std::max({std::log(ad), std::log(2.0 / ad), std::log(std::abs(s.lambda))}));
}

// Numerical R_L: smallest ladder radius from which the sampled check
// M(L,r) > r holds through a doubling ladder (8 intermediate radii per rung)
// up to a growth-dominance horizon log M > 2 log r.
inline double find_RL(const Evaluator& ev, double r_start = 0.125, int samples = 256) {
    double last_fail = 0.0;
    double first_ok_after_fail = r_start;
    bool dominated = false;
    double r = r_start;
    int rungs = 0;
    while (!dominated) {
        for (int i = 0; i < 9; ++i) {
            double rr = r * std::pow(2.0, static_cast<double>(i) / 9.0);
            double lm = log_max_modulus(ev, std::log(rr), samples);
            if (!(lm > std::log(rr))) {
                last_fail = rr;
            } else if (last_fail > 0.0 && first_ok_after_fail <= last_fail) {
                first_ok_after_fail = rr;
            }
        }
        double lm = log_max_modulus(ev, std::log(2.0 * r), samples);
        if (lm > 2.0 * std::log(2.0 * r) && 2.0 * r > 4.0) dominated = true;
        r *= 2.0;
        if (++rungs > 60) throw NumericError("find_RL: search exceeded the radius budget");
    }
    if (last_fail == 0.0) return r_start;
    return std::max(first_ok_after_fail, last_fail * std::pow(2.0, 1.0 / 9.0));
}

// Fills the M-iterate ladder u_n = log M^n(L,R) and r_n = |lambda|^n M^n(L,R)
// from an explicit base radius. R_L and R_1 are carried for reporting.
inline LevelParams level_params_from_base(const LinearizerSeries& s, const Polynomial& p,
                                          double R, double R_L, double R_1, int depth,
                                          int samples = 1024) {
    Evaluator ev(s, p);
    LevelParams lp;
    lp.R_1 = R_1;
    lp.R_L = R_L;
    lp.R = R;
    lp.depth = depth;

    const double log_lambda = std::log(std::abs(s.lambda));
    double cur_lo = std::log(lp.R), cur_hi = std::log(lp.R);
    for (int n = 1; n <= depth; ++n) {
        double next_lo, next_hi;
        try {
            CircleExtremum lo_side = circle_extremum(ev, cur_lo, samples, true);
            CircleExtremum hi_side =
                cur_hi == cur_lo ? lo_side : circle_extremum(ev, cur_hi, samples, true);
            next_lo = lo_side.lo;
            next_hi = hi_side.hi;
        } catch (const NumericError&) {
            lp.depth_capped = true;
            break;
        }
        if (!std::isfinite(next_lo) || !std::isfinite(next_hi)) {
            lp.depth_capped = true;
            break;
        }
        lp.u_lo.push_back(next_lo);
        lp.u_hi.push_back(next_hi);
        lp.u_seq.push_back(0.5 * (next_lo + next_hi));
        lp.r_seq.push_back(static_cast<double>(n) * log_lambda + lp.u_seq.back());
        cur_lo = next_lo;
        cur_hi = next_hi;
    }
    return lp;
}

// R = max(R_L, R_1) with R_1 = 2 max{log|a_d|, log(2/|a_d|), log|lambda|} and
// R_L from the sampled doubling search for condition (1).
inline LevelParams choose_R(const LinearizerSeries& s, const Polynomial& p, int depth = 5,
                            int samples = 1024) {
    Evaluator ev(s, p);
    double R_1 = fast_growth_R1(p, s);
    double R_L = find_RL(ev);
    double R = std::max(R_L, R_1) * (1.0 + 1e-9);
    return level_params_from_base(s, p, R, R_L, R_1, depth, samples);
}

// --- level membership --------------------------------------------------------

struct LevelMembership {
    int max_level = -1;           // largest j with log|L^i(z)| >= log M^i(L,R) for all i <= j
    bool indeterminate = false;   // a comparison straddled its bracket or the
                                  // orbit left the chainable range
    int stopped_at = -1;          // level index where iteration stopped early
    std::vector<double> trace;    // log-moduli of z, L(z), L^2(z), ...
};

// Level-set membership of z for A_R: iterates L through eval_L and compares
// against the M^i(L,R) ladder; indeterminate comparisons stop the count
// rather than guessing.
inline LevelMembership level_membership(const Evaluator& ev, const BigComplex& z,
                                        const LevelParams& params, int depth) {
    if (depth < 1) throw PreconditionError("level_membership: depth must be >= 1");
    depth = std::min(depth, params.available_depth());
    LevelMembership res;
    BigComplex w = z;
    res.trace.push_back(w.logmod);
    if (!(w.logmod >= std::log(params.R))) return res;  // level 0 check |z| >= R
    res.max_level = 0;
    for (int i = 1; i <= depth; ++i) {
        EvalOutcome out;
        try {
            out = ev.eval(w);
        } catch (const NumericError&) {
            res.indeterminate = true;
            res.stopped_at = i;
            return res;
        }
        res.trace.push_back(out.mid());
        double ulo = params.u_lo[static_cast<std::size_t>(i) - 1];
        double uhi = params.u_hi[static_cast<std::size_t>(i) - 1];
        if (out.lo >= uhi) {
            res.max_level = i;
        } else if (out.hi < ulo) {
            return res;  // definite failure at level i
        } else {
            res.indeterminate = true;
            res.stopped_at = i;
            return res;
        }
        if (i < depth) {
            if (!out.exact()) {
                res.indeterminate = true;  // cannot chain without the argument
                res.stopped_at = i + 1;
                return res;
            }
            w = out.value;
        }
    }
    return res;
}

inline LevelMembership level_membership(const LinearizerSeries& s, const Polynomial& p,
                                        const BigComplex& z, const LevelParams& params, int depth) {
    Evaluator ev(s, p);
    return level_membership(ev, z, params, depth);
}

inline LevelMembership level_membership(const LinearizerSeries& s, const Polynomial& p, cplx z,
                                        const LevelParams& params, int depth) {
    return level_membership(s, p, BigComplex::from(z), params, depth);
}

}  // namespace spiderweb
