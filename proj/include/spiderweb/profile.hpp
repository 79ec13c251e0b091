#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "spiderweb/eval.hpp"
#include "spiderweb/util.hpp"

namespace spiderweb {

struct CircleExtremum {
    double log_value = 0.0;  // logmod of the extremum (midpoint when bracketed)
    double lo = 0.0;         // bracket carried through interval-mode samples
    double hi = 0.0;
    double theta = 0.0;      // where it was attained
    int refine_iters = 0;
};

namespace detail {

inline double sample_logmod(const Evaluator& ev, double log_r, double theta, double* lo = nullptr,
                            double* hi = nullptr) {
    EvalOutcome out = ev.eval(BigComplex(log_r, theta));
    if (lo) *lo = out.lo;
    if (hi) *hi = out.hi;
    return out.mid();
}

}  // namespace detail

// Extremum of log|L| on the circle log|z| = log_r: uniform scan, then
// golden-section refinement around the best sample. A sampled maximum is a
// lower estimate of M (and a sampled minimum an upper estimate of m);
// downstream inequality checks carry slack for exactly this reason.
inline CircleExtremum circle_extremum(const Evaluator& ev, double log_r, int samples, bool maximize,
                                      double rel_tol = 1e-6) {
    if (samples < 8) samples = 8;
    std::vector<double> vals(static_cast<std::size_t>(samples));
    std::vector<double> los(vals.size()), his(vals.size());
    parallel_for(vals.size(), [&](std::size_t a, std::size_t b) {
        for (std::size_t k = a; k < b; ++k) {
            double th = normalize_angle(2.0 * kPi * static_cast<double>(k) / samples);
            vals[k] = detail::sample_logmod(ev, log_r, th, &los[k], &his[k]);
        }
    });
    std::size_t best = 0;
    for (std::size_t k = 1; k < vals.size(); ++k)
        if (maximize ? (vals[k] > vals[best]) : (vals[k] < vals[best])) best = k;

    const double sign = maximize ? 1.0 : -1.0;
    double step = 2.0 * kPi / samples;
    double a = 2.0 * kPi * static_cast<double>(best) / samples - step;
    double b = a + 2.0 * step;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = sign * detail::sample_logmod(ev, log_r, normalize_angle(x1));
    double f2 = sign * detail::sample_logmod(ev, log_r, normalize_angle(x2));
    double best_val = sign * vals[best];
    int iters = 0;
    for (; iters < 80; ++iters) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = sign * detail::sample_logmod(ev, log_r, normalize_angle(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = sign * detail::sample_logmod(ev, log_r, normalize_angle(x2));
        }
        double cand = std::max(f1, f2);
        double improvement = cand - best_val;
        if (improvement > 0.0) best_val = cand;
        if (std::abs(b - a) < 1e-12 ||
            (iters > 8 && improvement <= rel_tol * std::max(1.0, std::abs(best_val))))
            break;
    }
    CircleExtremum ex;
    double th_best = normalize_angle(0.5 * (a + b));
    double lo, hi;
    double v = detail::sample_logmod(ev, log_r, th_best, &lo, &hi);
    double v0 = vals[best];
    if (maximize ? (v >= v0) : (v <= v0)) {
        ex.log_value = v;
        ex.lo = lo;
        ex.hi = hi;
        ex.theta = th_best;
    } else {
        ex.log_value = v0;
        ex.lo = los[best];
        ex.hi = his[best];
        ex.theta = normalize_angle(2.0 * kPi * static_cast<double>(best) / samples);
    }
    ex.refine_iters = iters;
    return ex;
}

inline double log_max_modulus(const Evaluator& ev, double log_r, int samples = 1024) {
    return circle_extremum(ev, log_r, samples, true).log_value;
}

inline double log_min_modulus(const Evaluator& ev, double log_r, int samples = 1024) {
    return circle_extremum(ev, log_r, samples, false).log_value;
}

struct ModulusProfile {
    std::vector<double> radii;
    std::vector<double> logM;
    std::vector<double> logm;
    int samples_per_circle = 1024;
    std::vector<cplx> argmax;  // circle points attaining the sampled extrema
    std::vector<cplx> argmin;
};

inline ModulusProfile modulus_profile(const LinearizerSeries& s, const Polynomial& p,
                                      const std::vector<double>& radii, int samples = 1024) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw PreconditionError("modulus_profile: radii must be positive");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw PreconditionError("modulus_profile: radii must be ascending");
    }
    Evaluator ev(s, p);
    ModulusProfile prof;
    prof.radii = radii;
    prof.samples_per_circle = samples;
    for (double r : radii) {
        double lr = std::log(r);
        CircleExtremum mx = circle_extremum(ev, lr, samples, true);
        CircleExtremum mn = circle_extremum(ev, lr, samples, false);
        prof.logM.push_back(mx.log_value);
        prof.logm.push_back(mn.log_value);
        prof.argmax.push_back(r * cplx(std::cos(mx.theta), std::sin(mx.theta)));
        prof.argmin.push_back(r * cplx(std::cos(mn.theta), std::sin(mn.theta)));
    }
    return prof;
}

// Least-squares slope of log log M against log r: the growth order. For a
// linearizer of a degree-d polynomial the theory value is log d / log|lambda|.
inline double order_estimate(const ModulusProfile& prof) {
    if (prof.radii.size() < 4)
        throw PreconditionError("order_estimate: need at least 4 radii");
    if (!(prof.radii.back() / prof.radii.front() >= 99.999))
        throw PreconditionError("order_estimate: radii must span at least 2 decades");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < prof.radii.size(); ++i) {
        if (!(prof.logM[i] > 0.0))
            throw PreconditionError("order_estimate: log M must be positive at every radius");
        double x = std::log(prof.radii[i]);
        double y = std::log(prof.logM[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

inline double theoretical_order(const Polynomial& p, const LinearizerSeries& s) {
    return std::log(static_cast<double>(p.degree())) / std::log(std::abs(s.lambda));
}

}  // namespace spiderweb
