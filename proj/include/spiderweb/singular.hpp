#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "spiderweb/eval.hpp"
#include "spiderweb/roots.hpp"
#include "spiderweb/util.hpp"

namespace spiderweb {

// w is exceptional for p iff p(z) - w == a_d (z - w)^d identically. The
// degree-(d-1) coefficient pins the only candidate w = -a_{d-1} / (d a_d).
inline std::optional<cplx> exceptional_value(const Polynomial& p, double tol = 1e-9) {
    const int d = p.degree();
    const cplx ad = p.coeffs.back();
    const cplx w = -p.coeffs[d - 1] / (static_cast<double>(d) * ad);
    // binomial expansion of a_d (z - w)^d + w
    std::vector<cplx> target(static_cast<std::size_t>(d) + 1, cplx(0.0, 0.0));
    cplx binom = 1.0;
    cplx pw = 1.0;  // (-w)^k
    for (int k = 0; k <= d; ++k) {
        target[d - k] = ad * binom * pw;
        binom *= static_cast<double>(d - k) / static_cast<double>(k + 1);
        pw *= -w;
    }
    target[0] += w;
    double scale = 0.0;
    for (const auto& a : p.coeffs) scale = std::max(scale, std::abs(a));
    scale = std::max(scale, std::abs(w));
    for (int k = 0; k <= d; ++k)
        if (std::abs(p.coeffs[k] - target[k]) > tol * (1.0 + scale)) return std::nullopt;
    return w;
}

struct SingularSets {
    std::vector<cplx> Ev_p;   // exceptional values of p (at most one)
    std::vector<cplx> Ov_L;   // omitted values of L = Ev_p \ {z0}
    std::vector<cplx> Cv_L;   // critical values of L, truncated at the depth
    std::vector<cplx> Pv_p;   // postcritical orbit of p to the depth
};

namespace detail {
inline void push_unique(std::vector<cplx>& v, cplx z, double tol) {
    for (const auto& w : v)
        if (std::abs(w - z) <= tol * (1.0 + std::abs(z))) return;
    v.push_back(z);
}
}  // namespace detail

// Cv(L) = union_{n<=depth} p^n(Cv(p)) \ Ev(p);  Ov(L) = Ev(p) \ {z0};
// Pv truncated to the forward orbit of the critical values.
inline SingularSets singular_sets(const Polynomial& p, cplx z0, int depth, double tol = 1e-9) {
    if (depth < 0) throw PreconditionError("singular_sets: depth must be >= 0");
    SingularSets out;
    if (auto ev = exceptional_value(p, tol)) {
        out.Ev_p.push_back(*ev);
        if (std::abs(*ev - z0) > tol * (1.0 + std::abs(z0))) out.Ov_L.push_back(*ev);
    }
    std::vector<cplx> layer;
    for (const auto& c : critical_points(p)) detail::push_unique(layer, poly_eval(p.coeffs, c), tol);
    for (int n = 0; n <= depth; ++n) {
        for (const auto& v : layer) {
            detail::push_unique(out.Pv_p, v, tol);
            bool exceptional = false;
            for (const auto& e : out.Ev_p)
                if (std::abs(e - v) <= tol * (1.0 + std::abs(v))) exceptional = true;
            if (!exceptional) detail::push_unique(out.Cv_L, v, tol);
        }
        for (auto& v : layer) v = poly_eval(p.coeffs, v);
    }
    auto sorter = [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    std::sort(out.Cv_L.begin(), out.Cv_L.end(), sorter);
    std::sort(out.Pv_p.begin(), out.Pv_p.end(), sorter);
    return out;
}

// --- zeros of L' in an annulus ----------------------------------------------

struct CriticalPointOfL {
    cplx z;         // zero of L'
    cplx image;     // L(z)
    double match_dist = 0.0;  // distance to the nearest truncated Cv_L element
};

struct CvReport {
    int zero_count = 0;
    std::vector<CriticalPointOfL> zeros;
    double max_deviation = 0.0;  // worst match_dist
    bool all_matched = false;
    int unresolved_cells = 0;
};

namespace detail {

// Discrete argument principle: winding of L' along the boundary of the polar
// cell [r0,r1]x[t0,t1]. Adaptively halves steps until every turn is < pi/2;
// returns nullopt when refinement stalls (suspected zero on the boundary).
inline std::optional<int> winding_of_Lprime(const Evaluator& ev, double lr0, double lr1, double t0,
                                            double t1) {
    auto lp = [&](double lr, double th) {
        BigComplex val, der;
        ev.eval_with_derivative(BigComplex(lr, normalize_angle(th)), val, der);
        return der;
    };
    struct Pt {
        double lr, th;
    };
    auto segment_turn = [&](Pt a, Pt b, double& total) -> bool {
        // walk from a to b, subdividing until arg steps are small
        int steps = 8;
        for (int attempt = 0; attempt < 8; ++attempt) {
            double sum = 0.0;
            bool ok = true;
            BigComplex prev = lp(a.lr, a.th);
            for (int i = 1; i <= steps; ++i) {
                double f = static_cast<double>(i) / steps;
                BigComplex cur = lp(a.lr + f * (b.lr - a.lr), a.th + f * (b.th - a.th));
                if (cur.is_zero()) return false;
                double d = normalize_angle(cur.arg - prev.arg);
                if (std::abs(d) > kPi / 2) {
                    ok = false;
                    break;
                }
                sum += d;
                prev = cur;
            }
            if (ok) {
                total += sum;
                return true;
            }
            steps *= 2;
        }
        return false;
    };
    double total = 0.0;
    Pt c0{lr0, t0}, c1{lr1, t0}, c2{lr1, t1}, c3{lr0, t1};
    if (!segment_turn(c0, c1, total) || !segment_turn(c1, c2, total) ||
        !segment_turn(c2, c3, total) || !segment_turn(c3, c0, total))
        return std::nullopt;
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

}  // namespace detail

// Locate zeros of L' with annulus_lo <= |z| <= annulus_hi (argument-principle
// count on polar cells + Newton refinement), then check each image L(zero)
// against the truncated Cv_L set.
inline CvReport verify_Cv_characterization(const LinearizerSeries& s, const Polynomial& p, int depth,
                                           std::pair<double, double> annulus, double match_tol = 1e-6,
                                           int radial_cells = 24, int angular_cells = 24) {
    if (!(annulus.first > 0.0 && annulus.second > annulus.first))
        throw PreconditionError("verify_Cv_characterization: bad annulus");
    Evaluator ev(s, p);
    SingularSets sets = singular_sets(p, s.z0, depth);
    CvReport rep;

    const double lr_lo = std::log(annulus.first), lr_hi = std::log(annulus.second);
    // deterministic offset keeps cell borders off the axes where zeros like
    // to sit
    const double toff = 0.1234567;

    struct Cell {
        double lr0, lr1, t0, t1;
        int depth_left;
    };
    std::vector<Cell> work;
    for (int i = 0; i < radial_cells; ++i)
        for (int j = 0; j < angular_cells; ++j)
            work.push_back({lr_lo + (lr_hi - lr_lo) * i / radial_cells,
                            lr_lo + (lr_hi - lr_lo) * (i + 1) / radial_cells,
                            toff + 2.0 * kPi * j / angular_cells,
                            toff + 2.0 * kPi * (j + 1) / angular_cells, 6});

    std::vector<Cell> hits;
    while (!work.empty()) {
        Cell cell = work.back();
        work.pop_back();
        auto w = detail::winding_of_Lprime(ev, cell.lr0, cell.lr1, cell.t0, cell.t1);
        if (!w) {
            if (cell.depth_left <= 0) {
                ++rep.unresolved_cells;
                continue;
            }
            // nudge the cell: a boundary zero is suspected
            double dlr = (cell.lr1 - cell.lr0) * 0.137;
            work.push_back({cell.lr0 - dlr, cell.lr1 + dlr, cell.t0 + 0.07, cell.t1 + 0.07,
                            cell.depth_left - 1});
            continue;
        }
        if (*w == 0) continue;
        if (*w == 1 || cell.depth_left <= 0) {
            hits.push_back(cell);
            continue;
        }
        double mlr = 0.5 * (cell.lr0 + cell.lr1), mt = 0.5 * (cell.t0 + cell.t1);
        work.push_back({cell.lr0, mlr, cell.t0, mt, cell.depth_left - 1});
        work.push_back({mlr, cell.lr1, cell.t0, mt, cell.depth_left - 1});
        work.push_back({cell.lr0, mlr, mt, cell.t1, cell.depth_left - 1});
        work.push_back({mlr, cell.lr1, mt, cell.t1, cell.depth_left - 1});
    }

    for (const auto& cell : hits) {
        // Newton on the composite L' (valid beyond the series disk), second
        // derivative by central differences, steps damped to the cell size
        double lr = 0.5 * (cell.lr0 + cell.lr1), th = 0.5 * (cell.t0 + cell.t1);
        cplx z = std::exp(lr) * cplx(std::cos(th), std::sin(th));
        auto lprime = [&](cplx w) {
            BigComplex val, der;
            ev.eval_with_derivative(BigComplex::from(w), val, der);
            return der.to_complex();
        };
        const double cell_diag = std::abs(z) * std::max(cell.lr1 - cell.lr0, cell.t1 - cell.t0);
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            cplx f = lprime(z);
            double h = 1e-5 * (1.0 + std::abs(z));
            cplx d2 = (lprime(z + cplx(h, 0.0)) - lprime(z - cplx(h, 0.0))) / (2.0 * h);
            if (d2 == cplx(0.0, 0.0)) break;
            cplx step = f / d2;
            if (std::abs(step) > cell_diag) step *= cell_diag / std::abs(step);
            z -= step;
            if (std::abs(step) < 1e-11 * (1.0 + std::abs(z))) {
                ok = true;
                break;
            }
        }
        (void)ok;
        CriticalPointOfL cp;
        cp.z = z;
        cp.image = ev.eval(BigComplex::from(z)).value.to_complex();
        double best = std::numeric_limits<double>::infinity();
        for (const auto& v : sets.Cv_L) best = std::min(best, std::abs(v - cp.image));
        cp.match_dist = sets.Cv_L.empty() ? std::numeric_limits<double>::infinity() : best;
        rep.zeros.push_back(cp);
    }
    std::sort(rep.zeros.begin(), rep.zeros.end(), [](const CriticalPointOfL& a, const CriticalPointOfL& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    rep.zero_count = static_cast<int>(rep.zeros.size());
    rep.all_matched = true;
    for (const auto& c : rep.zeros) {
        rep.max_deviation = std::max(rep.max_deviation, c.match_dist);
        if (!(c.match_dist <= match_tol)) rep.all_matched = false;
    }
    if (rep.zeros.empty()) rep.all_matched = true;
    return rep;
}

}  // namespace spiderweb
