#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "spiderweb/curve.hpp"
#include "spiderweb/polynomial.hpp"
#include "spiderweb/roots.hpp"
#include "spiderweb/util.hpp"

namespace spiderweb {

// First 1-based position in the orbit z, p(z), p^2(z), ... whose modulus
// exceeds R_esc; 0 when the whole budget stays bounded.
inline int first_exit_index(const Polynomial& p, cplx z, double r_esc, int max_iter) {
    cplx w = z;
    for (int k = 1; k <= max_iter; ++k) {
        if (std::abs(w) > r_esc) return k;
        w = poly_eval(p.coeffs, w);
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return k + 1;
    }
    return 0;
}

struct CriticalEscape {
    cplx point;
    bool escapes = false;
    int first_exit = 0;  // 1-based orbit position, 0 = did not exit in budget
};

inline std::vector<CriticalEscape> critical_escape(const Polynomial& p, int max_iter = 256) {
    if (max_iter < 1) throw PreconditionError("critical_escape: max_iter must be >= 1");
    const double r_esc = escape_radius(p);
    std::vector<CriticalEscape> out;
    for (const auto& c : critical_points(p)) {
        CriticalEscape rec;
        rec.point = c;
        rec.first_exit = first_exit_index(p, c, r_esc, max_iter);
        rec.escapes = rec.first_exit > 0;
        out.push_back(rec);
    }
    return out;
}

namespace detail {

// Escape iteration count capped at budget; budget+1 means "did not escape".
inline int escape_steps(const Polynomial& p, cplx z, double r_esc, int budget) {
    cplx w = z;
    for (int k = 0; k <= budget; ++k) {
        if (std::abs(w) > r_esc) return k;
        w = poly_eval(p.coeffs, w);
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return k + 1;
    }
    return budget + 1;
}

}  // namespace detail

// Simple closed curve of verified-escaping points around a repelling fixed
// point inside D_delta(z0). Built from the escape-time field on a grid:
// the budget is raised until the slow set around z0 detaches from the box
// boundary, then its boundary is traced marching-squares style and each
// crossing is sharpened by bisection toward the escaping side.
inline std::optional<ClosedCurve> escape_curve(const Polynomial& p, cplx z0, double delta,
                                               int resolution = 96, int budget = 512,
                                               int min_vertices = 64) {
    if (!(delta > 0.0)) throw PreconditionError("escape_curve: delta must be positive");
    if (resolution < 8) resolution = 8;
    if (resolution % 2 != 0) ++resolution;  // keep z0 on a grid node

    const double r_esc = escape_radius(p);
    const double half = delta / std::sqrt(2.0) * 0.999;  // box inside D_delta
    const int n = resolution;  // cells per side; nodes are (n+1)^2
    const double step = 2.0 * half / n;

    auto node = [&](int i, int j) {
        return z0 + cplx((i - n / 2) * step, (j - n / 2) * step);
    };

    std::vector<int> esc(static_cast<std::size_t>(n + 1) * (n + 1));
    parallel_for(static_cast<std::size_t>(n + 1), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j < hi; ++j)
            for (int i = 0; i <= n; ++i)
                esc[j * (n + 1) + i] =
                    detail::escape_steps(p, node(i, static_cast<int>(j)), r_esc, budget);
    });
    auto esc_at = [&](int i, int j) { return esc[static_cast<std::size_t>(j) * (n + 1) + i]; };

    // Smallest budget B whose slow set {esc > B} avoids the box boundary.
    int bmax = 0;
    for (int i = 0; i <= n; ++i) {
        bmax = std::max({bmax, esc_at(i, 0), esc_at(i, n), esc_at(0, i), esc_at(n, i)});
    }
    if (bmax > budget) return std::nullopt;  // boundary touches the non-escaping set
    const int level = bmax + 1;

    // region = slow nodes plus the four nodes around z0 (z0 itself never escapes)
    std::vector<char> region(esc.size(), 0);
    for (std::size_t k = 0; k < esc.size(); ++k) region[k] = esc[k] >= level ? 1 : 0;
    region[static_cast<std::size_t>(n / 2) * (n + 1) + n / 2] = 1;

    // component containing z0 (4-connected flood)
    std::vector<char> comp(region.size(), 0);
    std::vector<std::pair<int, int>> stack{{n / 2, n / 2}};
    comp[static_cast<std::size_t>(n / 2) * (n + 1) + n / 2] = 1;
    while (!stack.empty()) {
        auto [i, j] = stack.back();
        stack.pop_back();
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            int ii = i + di[k], jj = j + dj[k];
            if (ii < 0 || ii > n || jj < 0 || jj > n) continue;
            std::size_t idx = static_cast<std::size_t>(jj) * (n + 1) + ii;
            if (region[idx] && !comp[idx]) {
                comp[idx] = 1;
                stack.emplace_back(ii, jj);
            }
        }
    }
    for (int i = 0; i <= n; ++i)
        if (comp[static_cast<std::size_t>(0) * (n + 1) + i] || comp[static_cast<std::size_t>(n) * (n + 1) + i] ||
            comp[static_cast<std::size_t>(i) * (n + 1) + 0] || comp[static_cast<std::size_t>(i) * (n + 1) + n])
            return std::nullopt;

    auto inside = [&](int i, int j) { return comp[static_cast<std::size_t>(j) * (n + 1) + i] != 0; };

    // Walk the rectilinear boundary of the union of half-step squares around
    // component nodes (left-hand rule); unambiguous for 4-connected sets.
    // Directed boundary edges live between an inside node and its outside
    // neighbour; each contributes one refined crossing vertex.
    struct Edge {
        int i, j, di, dj;  // inside node and offset to outside node
        bool operator==(const Edge& o) const {
            return i == o.i && j == o.j && di == o.di && dj == o.dj;
        }
    };
    Edge start{-1, -1, 0, 0};
    for (int j = 0; j <= n && start.i < 0; ++j)
        for (int i = 0; i <= n && start.i < 0; ++i)
            if (inside(i, j) && (i == n || !inside(i + 1, j))) start = {i, j, 1, 0};
    if (start.i < 0) return std::nullopt;

    auto outside_ok = [&](int i, int j) { return i < 0 || i > n || j < 0 || j > n || !inside(i, j); };

    std::vector<Edge> edges;
    Edge cur = start;
    do {
        edges.push_back(cur);
        // rotate around the inside node: try turning left, straight, right
        // relative to the outward normal (di,dj)
        int ti = -cur.dj, tj = cur.di;  // tangent (CCW around component)
        int ni = cur.i + ti, nj = cur.j + tj;
        if (!outside_ok(ni, nj) && outside_ok(ni + cur.di, nj + cur.dj)) {
            cur = {ni, nj, cur.di, cur.dj};  // straight along the boundary
        } else if (!outside_ok(ni, nj) && !outside_ok(ni + cur.di, nj + cur.dj)) {
            cur = {ni + cur.di, nj + cur.dj, -ti, -tj};  // outer corner advance
        } else {
            cur = {cur.i, cur.j, ti, tj};  // turn in place
        }
        if (edges.size() > 8u * region.size()) return std::nullopt;
    } while (!(cur == start));

    // Refine one crossing per edge: bisect toward the escaping side, then
    // verify the vertex really escapes.
    std::vector<cplx> verts(edges.size());
    bool fail = false;
    parallel_for(edges.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const Edge& e = edges[k];
            cplx a = node(e.i, e.j);                      // inside (slow)
            cplx b = node(e.i + e.di, e.j + e.dj);        // outside (escaping)
            if (e.i + e.di < 0 || e.i + e.di > n || e.j + e.dj < 0 || e.j + e.dj > n) {
                fail = true;
                continue;
            }
            for (int it = 0; it < 40; ++it) {
                cplx mid = 0.5 * (a + b);
                if (detail::escape_steps(p, mid, r_esc, budget) >= level)
                    a = mid;
                else
                    b = mid;
            }
            cplx v = b;
            int guard = 0;
            while (detail::escape_steps(p, v, r_esc, 2 * budget) > 2 * budget && guard++ < 8)
                v = 0.5 * (v + node(e.i + e.di, e.j + e.dj));
            if (guard >= 8) fail = true;
            verts[k] = v;
        }
    });
    if (fail || verts.size() < 4) return std::nullopt;

    // densify with verified radial midpoints (mean angle, mean radius about
    // z0): chord midpoints would pull inward toward the slow set
    while (static_cast<int>(verts.size()) < min_vertices && verts.size() < 4096) {
        std::vector<cplx> dense;
        dense.reserve(2 * verts.size());
        std::size_t before = verts.size();
        for (std::size_t k = 0; k < verts.size(); ++k) {
            cplx a = verts[k] - z0, b = verts[(k + 1) % verts.size()] - z0;
            dense.push_back(verts[k]);
            double ra = std::abs(a), rb = std::abs(b);
            if (ra == 0.0 || rb == 0.0) continue;
            double dphi = std::arg(b / a);
            cplx mid = z0 + a * std::polar(0.5 * (ra + rb) / ra, 0.5 * dphi);
            if (detail::escape_steps(p, mid, r_esc, 2 * budget) <= 2 * budget) dense.push_back(mid);
        }
        verts = std::move(dense);
        if (verts.size() == before) break;  // nothing could be verified
    }

    ClosedCurve curve = make_closed_curve(std::move(verts), z0);
    if (curve.winding == -1) {
        std::reverse(curve.pts.begin(), curve.pts.end());
        curve.winding = 1;
    }
    if (curve.winding != 1) return std::nullopt;
    if (curve.max_dist(z0) > delta) return std::nullopt;
    return curve;
}

enum class ConnectivityStatus { singleton_certified, singleton_evidence, nontrivial_evidence, unknown };

inline const char* to_string(ConnectivityStatus s) {
    switch (s) {
        case ConnectivityStatus::singleton_certified: return "singleton_certified";
        case ConnectivityStatus::singleton_evidence: return "singleton_evidence";
        case ConnectivityStatus::nontrivial_evidence: return "nontrivial_evidence";
        case ConnectivityStatus::unknown: return "unknown";
    }
    return "?";
}

struct ConnectivityVerdict {
    ConnectivityStatus status = ConnectivityStatus::unknown;
    int depth = 0;  // index of the smallest scale reached
    std::vector<CriticalEscape> critical_orbits;
    std::vector<double> scales_found;   // delta values where a curve existed
    std::vector<double> scales_failed;  // delta values with no separating contour
};

// Evidence about the Julia component at z0. Full critical escape certifies a
// totally disconnected Julia set; otherwise contour evidence is heuristic.
inline ConnectivityVerdict component_verdict(const Polynomial& p, cplx z0,
                                             const std::vector<double>& scales,
                                             int resolution = 96) {
    ConnectivityVerdict v;
    v.critical_orbits = critical_escape(p);
    bool all_escape = !v.critical_orbits.empty();
    for (const auto& rec : v.critical_orbits) all_escape = all_escape && rec.escapes;
    if (all_escape) {
        v.status = ConnectivityStatus::singleton_certified;
        v.depth = static_cast<int>(scales.size());
        return v;
    }
    for (std::size_t i = 0; i < scales.size(); ++i) {
        auto curve = escape_curve(p, z0, scales[i], resolution);
        if (!curve) curve = escape_curve(p, z0, scales[i], resolution * 2);
        if (curve) {
            v.scales_found.push_back(scales[i]);
            v.depth = static_cast<int>(i) + 1;
        } else {
            v.scales_failed.push_back(scales[i]);
        }
    }
    if (v.scales_failed.empty() && !v.scales_found.empty())
        v.status = ConnectivityStatus::singleton_evidence;
    else if (!v.scales_failed.empty())
        v.status = ConnectivityStatus::nontrivial_evidence;
    else
        v.status = ConnectivityStatus::unknown;
    return v;
}

}  // namespace spiderweb
