#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "spiderweb/util.hpp"

namespace spiderweb {

// Closed polyline (last point joins back to the first), with cached winding
// about a center of interest.
struct ClosedCurve {
    std::vector<cplx> pts;
    cplx center{0.0, 0.0};
    int winding = 0;

    bool empty() const { return pts.empty(); }
    std::size_t size() const { return pts.size(); }

    double min_abs() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& z : pts) m = std::min(m, std::abs(z));
        return m;
    }
    double max_abs() const {
        double m = 0.0;
        for (const auto& z : pts) m = std::max(m, std::abs(z));
        return m;
    }
    double max_dist(cplx w) const {
        double m = 0.0;
        for (const auto& z : pts) m = std::max(m, std::abs(z - w));
        return m;
    }
};

// Winding number of the closed polyline about w (sum of turn angles / 2 pi).
inline int winding_number(const std::vector<cplx>& pts, cplx w) {
    if (pts.size() < 3) return 0;
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        cplx u = pts[i] - w;
        cplx v = pts[(i + 1) % pts.size()] - w;
        total += std::arg(v / u);
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

inline ClosedCurve make_closed_curve(std::vector<cplx> pts, cplx center) {
    ClosedCurve c;
    c.pts = std::move(pts);
    c.center = center;
    c.winding = winding_number(c.pts, center);
    return c;
}

}  // namespace spiderweb
