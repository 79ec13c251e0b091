#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "spiderweb/util.hpp"

namespace spiderweb {

// h(z) = a z + b with a != 0.
struct AffineMap {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};

    cplx operator()(cplx z) const { return a * z + b; }
    AffineMap inverse() const { return {1.0 / a, -b / a}; }
    bool is_identity(double tol = 1e-12) const {
        return std::abs(a - 1.0) <= tol && std::abs(b) <= tol;
    }
    friend AffineMap compose(const AffineMap& f, const AffineMap& g) {
        // (f o g)(z) = f(g(z))
        return {f.a * g.a, f.a * g.b + f.b};
    }
};

namespace detail {
inline bool maps_set_to_itself(const AffineMap& h, const std::vector<cplx>& Z, double tol) {
    std::vector<bool> used(Z.size(), false);
    for (const auto& z : Z) {
        cplx w = h(z);
        bool hit = false;
        for (std::size_t j = 0; j < Z.size(); ++j) {
            if (!used[j] && std::abs(Z[j] - w) <= tol) {
                used[j] = true;
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}
}  // namespace detail

// All affine maps with h(Z) = Z. Every such map fixes the centroid and has
// |a| = 1, so candidates come from sending one extremal point to each element.
inline std::vector<AffineMap> affine_symmetries(const std::vector<cplx>& Z, double tol = 1e-9) {
    if (Z.size() < 2) throw PreconditionError("affine_symmetries: need at least 2 points");
    cplx g = 0.0;
    for (const auto& z : Z) g += z;
    g /= static_cast<double>(Z.size());

    std::size_t base = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < Z.size(); ++i) {
        double dist = std::abs(Z[i] - g);
        if (dist > best) {
            best = dist;
            base = i;
        }
    }
    if (best <= tol) throw PreconditionError("affine_symmetries: points coincide with centroid");

    std::vector<AffineMap> group;
    for (const auto& target : Z) {
        cplx a = (target - g) / (Z[base] - g);
        if (std::abs(std::abs(a) - 1.0) > 1e-6) continue;
        AffineMap h{a, g - a * g};
        if (!detail::maps_set_to_itself(h, Z, tol)) continue;
        bool dup = false;
        for (const auto& e : group)
            if (std::abs(e.a - h.a) <= 1e-9 && std::abs(e.b - h.b) <= 1e-9) dup = true;
        if (!dup) group.push_back(h);
    }
    std::sort(group.begin(), group.end(), [](const AffineMap& x, const AffineMap& y) {
        double ax = std::arg(x.a), ay = std::arg(y.a);
        if (ax != ay) return ax < ay;
        return std::abs(x.b) < std::abs(y.b);
    });
    return group;
}

}  // namespace spiderweb
