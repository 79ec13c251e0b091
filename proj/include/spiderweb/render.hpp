#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "spiderweb/config.hpp"
#include "spiderweb/curve.hpp"
#include "spiderweb/levels.hpp"
#include "spiderweb/util.hpp"

namespace spiderweb {

struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // RGB triples, row-major, top row first

    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        if (x < 0 || x >= width || y < 0 || y >= height) return;
        std::size_t k = 3 * (static_cast<std::size_t>(y) * width + x);
        pixels[k] = r;
        pixels[k + 1] = g;
        pixels[k + 2] = b;
    }
};

inline void write_ppm(const RasterImage& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw NumericError("cannot open image for writing: " + path);
    f << "P6\n" << img.width << " " << img.height << "\n255\n";
    f.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

namespace detail {

// fixed palette indexed by level (-1 through 3+) with a grey for indeterminate
inline std::array<std::uint8_t, 3> level_color(int level, bool indeterminate) {
    if (indeterminate) return {96, 96, 96};
    switch (level) {
        case -1: return {12, 12, 40};
        case 0: return {30, 45, 90};
        case 1: return {40, 110, 160};
        case 2: return {90, 190, 190};
        default: return {235, 240, 210};
    }
}

inline void draw_line(RasterImage& img, int x0, int y0, int x1, int y1, std::uint8_t r,
                      std::uint8_t g, std::uint8_t b) {
    int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        img.set(x0, y0, r, g, b);
        if (x0 == x1 && y0 == y1) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

}  // namespace detail

// Per-pixel level_membership coloring over the render window, with certified
// rings overlaid as 1-pixel polylines. Rows run in parallel; output is
// deterministic for a fixed config.
inline RasterImage render_image(const LinearizerSeries& s, const Polynomial& p,
                                const LevelParams& params, const RenderConfig& rc,
                                const std::vector<ClosedCurve>& rings,
                                std::size_t* indeterminate_pixels = nullptr) {
    RasterImage img;
    img.width = rc.px_w;
    img.height = rc.px_h;
    img.pixels.assign(3 * static_cast<std::size_t>(rc.px_w) * rc.px_h, 0);
    const double height_world = rc.width * rc.px_h / rc.px_w;
    const double x0 = rc.center.real() - rc.width / 2.0;
    const double y0 = rc.center.imag() + height_world / 2.0;
    const int depth = std::min(rc.depth, std::max(1, params.available_depth()));

    std::vector<std::size_t> row_indeterminate(static_cast<std::size_t>(rc.px_h), 0);
    parallel_for(static_cast<std::size_t>(rc.px_h), [&](std::size_t lo, std::size_t hi) {
        Evaluator ev(s, p);
        for (std::size_t y = lo; y < hi; ++y) {
            for (int x = 0; x < rc.px_w; ++x) {
                cplx z(x0 + (x + 0.5) * rc.width / rc.px_w,
                       y0 - (static_cast<double>(y) + 0.5) * height_world / rc.px_h);
                LevelMembership lm = level_membership(ev, BigComplex::from(z), params, depth);
                bool indet = lm.indeterminate && lm.max_level < depth;
                if (indet) ++row_indeterminate[y];
                auto c = detail::level_color(lm.max_level, indet);
                img.set(x, static_cast<int>(y), c[0], c[1], c[2]);
            }
        }
    });
    if (indeterminate_pixels) {
        *indeterminate_pixels = 0;
        for (std::size_t v : row_indeterminate) *indeterminate_pixels += v;
    }

    // segments with an endpoint beyond a few window widths are clipped out in
    // double space before any int conversion
    const double guard_x = 8.0 * rc.px_w, guard_y = 8.0 * rc.px_h;
    auto to_px = [&](cplx z, double& px, double& py) {
        px = std::floor((z.real() - x0) / rc.width * rc.px_w);
        py = std::floor((y0 - z.imag()) / height_world * rc.px_h);
        return std::abs(px) <= guard_x && std::abs(py) <= guard_y;
    };
    for (const auto& ring : rings) {
        if (ring.empty()) continue;
        for (std::size_t i = 0; i < ring.pts.size(); ++i) {
            double ax, ay, bx, by;
            if (!to_px(ring.pts[i], ax, ay)) continue;
            if (!to_px(ring.pts[(i + 1) % ring.pts.size()], bx, by)) continue;
            if ((ax < 0 && bx < 0) || (ax >= rc.px_w && bx >= rc.px_w) || (ay < 0 && by < 0) ||
                (ay >= rc.px_h && by >= rc.px_h))
                continue;
            detail::draw_line(img, static_cast<int>(ax), static_cast<int>(ay),
                              static_cast<int>(bx), static_cast<int>(by), 235, 80, 60);
        }
    }
    return img;
}

}  // namespace spiderweb
