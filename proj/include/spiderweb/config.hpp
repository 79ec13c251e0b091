#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spiderweb/polynomial.hpp"
#include "spiderweb/util.hpp"

namespace spiderweb {

struct RenderConfig {
    cplx center{0.0, 0.0};
    double width = 20.0;
    int px_w = 256;
    int px_h = 256;
    int depth = 3;
};

struct RunConfig {
    int version = 1;
    std::string label = "case";
    std::vector<cplx> poly_coeffs;
    std::optional<int> fixed_point_index;
    std::optional<cplx> fixed_point_hint;
    int series_N = 64;
    cplx normalization{1.0, 0.0};
    double residual_tol = 1e-8;
    double eps = 0.01;
    int depth = 3;
    std::vector<double> profile_radii;
    std::vector<double> order_radii;
    double regularity_r = 0.0;  // 0 = pick automatically
    int regularity_n_max = 6;
    int fast_growth_k = 1;
    int fast_growth_n_lo = 2;
    int fast_growth_n_hi = 4;
    std::vector<double> falsify_radii = {1.0, 5.0, 10.0, 50.0};
    std::vector<double> escape_scales = {0.1, 0.01};
    std::optional<RenderConfig> render;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

inline cplx parse_complex(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError("field '" + field + "': expected a complex number as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline RunConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config parse error at line " +
                          std::to_string(detail::line_of_byte(text, e.byte)) + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    RunConfig cfg;
    if (!j.contains("version") || !j["version"].is_number_integer())
        throw ConfigError("field 'version': required integer");
    cfg.version = j["version"].get<int>();
    if (cfg.version != 1) throw ConfigError("field 'version': only version 1 is supported");

    if (j.contains("label")) cfg.label = j["label"].get<std::string>();

    if (!j.contains("polynomial") || !j["polynomial"].is_array() || j["polynomial"].size() < 3)
        throw ConfigError("field 'polynomial': required array of >= 3 complex pairs [re, im]");
    for (std::size_t i = 0; i < j["polynomial"].size(); ++i)
        cfg.poly_coeffs.push_back(
            detail::parse_complex(j["polynomial"][i], "polynomial[" + std::to_string(i) + "]"));
    if (cfg.poly_coeffs.back() == cplx(0.0, 0.0))
        throw ConfigError("field 'polynomial': leading coefficient a_d must be nonzero "
                          "(polynomial invariant a_d != 0)");

    if (j.contains("fixed_point")) {
        const auto& fp = j["fixed_point"];
        if (fp.contains("index"))
            cfg.fixed_point_index = fp["index"].get<int>();
        else if (fp.contains("nearest_to"))
            cfg.fixed_point_hint = detail::parse_complex(fp["nearest_to"], "fixed_point.nearest_to");
        else
            throw ConfigError("field 'fixed_point': need 'index' or 'nearest_to'");
    }

    if (j.contains("series")) {
        const auto& sj = j["series"];
        if (sj.contains("N")) cfg.series_N = sj["N"].get<int>();
        if (sj.contains("normalization"))
            cfg.normalization = detail::parse_complex(sj["normalization"], "series.normalization");
        if (cfg.series_N < 2) throw ConfigError("field 'series.N': must be >= 2");
        if (cfg.normalization == cplx(0.0, 0.0))
            throw ConfigError("field 'series.normalization': must be nonzero");
    }

    if (j.contains("tolerances")) {
        const auto& tj = j["tolerances"];
        if (tj.contains("residual")) cfg.residual_tol = tj["residual"].get<double>();
        if (tj.contains("eps")) cfg.eps = tj["eps"].get<double>();
        if (!(cfg.eps > 0.0 && cfg.eps < 0.5))
            throw ConfigError("field 'tolerances.eps': must lie in (0, 1/2)");
        if (!(cfg.residual_tol > 0.0))
            throw ConfigError("field 'tolerances.residual': must be positive");
    }

    if (j.contains("depth")) cfg.depth = j["depth"].get<int>();
    if (cfg.depth < 0) throw ConfigError("field 'depth': must be >= 0");

    auto read_radii = [&](const char* name, std::vector<double>& out) {
        if (!j.contains(name)) return;
        out.clear();
        for (const auto& v : j[name]) {
            if (!v.is_number()) throw ConfigError(std::string("field '") + name + "': numbers only");
            out.push_back(v.get<double>());
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (!(out[i] > 0.0)) throw ConfigError(std::string("field '") + name + "': radii must be positive");
            if (i && !(out[i] > out[i - 1]))
                throw ConfigError(std::string("field '") + name + "': radii must be ascending");
        }
    };
    read_radii("profile_radii", cfg.profile_radii);
    read_radii("order_radii", cfg.order_radii);
    read_radii("falsify_radii", cfg.falsify_radii);

    if (j.contains("escape_scales")) {
        cfg.escape_scales.clear();
        for (const auto& v : j["escape_scales"]) cfg.escape_scales.push_back(v.get<double>());
    }
    if (j.contains("regularity")) {
        const auto& rj = j["regularity"];
        if (rj.contains("r")) cfg.regularity_r = rj["r"].get<double>();
        if (rj.contains("n_max")) cfg.regularity_n_max = rj["n_max"].get<int>();
    }
    if (j.contains("fast_growth")) {
        const auto& fj = j["fast_growth"];
        if (fj.contains("k")) cfg.fast_growth_k = fj["k"].get<int>();
        if (fj.contains("n_lo")) cfg.fast_growth_n_lo = fj["n_lo"].get<int>();
        if (fj.contains("n_hi")) cfg.fast_growth_n_hi = fj["n_hi"].get<int>();
    }
    if (j.contains("render")) {
        const auto& rj = j["render"];
        RenderConfig rc;
        if (rj.contains("center")) rc.center = detail::parse_complex(rj["center"], "render.center");
        if (rj.contains("width")) rc.width = rj["width"].get<double>();
        if (rj.contains("pixels")) {
            rc.px_w = rj["pixels"][0].get<int>();
            rc.px_h = rj["pixels"][1].get<int>();
        }
        if (rj.contains("depth")) rc.depth = rj["depth"].get<int>();
        if (rc.px_w <= 0 || rc.px_h <= 0)
            throw ConfigError("field 'render.pixels': dimensions must be positive");
        if (!(rc.width > 0.0)) throw ConfigError("field 'render.width': must be positive");
        if (rc.depth < 1 || rc.depth > 3)
            throw ConfigError("field 'render.depth': supported range is 1..3");
        cfg.render = rc;
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace spiderweb
