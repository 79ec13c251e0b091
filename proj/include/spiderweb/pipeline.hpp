#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spiderweb/config.hpp"
#include "spiderweb/escape.hpp"
#include "spiderweb/eval.hpp"
#include "spiderweb/growth_checks.hpp"
#include "spiderweb/levels.hpp"
#include "spiderweb/profile.hpp"
#include "spiderweb/render.hpp"
#include "spiderweb/rings.hpp"
#include "spiderweb/roots.hpp"
#include "spiderweb/series.hpp"
#include "spiderweb/web.hpp"

namespace spiderweb {

enum class Stage { analyze, series, growth, rings, web, render };

// Everything computed along the pipeline; also kept in memory so tests and
// the CLI can inspect intermediate results.
struct PipelineResult {
    Polynomial poly;
    FixedPointInfo fixed_point;
    ConnectivityVerdict connectivity;
    LinearizerSeries series;
    GrowthBounds gb;
    LevelParams params;
    ModulusProfile profile;
    std::optional<double> order_fit;
    RegularityTable regularity;
    FastGrowthTable fast_growth;
    std::optional<CurveScaling> scaling;
    WebReport report;
    std::vector<std::string> artifacts;  // files written, in order
};

namespace detail {

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw NumericError("cannot write " + path);
    f << content;
}

inline std::string profile_csv(const ModulusProfile& prof) {
    std::ostringstream os;
    os << "r,logM,logm\n";
    for (std::size_t i = 0; i < prof.radii.size(); ++i)
        os << fmt17(prof.radii[i]) << "," << fmt17(prof.logM[i]) << "," << fmt17(prof.logm[i])
           << "\n";
    return os.str();
}

inline std::string regularity_csv(const RegularityTable& t, bool lower_side) {
    std::ostringstream os;
    os << "n,lhs,rhs,pass\n";
    for (const auto& row : t.rows) {
        double lhs = lower_side ? row.lower : row.ratio;
        double rhs = lower_side ? row.ratio : row.upper;
        bool pass = lower_side ? (row.lower / kGrowthSlack <= row.ratio)
                               : (row.ratio <= row.upper * kGrowthSlack);
        os << row.n << "," << fmt17(lhs) << "," << fmt17(rhs) << "," << (pass ? 1 : 0) << "\n";
    }
    return os.str();
}

inline std::string fast_growth_csv(const FastGrowthTable& t) {
    std::ostringstream os;
    os << "n,lhs,rhs,pass\n";
    for (const auto& row : t.rows)
        os << row.n << "," << fmt17(row.lhs) << "," << fmt17(row.rhs) << "," << (row.pass ? 1 : 0)
           << "\n";
    return os.str();
}

inline std::string falsify_csv(const FalsifyReport& rep) {
    std::ostringstream os;
    os << "r,logm,logK,pass\n";
    for (const auto& row : rep.rows)
        os << fmt17(row.r) << "," << fmt17(row.log_min) << "," << fmt17(std::log(rep.K)) << ","
           << (row.pass ? 1 : 0) << "\n";
    return os.str();
}

inline FixedPointInfo select_fixed_point(const std::vector<FixedPointInfo>& fps,
                                         const RunConfig& cfg) {
    if (fps.empty()) throw NumericError("no fixed points found");
    if (cfg.fixed_point_index) {
        int idx = *cfg.fixed_point_index;
        if (idx < 0 || idx >= static_cast<int>(fps.size()))
            throw ConfigError("field 'fixed_point.index': out of range 0.." +
                              std::to_string(fps.size() - 1));
        return fps[static_cast<std::size_t>(idx)];
    }
    if (cfg.fixed_point_hint) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < fps.size(); ++i)
            if (std::abs(fps[i].z0 - *cfg.fixed_point_hint) <
                std::abs(fps[best].z0 - *cfg.fixed_point_hint))
                best = i;
        return fps[best];
    }
    // default: the repelling fixed point of largest multiplier modulus
    std::size_t best = fps.size();
    for (std::size_t i = 0; i < fps.size(); ++i) {
        if (fps[i].cls != FixedPointClass::repelling) continue;
        if (best == fps.size() || std::abs(fps[i].multiplier) > std::abs(fps[best].multiplier))
            best = i;
    }
    if (best == fps.size()) throw ConfigError("polynomial has no repelling fixed point");
    return fps[best];
}

inline double default_delta0(const Polynomial& p, const FixedPointInfo& fp,
                             const std::vector<FixedPointInfo>& fps) {
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& other : fps)
        if (std::abs(other.z0 - fp.z0) > 1e-12)
            dist = std::min(dist, std::abs(other.z0 - fp.z0));
    for (const auto& c : critical_points(p)) dist = std::min(dist, std::abs(c - fp.z0));
    if (!std::isfinite(dist)) dist = 1.0;
    return dist / 2.0;
}

}  // namespace detail

// Full pipeline up to the requested stage, writing artifacts along the way.
// Throws ConfigError for input problems and NumericError for runtime failures;
// the CLI maps these to exit codes 1 and 2.
inline PipelineResult run_pipeline(const RunConfig& cfg, Stage upto, bool verbose = true,
                                   int samples = 512) {
    namespace fs = std::filesystem;
    PipelineResult res;
    auto log = [&](const std::string& msg) {
        if (verbose) std::cout << msg << "\n";
    };

    res.poly = Polynomial(cfg.poly_coeffs);
    RootOptions ropts;
    ropts.seed = cfg.seed;
    auto fps = find_fixed_points(res.poly, ropts);
    res.fixed_point = detail::select_fixed_point(fps, cfg);
    if (res.fixed_point.cls != FixedPointClass::repelling)
        throw ConfigError("selected fixed point is " + std::string(to_string(res.fixed_point.cls)) +
                          "; the linearizer construction needs a repelling one");
    log("fixed point z0 = (" + fmt17(res.fixed_point.z0.real()) + ", " +
        fmt17(res.fixed_point.z0.imag()) + "), |lambda| = " +
        fmt17(std::abs(res.fixed_point.multiplier)));

    res.connectivity = component_verdict(res.poly, res.fixed_point.z0, cfg.escape_scales);
    log(std::string("component verdict: ") + to_string(res.connectivity.status));
    if (upto == Stage::analyze) return res;

    fs::create_directories(cfg.out_dir);
    res.series = build_linearizer(res.poly, res.fixed_point, cfg.series_N, cfg.normalization,
                                  cfg.residual_tol);
    std::string series_path = cfg.out_dir + "/series.txt";
    write_series_cache(res.series, series_path);
    res.artifacts.push_back(series_path);
    log("series: N = " + std::to_string(res.series.order()) + ", validated r0 = " +
        fmt17(res.series.r0));
    if (upto == Stage::series) return res;

    res.gb = make_growth_bounds(res.poly, cfg.eps);
    int param_depth = std::max(cfg.depth + 1, cfg.fast_growth_n_hi + 1);
    res.params = choose_R(res.series, res.poly, param_depth, samples);
    log("R = " + fmt17(res.params.R) + " (R_L = " + fmt17(res.params.R_L) + ", R_1 = " +
        fmt17(res.params.R_1) + (res.params.depth_capped ? "), depth capped" : ")"));

    std::vector<double> radii = cfg.profile_radii;
    if (radii.empty()) {
        double r = std::max(1.0, res.params.R);
        for (int i = 0; i < 8; ++i, r *= 2.0) radii.push_back(r);
    }
    res.profile = modulus_profile(res.series, res.poly, radii, samples);
    std::string profile_path = cfg.out_dir + "/profile.csv";
    detail::write_text_file(profile_path, detail::profile_csv(res.profile));
    res.artifacts.push_back(profile_path);

    if (!cfg.order_radii.empty()) {
        ModulusProfile op = modulus_profile(res.series, res.poly, cfg.order_radii, samples);
        res.order_fit = order_estimate(op);
        log("order fit: " + fmt17(*res.order_fit) + " (theory " +
            fmt17(theoretical_order(res.poly, res.series)) + ")");
    }

    double reg_r = cfg.regularity_r > 0.0
                       ? cfg.regularity_r
                       : 1.05 * std::max(res.gb.R_eps, std::max(res.params.R_L, 1.0));
    res.regularity =
        verify_regularity(res.series, res.poly, res.gb, reg_r, cfg.regularity_n_max,
                          res.params.R_L, samples);
    detail::write_text_file(cfg.out_dir + "/regularity_lower.csv",
                            detail::regularity_csv(res.regularity, true));
    detail::write_text_file(cfg.out_dir + "/regularity_upper.csv",
                            detail::regularity_csv(res.regularity, false));
    res.artifacts.push_back(cfg.out_dir + "/regularity_lower.csv");
    res.artifacts.push_back(cfg.out_dir + "/regularity_upper.csv");

    std::vector<int> ns;
    for (int n = cfg.fast_growth_n_lo; n <= cfg.fast_growth_n_hi; ++n) ns.push_back(n);
    res.fast_growth = verify_fast_growth(res.series, res.poly, cfg.fast_growth_k, res.params, ns,
                                         {res.poly.degree()}, samples);
    std::string fg_path = cfg.out_dir + "/fast_growth.csv";
    detail::write_text_file(fg_path, detail::fast_growth_csv(res.fast_growth));
    res.artifacts.push_back(fg_path);
    log(std::string("growth tables: regularity ") + (res.regularity.all_pass ? "pass" : "FAIL") +
        ", fast growth " + (res.fast_growth.all_pass ? "pass" : "FAIL"));
    if (upto == Stage::growth) return res;

    res.report.case_label = cfg.label;
    res.report.K = filled_julia_bound(res.poly);
    res.report.R = res.params.R;
    res.report.R_1 = res.params.R_1;
    res.report.depth_capped = res.params.depth_capped;

    bool singleton = res.connectivity.status == ConnectivityStatus::singleton_certified ||
                     res.connectivity.status == ConnectivityStatus::singleton_evidence;
    if (singleton) {
        double delta0 = detail::default_delta0(res.poly, res.fixed_point, fps);
        res.scaling = prepare_curve_scaling(res.series, res.poly, delta0);
        if (!res.scaling) throw NumericError("could not build an escaping curve around z0");
        log("gamma_delta at delta = " + fmt17(res.scaling->delta) + " with " +
            std::to_string(res.scaling->gamma_delta.size()) + " vertices, j = " +
            std::to_string(res.scaling->j));
        if (upto != Stage::rings) {
            WebReport rep = certify_web(res.series, res.poly, res.params, cfg.depth, *res.scaling,
                                        samples);
            rep.case_label = cfg.label;
            rep.K = res.report.K;
            rep.depth_capped = rep.depth_capped || res.params.depth_capped;
            res.report = rep;
        } else {
            for (int n = 1; n <= cfg.depth && n <= res.params.available_depth(); ++n) {
                RingCertificate cert = ring_certificate(
                    res.series, res.poly, *res.scaling,
                    res.params.r_seq[static_cast<std::size_t>(n) - 1], res.poly.degree(), samples);
                cert.n = n;
                res.report.certificates.push_back(cert);
            }
            return res;
        }
    } else {
        res.report.falsify =
            falsify_web(res.series, res.poly, res.report.K, cfg.falsify_radii, samples);
        res.report.verdict = res.report.falsify.all_pass ? WebVerdict::not_spiders_web_evidence
                                                         : WebVerdict::inconclusive;
        detail::write_text_file(cfg.out_dir + "/falsify.csv",
                                detail::falsify_csv(res.report.falsify));
        res.artifacts.push_back(cfg.out_dir + "/falsify.csv");
    }

    std::string report_path = cfg.out_dir + "/web_report.json";
    detail::write_text_file(report_path, web_report_json(res.report));
    res.artifacts.push_back(report_path);
    log(std::string("web verdict: ") + to_string(res.report.verdict));
    if (upto == Stage::web) return res;

    if (cfg.render) {
        std::vector<ClosedCurve> rings;
        for (const auto& cert : res.report.certificates)
            if (!cert.ring.empty()) rings.push_back(cert.ring);
        std::size_t indet = 0;
        RasterImage img = render_image(res.series, res.poly, res.params, *cfg.render, rings, &indet);
        std::string img_path = cfg.out_dir + "/render.ppm";
        write_ppm(img, img_path);
        res.artifacts.push_back(img_path);
        log("rendered " + std::to_string(img.width) + "x" + std::to_string(img.height) + " -> " +
            img_path);
        if (indet > 0)
            log("warning: " + std::to_string(indet) +
                " pixel(s) exceed the evaluable range and were clipped to the indeterminate color");
    }
    return res;
}

// The run_config operation: full pipeline, exit-status semantics in the CLI.
inline PipelineResult run_config(const RunConfig& cfg, bool verbose = true, int samples = 512) {
    return run_pipeline(cfg, Stage::render, verbose, samples);
}

inline PipelineResult run_config(const std::string& config_path, bool verbose = true,
                                 int samples = 512) {
    return run_config(load_config(config_path), verbose, samples);
}

}  // namespace spiderweb
