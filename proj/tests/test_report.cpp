#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "spiderweb/pipeline.hpp"

using namespace spiderweb;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunConfig small_outside_config(const std::string& out) {
    RunConfig cfg;
    cfg.label = "quadratic_outside";
    cfg.poly_coeffs = {{-5.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
    cfg.fixed_point_hint = cplx(2.8, 0.0);
    cfg.series_N = 48;
    cfg.depth = 2;
    cfg.profile_radii = {4.0, 8.0, 16.0, 32.0};
    cfg.regularity_n_max = 3;
    cfg.fast_growth_n_lo = 2;
    cfg.fast_growth_n_hi = 3;
    cfg.escape_scales = {0.1};
    RenderConfig rc;
    rc.center = cplx(0.0, 0.0);
    rc.width = 40.0;
    rc.px_w = 48;
    rc.px_h = 48;
    rc.depth = 2;
    cfg.render = rc;
    cfg.out_dir = out;
    return cfg;
}

}  // namespace

TEST_CASE("config parsing: defaults, diagnostics, a_d = 0 rejection") {
    RunConfig ok = parse_config_text(R"({
        "version": 1,
        "label": "t",
        "polynomial": [[-2.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
    })");
    CHECK(ok.series_N == 64);
    CHECK(ok.depth == 3);

    CHECK_THROWS_WITH_AS(parse_config_text(R"({
        "version": 1,
        "polynomial": [[1.0, 0.0], [2.0, 0.0], [0.0, 0.0]]
    })"),
                         doctest::Contains("a_d != 0"), ConfigError);

    try {
        parse_config_text("{\n  \"version\": 1,\n  \"polynomial\": [[oops]]\n}");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config_text(R"({"polynomial": [[1,0],[0,0],[1,0]]})"), ConfigError);
}

TEST_CASE("profile CSV round-trips values at 17 significant digits") {
    ModulusProfile prof;
    prof.radii = {1.0, kPi, 12345.678901234567};
    prof.logM = {0.1234567890123456, 7.0, 1e-17};
    prof.logm = {-0.5, -kPi, -22.0};
    std::string csv = detail::profile_csv(prof);
    std::istringstream is(csv);
    std::string header;
    std::getline(is, header);
    CHECK(header == "r,logM,logm");
    for (std::size_t i = 0; i < prof.radii.size(); ++i) {
        std::string line;
        REQUIRE(std::getline(is, line));
        double r, M, m;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &M, &m) == 3);
        CHECK(r == prof.radii[i]);
        CHECK(M == prof.logM[i]);
        CHECK(m == prof.logm[i]);
    }
}

TEST_CASE("full pipeline on z^2-5 writes every artifact and certifies the web") {
    fs::path out = fs::temp_directory_path() / "spiderweb_pipe_a";
    fs::remove_all(out);
    RunConfig cfg = small_outside_config(out.string());
    PipelineResult res = run_config(cfg, false, 256);
    CHECK(res.report.verdict == WebVerdict::spiders_web_evidence);
    CHECK(fs::exists(out / "series.txt"));
    CHECK(fs::exists(out / "profile.csv"));
    CHECK(fs::exists(out / "regularity_lower.csv"));
    CHECK(fs::exists(out / "regularity_upper.csv"));
    CHECK(fs::exists(out / "fast_growth.csv"));
    CHECK(fs::exists(out / "web_report.json"));
    CHECK(fs::exists(out / "render.ppm"));

    std::string json = slurp((out / "web_report.json").string());
    CHECK(json.find("\"verdict\": \"spiders_web_evidence\"") != std::string::npos);
    CHECK(json.find("\"case_label\": \"quadratic_outside\"") != std::string::npos);

    // growth tables have one row per requested n
    std::string fg = slurp((out / "fast_growth.csv").string());
    int lines = 0;
    for (char ch : fg)
        if (ch == '\n') ++lines;
    CHECK(lines == 1 + (cfg.fast_growth_n_hi - cfg.fast_growth_n_lo + 1));
    fs::remove_all(out);
}

TEST_CASE("chebyshev case reports not_spiders_web_evidence via falsification") {
    fs::path out = fs::temp_directory_path() / "spiderweb_pipe_b";
    fs::remove_all(out);
    RunConfig cfg;
    cfg.label = "chebyshev";
    cfg.poly_coeffs = {{-2.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
    cfg.fixed_point_hint = cplx(2.0, 0.0);
    cfg.series_N = 48;
    cfg.depth = 2;
    cfg.profile_radii = {4.0, 8.0, 16.0, 32.0};
    cfg.regularity_n_max = 3;
    cfg.fast_growth_n_lo = 2;
    cfg.fast_growth_n_hi = 3;
    cfg.escape_scales = {0.1};
    cfg.falsify_radii = {1.0, 5.0, 10.0};
    cfg.out_dir = out.string();
    PipelineResult res = run_pipeline(cfg, Stage::web, false, 256);
    CHECK(res.report.verdict == WebVerdict::not_spiders_web_evidence);
    CHECK(fs::exists(out / "falsify.csv"));
    std::string json = slurp((out / "web_report.json").string());
    CHECK(json.find("not_spiders_web_evidence") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("dichotomy across the bundled suite: verdict matches the component evidence") {
    struct Case {
        std::vector<cplx> coeffs;
        cplx hint;
        WebVerdict expect;
    };
    std::vector<Case> cases = {
        {{{-5.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}, {2.8, 0.0}, WebVerdict::spiders_web_evidence},
        {{{-2.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}, {2.0, 0.0}, WebVerdict::not_spiders_web_evidence},
        {{{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}, {1.0, 0.0}, WebVerdict::not_spiders_web_evidence},
    };
    int idx = 0;
    for (const auto& c : cases) {
        fs::path out = fs::temp_directory_path() / ("spiderweb_dichotomy_" + std::to_string(idx++));
        fs::remove_all(out);
        RunConfig cfg;
        cfg.label = "dichotomy";
        cfg.poly_coeffs = c.coeffs;
        cfg.fixed_point_hint = c.hint;
        cfg.series_N = 48;
        cfg.depth = 2;
        cfg.profile_radii = {16.0, 32.0, 64.0, 128.0};
        cfg.regularity_n_max = 2;
        cfg.regularity_r = 24.0;
        cfg.fast_growth_n_lo = 2;
        cfg.fast_growth_n_hi = 2;
        cfg.escape_scales = {0.1};
        cfg.out_dir = out.string();
        PipelineResult res = run_pipeline(cfg, Stage::web, false, 256);
        CHECK(res.report.verdict == c.expect);
        fs::remove_all(out);
    }
}

TEST_CASE("re-running an identical config produces byte-identical artifacts") {
    fs::path out1 = fs::temp_directory_path() / "spiderweb_det_1";
    fs::path out2 = fs::temp_directory_path() / "spiderweb_det_2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    RunConfig cfg1 = small_outside_config(out1.string());
    RunConfig cfg2 = small_outside_config(out2.string());
    run_config(cfg1, false, 256);
    run_config(cfg2, false, 256);
    for (const char* name : {"series.txt", "profile.csv", "regularity_lower.csv",
                             "regularity_upper.csv", "fast_growth.csv", "web_report.json",
                             "render.ppm"}) {
        CHECK(slurp((out1 / name).string()) == slurp((out2 / name).string()));
    }
    fs::remove_all(out1);
    fs::remove_all(out2);
}

TEST_CASE("render: a 1x1 window equals the level color of its center") {
    Polynomial p = oracle::poly_outside();
    LinearizerSeries s =
        build_linearizer(p, oracle::fixed_point_at(p, cplx(oracle::z0_outside(), 0.0)), 48);
    LevelParams lp = choose_R(s, p, 3, 128);
    RenderConfig rc;
    rc.center = cplx(9.0, 0.0);
    rc.width = 1e-6;
    rc.px_w = 1;
    rc.px_h = 1;
    rc.depth = 2;
    RasterImage img = render_image(s, p, lp, rc, {});
    LevelMembership lm = level_membership(s, p, rc.center, lp, 2);
    auto expect = spiderweb::detail::level_color(lm.max_level, lm.indeterminate && lm.max_level < 2);
    CHECK(img.pixels[0] == expect[0]);
    CHECK(img.pixels[1] == expect[1]);
    CHECK(img.pixels[2] == expect[2]);
}

TEST_CASE("image/report consistency: ring-overlay pixels carry level >= 1") {
    fs::path out = fs::temp_directory_path() / "spiderweb_pipe_c";
    fs::remove_all(out);
    RunConfig cfg = small_outside_config(out.string());
    cfg.render.reset();  // window chosen from the certificates below
    PipelineResult res = run_pipeline(cfg, Stage::web, false, 256);
    REQUIRE(!res.report.certificates.empty());
    const RingCertificate& first = res.report.certificates.front();
    REQUIRE(!first.ring.empty());

    RenderConfig rc;
    rc.center = cplx(0.0, 0.0);
    rc.width = 2.2 * first.ring.max_abs();
    rc.px_w = 64;
    rc.px_h = 64;
    rc.depth = 1;
    RasterImage img = render_image(res.series, res.poly, res.params, rc, {first.ring});

    // every sampled overlay pixel re-evaluates to level >= 1
    Evaluator ev(res.series, res.poly);
    int checked = 0;
    for (std::size_t i = 0; i < first.ring.pts.size() && checked < 25; i += 5) {
        cplx z = first.ring.pts[i];
        LevelMembership lm = level_membership(ev, BigComplex::from(z), res.params, 1);
        CHECK(lm.max_level >= 1);
        ++checked;
    }
    CHECK(checked > 0);
    CHECK(img.width == 64);
    fs::remove_all(out);
}
