// spiderweb: linearizers of polynomials at repelling fixed points and
// numerical certificates for the spider's-web structure of their fast
// escaping sets.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "spiderweb/pipeline.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    int depth_override = -1;
    std::string out_override;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "path to a run configuration (JSON)")
        ->required();
    cmd->add_option("--depth", opts.depth_override, "override the certificate depth");
    cmd->add_option("--out", opts.out_override, "override the output directory");
}

spiderweb::RunConfig load(const CommonOpts& opts) {
    spiderweb::RunConfig cfg = spiderweb::load_config(opts.config_path);
    if (opts.depth_override >= 0) cfg.depth = opts.depth_override;
    if (!opts.out_override.empty()) cfg.out_dir = opts.out_override;
    return cfg;
}

int run_stage(const CommonOpts& opts, spiderweb::Stage stage) {
    try {
        spiderweb::RunConfig cfg = load(opts);
        spiderweb::run_pipeline(cfg, stage);
        return 0;
    } catch (const spiderweb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const spiderweb::PreconditionError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "spiderweb: Poincare functions of polynomials and escaping-set "
        "certificates"};
    app.require_subcommand(1);

    CommonOpts analyze_o, series_o, eval_o, growth_o, rings_o, web_o, render_o;
    double eval_re = 0.0, eval_im = 0.0, eval_logmod = 0.0, eval_arg = 0.0;
    bool eval_use_log = false;

    add_common(app.add_subcommand("analyze", "fixed points, critical orbits, component verdict"),
               analyze_o);
    add_common(app.add_subcommand("series", "build and cache the linearizer series"), series_o);

    auto* eval_cmd = app.add_subcommand("eval", "evaluate L at one point");
    add_common(eval_cmd, eval_o);
    eval_cmd->add_option("--re", eval_re, "real part of z");
    eval_cmd->add_option("--im", eval_im, "imaginary part of z");
    eval_cmd->add_option("--logmod", eval_logmod, "log|z| for very large arguments");
    eval_cmd->add_option("--arg", eval_arg, "arg z in radians, used with --logmod");
    eval_cmd->add_flag("--log-polar", eval_use_log, "interpret --logmod/--arg instead of --re/--im");

    add_common(app.add_subcommand("growth", "modulus profiles and growth check tables"), growth_o);
    add_common(app.add_subcommand("rings", "minimum-modulus ring certificates only"), rings_o);
    add_common(app.add_subcommand("web", "full web certification / falsification"), web_o);
    add_common(app.add_subcommand("render", "everything plus the level-set raster"), render_o);

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("analyze")) return run_stage(analyze_o, spiderweb::Stage::analyze);
    if (app.got_subcommand("series")) return run_stage(series_o, spiderweb::Stage::series);
    if (app.got_subcommand("growth")) return run_stage(growth_o, spiderweb::Stage::growth);
    if (app.got_subcommand("rings")) return run_stage(rings_o, spiderweb::Stage::rings);
    if (app.got_subcommand("web")) return run_stage(web_o, spiderweb::Stage::web);
    if (app.got_subcommand("render")) return run_stage(render_o, spiderweb::Stage::render);

    // eval
    try {
        spiderweb::RunConfig cfg = load(eval_o);
        auto res = spiderweb::run_pipeline(cfg, spiderweb::Stage::series, false);
        spiderweb::Evaluator ev(res.series, res.poly, cfg.eps);
        spiderweb::BigComplex z = eval_use_log
                                      ? spiderweb::BigComplex(eval_logmod, eval_arg)
                                      : spiderweb::BigComplex::from(spiderweb::cplx(eval_re, eval_im));
        spiderweb::EvalOutcome out = ev.eval(z);
        if (out.exact()) {
            std::cout << "mode exact\nlogmod " << spiderweb::fmt17(out.value.logmod) << "\narg "
                      << spiderweb::fmt17(out.value.arg) << "\n";
            if (out.value.representable()) {
                spiderweb::cplx v = out.value.to_complex();
                std::cout << "value " << spiderweb::fmt17(v.real()) << " "
                          << spiderweb::fmt17(v.imag()) << "\n";
            }
        } else {
            std::cout << "mode log_interval\nlo " << spiderweb::fmt17(out.lo) << "\nhi "
                      << spiderweb::fmt17(out.hi) << "\n";
        }
        return 0;
    } catch (const spiderweb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const spiderweb::PreconditionError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    }
}
