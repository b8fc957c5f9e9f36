// xdc: paste-and-immerse compositing with masked low-pass guidance.

#include <deque>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "xdc/app/commands.hpp"

namespace {

using xdc::app::RunConfig;

// Every flag maps onto a RunConfig key, so flags and config files share one parser.
struct FlagSet {
    std::string config_path;
    std::vector<std::pair<std::string, CLI::Option*>> scalar;
    std::vector<std::pair<std::string, CLI::Option*>> lists;
    // deque keeps element addresses stable for CLI11's bound references
    std::deque<std::string> scalar_values;
    std::deque<std::vector<std::string>> list_values;

    void flag(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
        scalar_values.emplace_back();
        scalar.emplace_back(key, app->add_option(name, scalar_values.back(), help));
    }

    void list(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
        list_values.emplace_back();
        lists.emplace_back(key, app->add_option(name, list_values.back(), help)->delimiter(','));
    }

    RunConfig resolve() const {
        RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
        for (std::size_t i = 0; i < scalar.size(); ++i) {
            if (scalar[i].second->count() > 0) cfg.set(scalar[i].first, scalar_values[i]);
        }
        for (std::size_t i = 0; i < lists.size(); ++i) {
            if (lists[i].second->count() == 0) continue;
            std::string joined;
            for (const auto& v : list_values[i]) joined += (joined.empty() ? "" : ",") + v;
            cfg.set(lists[i].first, joined);
        }
        return cfg;
    }
};

void add_run_flags(CLI::App* app, FlagSet& f) {
    app->add_option("--config", f.config_path, "key = value config file; flags override it");
    f.flag(app, "--reference", "reference", "background / reference image (PNG)");
    f.flag(app, "--object", "object", "RGBA object pasted onto the reference (PNG)");
    f.flag(app, "--mask", "mask", "binary mask (grayscale PNG); defaults to the pasted object's alpha");
    f.flag(app, "--output,-o", "output", "output PNG");
    f.flag(app, "--position", "position", "object placement ROW,COL");
    f.flag(app, "--scale", "scale", "object scale factor");
    f.flag(app, "--seed", "seed", "RNG seed");
    f.flag(app, "--t-in", "t_in", "fraction of steps guided inside the mask");
    f.flag(app, "--t-out", "t_out", "fraction of steps guided outside the mask");
    f.flag(app, "--n-in", "n_in", "low-pass factor inside the mask");
    f.flag(app, "--n-out", "n_out", "low-pass factor outside the mask");
    f.flag(app, "--r", "r", "relative step below which resampling runs");
    f.flag(app, "--u", "u", "repetitions per resampled step");
    f.flag(app, "--p-blend", "p_blend", "mask feathering in pixels, or 'auto'");
    f.flag(app, "--blend-space", "blend_space", "xt or x0");
    f.flag(app, "--sampler", "sampler", "ddpm or ddim");
    f.flag(app, "--steps", "steps", "diffusion steps T");
    f.flag(app, "--guidance-scale", "guidance_scale", "classifier-free guidance scale");
    f.flag(app, "--backend", "backend", "oracle or bridge");
    f.flag(app, "--bridge-addr", "bridge_addr", "bridge HOST:PORT");
    f.flag(app, "--prompt", "prompt", "condition text passed to the bridge");
    f.list(app, "--oracle-mean", "oracle_mean", "oracle component mean image (repeatable)");
    f.flag(app, "--oracle-std", "oracle_std", "oracle component standard deviation");
    f.flag(app, "--workers", "workers", "parallel runs");
    f.flag(app, "--band", "band", "boundary shell width for energy measurements");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Guided-diffusion compositing: paste an object, then immerse it with masked low-pass guidance."};
    app.require_subcommand(1);

    FlagSet composite_flags;
    FlagSet sweep_flags;
    FlagSet toy_flags;
    FlagSet diagnose_flags;

    CLI::App* composite = app.add_subcommand("composite", "run one composite and write it with a sidecar record");
    add_run_flags(composite, composite_flags);

    CLI::App* sweep = app.add_subcommand("sweep", "run the cross product of parameter axes into a tiled grid");
    add_run_flags(sweep, sweep_flags);
    sweep_flags.list(sweep, "--sweep-t-in", "sweep.t_in", "t_in values");
    sweep_flags.list(sweep, "--sweep-n-in", "sweep.n_in", "n_in values");
    sweep_flags.list(sweep, "--sweep-r", "sweep.r", "r values");

    CLI::App* toy = app.add_subcommand("toy-sample", "draw samples from the oracle mixture and report their statistics");
    add_run_flags(toy, toy_flags);
    toy_flags.flag(toy, "--count", "count", "number of samples");

    CLI::App* diag = app.add_subcommand("diagnose", "boundary energy under p_blend in {0, default} and both blend spaces");
    add_run_flags(diag, diagnose_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : xdc::app::kExitInput;
    }

    xdc::app::TraceLog log(xdc::app::log_level_from_env(), std::cerr);
    try {
        if (composite->parsed()) {
            xdc::app::cmd_composite(composite_flags.resolve(), log);
            return xdc::app::kExitOk;
        }
        if (sweep->parsed()) return xdc::app::cmd_sweep(sweep_flags.resolve(), log, std::cout);
        if (toy->parsed()) {
            xdc::app::cmd_toy_sample(toy_flags.resolve(), log, std::cout);
            return xdc::app::kExitOk;
        }
        xdc::app::cmd_diagnose(diagnose_flags.resolve(), log, std::cout);
        return xdc::app::kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "xdc: error: " << e.what() << "\n";
        return xdc::app::exit_code_for(e);
    }
}
