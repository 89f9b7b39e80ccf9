// dplab: double phase laboratory command line.
//
//   dplab <solve|obstacle|capacity|hausdorff|regularity|removability>
//         --config <path> [--out <dir>] [--refine <k>] [--strict-pq] [--seed <u64>]
//   dplab plotdata --in <dir> [--out <file>]
//
// Exit codes: 0 pass, 1 invariant failure, 2 usage or configuration error.

#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "dplab/experiments.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int refine = -1;
    bool strict_pq = false;
    std::string seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory (default from config)");
    cmd->add_option("--refine", args.refine, "override [domain] refine");
    cmd->add_flag("--strict-pq", args.strict_pq, "force strict (pq) validation");
    cmd->add_option("--seed", args.seed, "override [experiment] seed");
}

int run_experiment(const std::string& kind, const CommonArgs& args) {
    auto cfg = dplab::ExperimentConfig::parse(dplab::read_text_file(args.config_path));
    cfg.set("experiment", "kind", kind);
    if (!args.seed.empty()) cfg.set("experiment", "seed", args.seed);
    if (args.refine >= 0) cfg.set("domain", "refine", std::to_string(args.refine));
    std::string out = args.out_dir.empty() ? cfg.get("experiment", "out", "") : args.out_dir;
    if (out.empty()) throw dplab::config_error("no output directory: set --out or [experiment] out");
    cfg.set("experiment", "out", out);

    const auto res = dplab::run_study(cfg, out, args.strict_pq);
    std::printf("%s: %s (reports in %s)\n", kind.c_str(),
                res.exit_code == 0 ? "pass" : "FAIL", out.c_str());
    if (res.summary.contains("verdict"))
        std::printf("verdict: %s\n", res.summary["verdict"].get<std::string>().c_str());
    if (res.summary.contains("failed_check"))
        std::printf("failed check: %s\n",
                    res.summary["failed_check"].get<std::string>().c_str());
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dplab: quasilinear double phase laboratory"};
    app.require_subcommand(1);

    const char* kinds[] = {"solve", "obstacle", "capacity",
                           "hausdorff", "regularity", "removability"};
    CommonArgs args[6];
    for (int i = 0; i < 6; ++i) add_common(app.add_subcommand(kinds[i]), args[i]);

    std::string plot_in = ".", plot_out;
    auto* plot = app.add_subcommand("plotdata", "assemble plot-ready tables from reports");
    plot->add_option("--in", plot_in, "directory holding a run's reports");
    plot->add_option("--out", plot_out, "output CSV (default <in>/plotdata.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (int i = 0; i < 6; ++i)
            if (app.get_subcommand(kinds[i])->parsed()) return run_experiment(kinds[i], args[i]);
        if (plot->parsed()) {
            const std::filesystem::path out = plot_out.empty()
                                                  ? std::filesystem::path(plot_in) / "plotdata.csv"
                                                  : std::filesystem::path(plot_out);
            dplab::emit_plotdata(plot_in, out);
            std::printf("plotdata: wrote %s\n", out.string().c_str());
            return 0;
        }
    } catch (const dplab::config_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const dplab::parameter_error& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return 2;
    } catch (const dplab::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
