#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "tesopt/presets.hpp"
#include "tesopt/salts.hpp"
#include "tesopt/scenario.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int parallel = 0;
    std::vector<std::string> scenario_ids;
    std::string sizing;
    int horizon_block = -1;
    bool paper_compat = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_compat) {
    cmd->add_option("--config", args.config_path, "run configuration (JSON)")->required();
    cmd->add_option("--out", args.out_dir, "output directory")->required();
    cmd->add_option("--parallel", args.parallel,
                    "worker threads (default: hardware concurrency)");
    cmd->add_option("--scenario", args.scenario_ids, "run only these scenario ids");
    cmd->add_option("--sizing", args.sizing,
                    "override sizing policy: variable|incremental:<kg>|fixed:<kg>");
    cmd->add_option("--horizon-block", args.horizon_block,
                    "solve in sequential blocks of this many hours (0 = full year)");
    if (with_compat)
        cmd->add_flag("--paper-compat", args.paper_compat,
                      "report break-even $/kWh in the published convention");
}

tesopt::RunOverrides make_overrides(const CommonArgs& args) {
    tesopt::RunOverrides ov;
    ov.parallelism = args.parallel > 0
                         ? args.parallel
                         : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (!args.sizing.empty()) ov.sizing = tesopt::SizingPolicy::parse(args.sizing);
    ov.scenario_filter = args.scenario_ids;
    if (args.horizon_block >= 0) ov.horizon_block_hours = args.horizon_block;
    if (args.paper_compat) ov.paper_compat = true;
    return ov;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heat pump + salt-hydrate storage dispatch model"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CLI::App* run = app.add_subcommand("run", "cost-minimizing dispatch across scenarios");
    add_common(run, run_args, true);

    CommonArgs shift_args;
    CLI::App* shift = app.add_subcommand("peakshift", "peak-shift maximization across scenarios");
    add_common(shift, shift_args, false);

    std::string ragone_salt;
    int ragone_samples = 101;
    std::string ragone_out;
    CLI::App* ragone = app.add_subcommand("ragone", "emit a salt's Ragone curve as CSV");
    ragone->add_option("--salt", ragone_salt, "salt name (e.g. SrBr2)")->required();
    ragone->add_option("--samples", ragone_samples, "number of curve samples (>= 3)");
    ragone->add_option("--out", ragone_out, "output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            tesopt::RunConfig config = tesopt::load_config(run_args.config_path);
            return tesopt::run_scenarios(config, run_args.out_dir, make_overrides(run_args));
        }
        if (shift->parsed()) {
            tesopt::RunConfig config = tesopt::load_config(shift_args.config_path);
            return tesopt::run_peak_shift(config, shift_args.out_dir, make_overrides(shift_args));
        }
        if (ragone->parsed()) {
            const tesopt::SaltSpec& salt = tesopt::find_salt(ragone_salt);
            tesopt::RagoneCurve curve = tesopt::build_ragone(salt, ragone_samples);
            std::ostream* out = &std::cout;
            std::ofstream file;
            if (!ragone_out.empty()) {
                file.open(ragone_out, std::ios::binary);
                if (!file) throw std::runtime_error("cannot write " + ragone_out);
                out = &file;
            }
            *out << "soc,specific_power_kw_per_kg\n";
            char buf[64];
            for (const auto& p : curve.samples) {
                std::snprintf(buf, sizeof(buf), "%.10g,%.10g\n", p.soc,
                              p.specific_power_kw_per_kg);
                *out << buf;
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
