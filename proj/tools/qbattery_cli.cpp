// qbattery: sweeps, scans and figure recipes for the spin-chain battery.
//
// Exit status: 0 success, 2 invalid configuration or arguments, 3 file I/O
// failure, 4 system size over the configured limit, 1 any other failure.

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "qbattery/commands.hpp"
#include "qbattery/parallel.hpp"
#include "qbattery/recipes.hpp"

namespace {

using namespace qbattery;

constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;
constexpr int kExitResource = 4;

// Flag name, config key, help text.
struct FlagSpec {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr FlagSpec kFlags[] = {
    {"--n-sites", "model.n_sites", "chain length N"},
    {"--field-h", "model.field_h", "transverse field h"},
    {"--gamma", "model.gamma", "anisotropy in [0, 1]"},
    {"--j", "model.j", "uniform xy coupling J"},
    {"--delta", "model.delta", "uniform zz coupling"},
    {"--omega", "model.omega", "charging field strength"},
    {"--xy-couplings", "model.xy_couplings", "per-bond xy couplings, comma separated"},
    {"--zz-couplings", "model.zz_couplings", "per-bond zz couplings, comma separated"},
    {"--max-sites", "model.max_sites", "largest N accepted"},
    {"--sweep", "sweep.parameter", "swept parameter: j|delta|gamma|field_h|omega|beta"},
    {"--start", "sweep.start", "first sweep value"},
    {"--stop", "sweep.stop", "last sweep value (inclusive)"},
    {"--step", "sweep.step", "sweep spacing"},
    {"--state", "state.prep", "initial state: ground|thermal"},
    {"--beta", "state.beta", "inverse temperature for thermal states"},
    {"--disorder-target", "disorder.target", "disordered couplings: xy|zz"},
    {"--disorder-mean", "disorder.mean", "mean of the disordered couplings"},
    {"--disorder-sigma", "disorder.sigma", "standard deviation of the disordered couplings"},
    {"--realizations", "disorder.realizations", "number of disorder realizations"},
    {"--seed", "disorder.seed", "master seed for disorder sampling"},
    {"--grid-points", "optimizer.grid_points", "time grid points per charging period"},
    {"--refine-tolerance", "optimizer.refine_tolerance", "golden-section stopping width"},
    {"--at", "entanglement.at", "entanglement of the initial|t-star state"},
    {"--bias", "bias.kind", "fidelity-scan bias field: none|uniform|staggered"},
    {"--bias-eps", "bias.eps", "bias field strength"},
    {"--delta-j", "fidelity.delta_j", "fidelity coupling offset"},
    {"--beta-start", "thermal.beta_start", "thermal-map first beta"},
    {"--beta-stop", "thermal.beta_stop", "thermal-map last beta"},
    {"--beta-step", "thermal.beta_step", "thermal-map beta spacing"},
    {"--sizes", "scaling.sizes", "system sizes, comma separated"},
    {"--gammas", "advantage.gammas", "anisotropies for the advantage table, comma separated"},
    {"--j-c-infinity", "scaling.j_c_infinity", "thermodynamic critical coupling"},
    {"--jump-threshold", "scaling.jump_threshold", "jump threshold in units of the median step"},
    {"--output", "output.path", "output file (stdout when omitted)"},
    {"--format", "output.format", "csv|json"},
    {"--workers", "run.workers", "worker threads"},
};

struct RunOptions {
    std::string config_path;
    std::vector<std::string> assignments;
    std::vector<std::optional<std::string>> flags = std::vector<std::optional<std::string>>(std::size(kFlags));
};

void add_run_options(CLI::App& sub, RunOptions& opts) {
    sub.add_option("--config", opts.config_path, "key = value configuration file");
    sub.add_option("--set", opts.assignments, "override any configuration key, KEY=VALUE");
    for (std::size_t i = 0; i < std::size(kFlags); ++i) {
        sub.add_option(kFlags[i].flag, opts.flags[i], std::string(kFlags[i].help) + " [" + kFlags[i].key + "]");
    }
}

RunConfig resolve(const RunOptions& opts) {
    RunConfig config;
    config.workers = default_workers();
    if (!opts.config_path.empty()) apply_config_file(config, opts.config_path);
    for (const auto& a : opts.assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) throw ConfigError(a, "--set expects KEY=VALUE");
        apply_setting(config, a.substr(0, eq), a.substr(eq + 1), "--set");
    }
    for (std::size_t i = 0; i < std::size(kFlags); ++i) {
        if (opts.flags[i]) apply_setting(config, kFlags[i].key, *opts.flags[i], kFlags[i].flag);
    }
    config.validate();
    return config;
}

template <typename Body>
int guarded(Body&& body) {
    try {
        body();
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

const char* describe_command(Command c) {
    switch (c) {
        case Command::PowerSweep: return "P_max, t* and W(t*) along a parameter sweep";
        case Command::DisorderSweep: return "quenched-average P_max along a sweep";
        case Command::ThermalMap: return "thermal minus ground P_max over (beta, J)";
        case Command::Entanglement: return "middle-pair negativity along a sweep";
        case Command::OrderParams: return "uniform and staggered x magnetization along a sweep";
        case Command::FidelityScan: return "ground-state fidelity between J and J + dJ";
        case Command::ScalingFit: return "first-jump critical couplings and their power-law fit";
        case Command::Advantage: return "J_max and power advantage per anisotropy and size";
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum battery power from spin-chain ground and thermal states"};
    app.require_subcommand(1);

    std::vector<std::pair<Command, RunOptions>> runs;
    runs.reserve(all_commands().size());
    for (Command c : all_commands()) {
        runs.emplace_back(c, RunOptions{});
        auto* sub = app.add_subcommand(command_name(c), describe_command(c));
        add_run_options(*sub, runs.back().second);
    }

    auto* recipe = app.add_subcommand("recipe", "run a stored figure recipe");
    std::string recipe_name;
    std::string recipe_dir = ".";
    std::string recipe_format = "csv";
    std::optional<std::size_t> recipe_workers;
    std::optional<std::size_t> recipe_realizations;
    std::optional<std::uint64_t> recipe_seed;
    std::vector<double> recipe_sigmas;
    recipe->add_option("name", recipe_name, "recipe name")->required()->check(CLI::IsMember(recipe_names()));
    recipe->add_option("--output", recipe_dir, "output directory");
    recipe->add_option("--format", recipe_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    recipe->add_option("--workers", recipe_workers, "worker threads");
    recipe->add_option("--realizations", recipe_realizations, "disorder realizations (fig7, fig8)");
    recipe->add_option("--seed", recipe_seed, "master seed (fig7, fig8)");
    recipe->add_option("--sigmas", recipe_sigmas, "disorder strengths (fig7, fig8)")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    if (recipe->parsed()) {
        return guarded([&] {
            RecipeOptions options;
            options.output_dir = recipe_dir;
            options.format = recipe_format == "json" ? OutputFormat::Json : OutputFormat::Csv;
            options.workers = recipe_workers.value_or(default_workers());
            if (options.workers < 1) throw ConfigError("run.workers", "must be >= 1");
            options.realizations = recipe_realizations;
            options.seed = recipe_seed;
            if (!recipe_sigmas.empty()) options.sigmas = recipe_sigmas;
            run_recipe(recipe_name, options, std::cerr);
        });
    }
    for (auto& [command, opts] : runs) {
        if (!app.got_subcommand(command_name(command))) continue;
        return guarded([&] { execute(command, resolve(opts), std::cout); });
    }
    return kExitInvalid;
}
