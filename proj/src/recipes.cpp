#include "qbattery/recipes.hpp"

#include <algorithm>
#include <ostream>

#include "qbattery/analysis.hpp"

namespace qbattery {

namespace {

// Parameter families (delta, gamma) shared by the thermal and disorder figures.
constexpr std::pair<double, double> kFamilies[] = {{0.0, 0.0}, {0.0, 0.4}, {1.0, 0.0}, {1.0, 0.4}};

const std::vector<double> kGammaSet{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

std::string tag(const char* name, double value) { return std::string(name) + format_exact(value); }

RunConfig base_config(const RecipeOptions& options) {
    RunConfig c;
    c.format = options.format;
    c.workers = options.workers;
    if (options.seed) c.seed = *options.seed;
    return c;
}

RunConfig j_sweep(RunConfig c, double start, double stop, double step) {
    c.sweep.parameter = "j";
    c.sweep.start = start;
    c.sweep.stop = stop;
    c.sweep.step = step;
    return c;
}

std::vector<RecipeJob> power_vs_j(const RecipeOptions& options, const char* prefix, double delta) {
    std::vector<RecipeJob> jobs;
    for (double g : kGammaSet) {
        RunConfig c = j_sweep(base_config(options), -2.0, 2.0, 0.01);
        c.n_sites = 8;
        c.gamma = g;
        c.delta = delta;
        jobs.push_back({std::string(prefix) + "_" + tag("delta", delta) + "_" + tag("gamma", g), Command::PowerSweep, c});
    }
    return jobs;
}

std::vector<RecipeJob> quenched(const RecipeOptions& options, const char* prefix, DisorderTarget target) {
    std::vector<RecipeJob> jobs;
    for (const auto& [delta, gamma] : kFamilies) {
        for (double sigma : options.sigmas) {
            RunConfig c = j_sweep(base_config(options), -2.0, 2.0, 0.1);
            c.n_sites = 8;
            c.gamma = gamma;
            c.delta = delta;
            c.disorder_target = target;
            c.disorder_mean = delta;  // only used when the target is zz
            c.disorder_sigma = sigma;
            c.realizations = options.realizations.value_or(5000);
            jobs.push_back({std::string(prefix) + "_" + tag("delta", delta) + "_" + tag("gamma", gamma) + "_" +
                                tag("sigma", sigma),
                            Command::DisorderSweep, c});
        }
    }
    return jobs;
}

}  // namespace

const std::vector<std::string>& recipe_names() {
    static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4", "fig5",
                                                "fig6", "fig7", "fig8", "appendixA"};
    return names;
}

std::vector<RecipeJob> recipe_jobs(const std::string& name, const RecipeOptions& options) {
    std::vector<RecipeJob> jobs;
    if (name == "fig1") {
        jobs = power_vs_j(options, "fig1_power", 0.0);
    } else if (name == "fig2") {
        RunConfig c = j_sweep(base_config(options), -2.0, 2.0, 0.01);
        c.gammas = linear_grid(0.0, 1.0, 0.1);
        c.sizes = {4, 6, 8};
        jobs.push_back({"fig2_advantage", Command::Advantage, c});
    } else if (name == "fig3") {
        for (int n : {4, 6, 8, 10}) {
            RunConfig c = j_sweep(base_config(options), -2.0, 2.0, 0.01);
            c.n_sites = n;
            c.gamma = 0.1;
            jobs.push_back({"fig3_power_N" + std::to_string(n), Command::PowerSweep, c});
        }
        RunConfig c = j_sweep(base_config(options), -2.0, 2.0, 0.01);
        c.gamma = 0.1;
        c.sizes = {4, 6, 8, 10};
        jobs.push_back({"fig3_scaling", Command::ScalingFit, c});
    } else if (name == "fig4") {
        for (double delta : {0.0, 0.5, 1.0}) {
            for (double g : kGammaSet) {
                RunConfig c = j_sweep(base_config(options), -2.0, 2.0, 0.02);
                c.n_sites = 8;
                c.gamma = g;
                c.delta = delta;
                jobs.push_back({"fig4_entanglement_" + tag("delta", delta) + "_" + tag("gamma", g),
                                Command::Entanglement, c});
            }
        }
    } else if (name == "fig5") {
        for (double delta : {0.5, 1.0}) {
            auto part = power_vs_j(options, "fig5_power", delta);
            jobs.insert(jobs.end(), part.begin(), part.end());
        }
    } else if (name == "fig6") {
        for (const auto& [delta, gamma] : kFamilies) {
            RunConfig c = j_sweep(base_config(options), -2.0, 2.0, 0.05);
            c.n_sites = 4;
            c.gamma = gamma;
            c.delta = delta;
            c.beta_start = 0.0;
            c.beta_stop = 5.0;
            c.beta_step = 0.05;
            jobs.push_back({"fig6_thermal_" + tag("delta", delta) + "_" + tag("gamma", gamma), Command::ThermalMap, c});
        }
    } else if (name == "fig7") {
        jobs = quenched(options, "fig7_disorder_xy", DisorderTarget::XyCouplings);
    } else if (name == "fig8") {
        jobs = quenched(options, "fig8_disorder_zz", DisorderTarget::ZzCouplings);
    } else if (name == "appendixA") {
        for (double g : {0.1, 0.8}) {
            RunConfig c = j_sweep(base_config(options), -2.0, 2.0, 0.005);
            c.n_sites = 10;
            c.gamma = g;
            c.fidelity_delta_j = 0.005;
            jobs.push_back({"appendixA_order_" + tag("gamma", g), Command::OrderParams, c});
            jobs.push_back({"appendixA_fidelity_" + tag("gamma", g), Command::FidelityScan, c});
            jobs.push_back({"appendixA_power_" + tag("gamma", g), Command::PowerSweep, c});
        }
    } else {
        std::string known;
        for (const auto& n : recipe_names()) known += (known.empty() ? "" : ", ") + n;
        throw ValidationError("unknown recipe '" + name + "' (known: " + known + ")");
    }
    return jobs;
}

std::vector<std::filesystem::path> run_recipe(const std::string& name, const RecipeOptions& options,
                                              std::ostream& log) {
    const auto jobs = recipe_jobs(name, options);
    for (const auto& job : jobs) job.config.validate();
    const char* ext = options.format == OutputFormat::Json ? ".json" : ".csv";
    std::vector<std::filesystem::path> written;
    for (const auto& job : jobs) {
        const auto path = options.output_dir / (job.file_stem + ext);
        log << "[" << name << "] " << command_name(job.command) << " -> " << path.string() << std::endl;
        const Table table = run_command(job.command, job.config);
        TableHeader header = make_header(job.command, job.config);
        header.settings.insert(header.settings.begin(), {"recipe", name});
        write_table(path, table, header, options.format);
        written.push_back(path);
    }
    return written;
}

}  // namespace qbattery
