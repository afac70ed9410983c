#include "qbattery/commands.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "qbattery/analysis.hpp"
#include "qbattery/disorder.hpp"
#include "qbattery/observables.hpp"
#include "qbattery/parallel.hpp"

namespace qbattery {

namespace {

struct CommandInfo {
    Command command;
    const char* name;
};

constexpr CommandInfo kCommands[] = {
    {Command::PowerSweep, "power-sweep"},     {Command::DisorderSweep, "disorder-sweep"},
    {Command::ThermalMap, "thermal-map"},     {Command::Entanglement, "entanglement"},
    {Command::OrderParams, "order-params"},   {Command::FidelityScan, "fidelity-scan"},
    {Command::ScalingFit, "scaling-fit"},     {Command::Advantage, "advantage"},
};

// Model and initial-state preparation at one sweep point.
struct Point {
    ModelParams params;
    StatePrep prep;
};

Point point_at(const RunConfig& config, double value) {
    Point pt{config.model(), config.state_prep()};
    const std::string& p = config.sweep.parameter;
    if (p == "j") {
        pt.params.set_uniform_xy(value);
    } else if (p == "delta") {
        pt.params.set_uniform_zz(value);
    } else if (p == "gamma") {
        pt.params.anisotropy_gamma = value;
    } else if (p == "field_h") {
        pt.params.field_h = value;
    } else if (p == "omega") {
        pt.params.charging_omega = value;
    } else if (p == "beta") {
        pt.prep = ThermalPrep{value};
    }
    return pt;
}

void require_j_sweep(const RunConfig& config, Command command) {
    if (config.sweep.parameter != "j") {
        throw ConfigError("sweep.parameter", command_name(command) + " sweeps j only");
    }
}

void require_no_beta_sweep(const RunConfig& config, Command command) {
    if (config.sweep.parameter == "beta") {
        throw ConfigError("sweep.parameter", command_name(command) + " cannot sweep beta");
    }
}

Cell flag(bool b) { return std::int64_t{b ? 1 : 0}; }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string command_name(Command command) {
    for (const auto& info : kCommands) {
        if (info.command == command) return info.name;
    }
    return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
    for (const auto& info : kCommands) {
        if (name == info.name) return info.command;
    }
    return std::nullopt;
}

const std::vector<Command>& all_commands() {
    static const std::vector<Command> all = [] {
        std::vector<Command> out;
        for (const auto& info : kCommands) out.push_back(info.command);
        return out;
    }();
    return all;
}

std::string sweep_column(const std::string& parameter) {
    static const std::map<std::string, std::string> names = {
        {"j", "J_over_h"},       {"delta", "delta_over_h"},   {"gamma", "gamma"},
        {"field_h", "h"},        {"omega", "omega_over_h"},   {"beta", "beta_over_h"},
    };
    const auto it = names.find(parameter);
    return it == names.end() ? parameter : it->second;
}

Table run_power_sweep(const RunConfig& config) {
    const auto values = config.sweep.values();
    std::vector<PowerResult> results(values.size());
    parallel_for(values.size(), config.workers, [&](std::size_t i) {
        const Point pt = point_at(config, values[i]);
        results[i] = power_for(pt.params, pt.prep, config.optimizer, config.max_sites);
    });
    Table table{{sweep_column(config.sweep.parameter), "p_max", "t_star", "work", "degenerate_ground"}, {}};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& r = results[i];
        table.add_row({values[i], r.p_max, r.t_star, r.work_at_t_star, flag(r.degenerate_ground)});
    }
    return table;
}

Table run_disorder_sweep(const RunConfig& config) {
    const auto values = config.sweep.values();
    const std::string& p = config.sweep.parameter;
    const bool sweeps_mean = (p == "j" && config.disorder_target == DisorderTarget::XyCouplings) ||
                             (p == "delta" && config.disorder_target == DisorderTarget::ZzCouplings);
    Table table{{sweep_column(p), "mean_p_max", "std_error", "n_realizations", "n_failed", "converged_2dp",
                 "ordered_p_max"},
                {}};
    for (double value : values) {
        const Point pt = point_at(config, value);
        DisorderSpec spec = config.disorder();
        if (sweeps_mean) spec.mean = value;
        const DisorderStats stats =
            quenched_power(pt.params, spec, pt.prep, config.optimizer, config.workers, config.max_sites);

        // Clean chain with every targeted coupling at the disorder mean.
        DisorderSpec clean = spec;
        clean.sigma = 0.0;
        clean.n_realizations = 1;
        const ModelParams ordered = sample_realization(pt.params, clean, 0);
        const double ordered_p = power_for(ordered, pt.prep, config.optimizer, config.max_sites).p_max;

        table.add_row({value, stats.mean_p_max, stats.std_error, static_cast<std::int64_t>(stats.n_realizations),
                       static_cast<std::int64_t>(stats.n_failed), flag(stats.converged_2dp), ordered_p});
    }
    return table;
}

Table run_thermal_map(const RunConfig& config) {
    require_j_sweep(config, Command::ThermalMap);
    const auto j_grid = config.sweep.values();
    const auto beta_grid = linear_grid(config.beta_start, config.beta_stop, config.beta_step);
    const auto cells =
        thermal_diff_map(config.model(), beta_grid, j_grid, config.optimizer, config.workers, config.max_sites);
    Table table{{"beta_over_h", "J_over_h", "p_t_diff"}, {}};
    for (const auto& c : cells) table.add_row({c.beta_over_h, c.j_over_h, c.p_t_diff});
    return table;
}

Table run_entanglement(const RunConfig& config) {
    require_no_beta_sweep(config, Command::Entanglement);
    if (config.n_sites < 2) throw ConfigError("model.n_sites", "entanglement needs at least 2 sites");
    const auto values = config.sweep.values();
    std::vector<EntanglementResult> results(values.size());
    parallel_for(values.size(), config.workers, [&](std::size_t i) {
        const Point pt = point_at(config, values[i]);
        const DiagonalizedHamiltonian h = normalize_and_diagonalize(build_h0(pt.params, config.max_sites));
        const auto* thermal = std::get_if<ThermalPrep>(&pt.prep);
        QuantumState state = thermal ? thermal_state(h.eig, thermal->beta) : ground_state(h.eig);
        if (config.entanglement_at_t_star) {
            const PowerResult r = power_max(state, h.normalized, pt.params, config.optimizer);
            state = evolve(state, pt.params, r.t_star);
        }
        results[i] = middle_pair_entanglement(state, pt.params.n_sites);
    });
    Table table{{sweep_column(config.sweep.parameter), "negativity", "log_negativity"}, {}};
    for (std::size_t i = 0; i < values.size(); ++i) {
        table.add_row({values[i], results[i].negativity, results[i].log_negativity});
    }
    return table;
}

Table run_order_params(const RunConfig& config) {
    require_no_beta_sweep(config, Command::OrderParams);
    const auto values = config.sweep.values();
    std::vector<std::pair<double, double>> results(values.size());
    parallel_for(values.size(), config.workers, [&](std::size_t i) {
        const Point pt = point_at(config, values[i]);
        const OrderParams fm = order_parameters(pt.params, BiasKind::Uniform, config.bias_eps, config.max_sites);
        const OrderParams afm = order_parameters(pt.params, BiasKind::Staggered, config.bias_eps, config.max_sites);
        results[i] = {fm.m_fm, afm.m_afm};
    });
    Table table{{sweep_column(config.sweep.parameter), "m_fm", "m_afm"}, {}};
    for (std::size_t i = 0; i < values.size(); ++i) {
        table.add_row({values[i], results[i].first, results[i].second});
    }
    return table;
}

Table run_fidelity_scan(const RunConfig& config) {
    require_j_sweep(config, Command::FidelityScan);
    const auto values = config.sweep.values();
    std::optional<SymmetryBias> bias;
    if (config.bias) bias = SymmetryBias{*config.bias, config.bias_eps};
    const auto scan =
        fidelity_scan(config.model(), values, config.fidelity_delta_j, bias, config.workers, config.max_sites);
    Table table{{"J_over_h", "fidelity"}, {}};
    for (const auto& pt : scan) table.add_row({pt.j, pt.fidelity});
    return table;
}

Table run_scaling_fit(const RunConfig& config) {
    require_j_sweep(config, Command::ScalingFit);
    if (config.sizes.empty()) throw ConfigError("scaling.sizes", "needs at least one size");
    const auto values = config.sweep.values();

    std::map<int, double> afm, fm;  // ascending and descending first jumps
    std::map<int, std::pair<double, double>> found;
    for (int n : config.sizes) {
        RunConfig sized = config;
        sized.n_sites = n;
        sized.xy_couplings.clear();
        sized.zz_couplings.clear();
        const Curve curve =
            power_curve(sized.model(), values, sized.state_prep(), config.optimizer, config.workers, config.max_sites);
        const auto up = detect_first_jump(curve, ScanDirection::Ascending, config.jump_threshold);
        const auto down = detect_first_jump(curve, ScanDirection::Descending, config.jump_threshold);
        if (up) afm[n] = *up;
        if (down) fm[n] = std::abs(*down);
        found[n] = {up ? *up : kNaN, down ? *down : kNaN};
    }

    auto fit_or_nan = [&](const std::map<int, double>& points) {
        try {
            return std::optional<ScalingFit>(scaling_fit(points, config.j_c_infinity));
        } catch (const ValidationError&) {
            return std::optional<ScalingFit>();
        }
    };
    const auto fit_afm = fit_or_nan(afm);
    const auto fit_fm = fit_or_nan(fm);

    Table table{{"transition", "N", "j_c", "prefactor", "log_prefactor", "exponent", "r_squared"}, {}};
    auto emit = [&](const char* label, const std::optional<ScalingFit>& fit, bool ascending) {
        for (int n : config.sizes) {
            const double j_c = ascending ? found[n].first : found[n].second;
            table.add_row({std::string(label), std::int64_t{n}, j_c, fit ? fit->prefactor : kNaN,
                           fit ? fit->log_prefactor : kNaN, fit ? fit->exponent : kNaN,
                           fit ? fit->r_squared : kNaN});
        }
    };
    emit("AFM-PM", fit_afm, true);
    emit("FM-PM", fit_fm, false);
    return table;
}

Table run_advantage(const RunConfig& config) {
    require_j_sweep(config, Command::Advantage);
    if (config.sizes.empty()) throw ConfigError("scaling.sizes", "needs at least one size");
    if (config.gammas.empty()) throw ConfigError("advantage.gammas", "needs at least one value");
    const auto values = config.sweep.values();
    Table table{{"gamma", "N", "j_max", "p_at_jmax", "p_at_zero", "p_adv", "relative_gain"}, {}};
    for (double g : config.gammas) {
        for (int n : config.sizes) {
            RunConfig c = config;
            c.n_sites = n;
            c.gamma = g;
            c.xy_couplings.clear();
            c.zz_couplings.clear();
            const Curve curve =
                power_curve(c.model(), values, c.state_prep(), config.optimizer, config.workers, config.max_sites);
            const AdvantageResult a = find_jmax(curve);
            table.add_row({g, std::int64_t{n}, a.j_max_over_h, a.p_at_jmax, a.p_at_zero, a.p_adv, a.relative_gain});
        }
    }
    return table;
}

Table run_command(Command command, const RunConfig& config) {
    config.validate();
    switch (command) {
        case Command::PowerSweep: return run_power_sweep(config);
        case Command::DisorderSweep: return run_disorder_sweep(config);
        case Command::ThermalMap: return run_thermal_map(config);
        case Command::Entanglement: return run_entanglement(config);
        case Command::OrderParams: return run_order_params(config);
        case Command::FidelityScan: return run_fidelity_scan(config);
        case Command::ScalingFit: return run_scaling_fit(config);
        case Command::Advantage: return run_advantage(config);
    }
    throw ValidationError("unknown command");
}

TableHeader make_header(Command command, const RunConfig& config) {
    TableHeader header{command_name(command), describe(config)};
    // Neither the output location nor the worker count affects the result.
    std::erase_if(header.settings,
                  [](const auto& kv) { return kv.first == "output.path" || kv.first == "run.workers"; });
    return header;
}

void execute(Command command, const RunConfig& config, std::ostream& fallback) {
    const Table table = run_command(command, config);
    const TableHeader header = make_header(command, config);
    if (config.output_path.empty()) {
        write_table(fallback, table, header, config.format);
    } else {
        write_table(std::filesystem::path(config.output_path), table, header, config.format);
    }
}

}  // namespace qbattery
