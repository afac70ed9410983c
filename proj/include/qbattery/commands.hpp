#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbattery/config.hpp"
#include "qbattery/table.hpp"

namespace qbattery {

enum class Command {
    PowerSweep,
    DisorderSweep,
    ThermalMap,
    Entanglement,
    OrderParams,
    FidelityScan,
    ScalingFit,
    Advantage,
};

std::string command_name(Command command);
std::optional<Command> parse_command(std::string_view name);
const std::vector<Command>& all_commands();

/// Column name for a swept parameter, e.g. "J_over_h" for j.
std::string sweep_column(const std::string& parameter);

/// One row per sweep point: value, p_max, t_star, work, degenerate_ground.
Table run_power_sweep(const RunConfig& config);

/// One row per sweep point: value, mean_p_max, std_error, n_realizations,
/// n_failed, converged_2dp, ordered_p_max. Sweeping the disordered coupling
/// moves the disorder mean.
Table run_disorder_sweep(const RunConfig& config);

/// beta_over_h, J_over_h, p_t_diff over thermal.beta_* x sweep (j only).
Table run_thermal_map(const RunConfig& config);

/// Middle-pair negativity and log-negativity of the initial state or of the
/// state at t*.
Table run_entanglement(const RunConfig& config);

/// m_fm (uniform bias) and m_afm (staggered bias) per sweep point.
Table run_order_params(const RunConfig& config);

/// Ground-state fidelity between J and J + fidelity.delta_j (sweep j only).
Table run_fidelity_scan(const RunConfig& config);

/// First-jump critical couplings for every size in scaling.sizes, in both
/// directions, with the power-law fit of |J_c - J_c(inf)| against N.
Table run_scaling_fit(const RunConfig& config);

/// find_jmax over the sweep (j only) for every advantage.gammas x
/// scaling.sizes pair.
Table run_advantage(const RunConfig& config);

Table run_command(Command command, const RunConfig& config);

TableHeader make_header(Command command, const RunConfig& config);

/// Validates, runs, and writes to config.output_path (or `fallback` when the
/// path is empty).
void execute(Command command, const RunConfig& config, std::ostream& fallback);

}  // namespace qbattery
