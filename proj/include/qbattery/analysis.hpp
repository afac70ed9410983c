#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "qbattery/dynamics.hpp"
#include "qbattery/spin_model.hpp"

namespace qbattery {

struct CurvePoint {
    double j = 0.0;  // J/|h|
    double value = 0.0;
};
using Curve = std::vector<CurvePoint>;

/// Inclusive arithmetic grid start, start + step, ..., up to stop.
std::vector<double> linear_grid(double start, double stop, double step);

/// P_max along uniform xy couplings J in `j_values`.
Curve power_curve(const ModelParams& base, std::span<const double> j_values, const StatePrep& prep,
                  const OptimizerConfig& opt = {}, std::size_t workers = 1, int max_sites = kDefaultMaxSites);

struct Interval {
    double lo = -2.0;
    double hi = 2.0;
};

struct AdvantageResult {
    double j_max_over_h = 0.0;
    double p_at_jmax = 0.0;
    double p_at_zero = 0.0;
    double p_adv = 0.0;
    double relative_gain = 0.0;
};

/// Argmax of the curve inside `range` (ties go to the smallest |J|), compared
/// with the sample at J = 0.
AdvantageResult find_jmax(const Curve& curve, Interval range = {});

enum class ScanDirection { Ascending, Descending };

/// All adjacent-sample steps |dP| > threshold_factor * median |dP|, ordered
/// outward from J = 0 in the given direction. Each location is the midpoint
/// of the bracketing pair.
std::vector<double> detect_jumps(const Curve& curve, ScanDirection direction, double threshold_factor = 5.0);

/// First entry of detect_jumps, or nothing for a smooth curve.
std::optional<double> detect_first_jump(const Curve& curve, ScanDirection direction,
                                        double threshold_factor = 5.0);

/// Locations where |second difference| exceeds threshold_factor times its
/// median over the surrounding `window` samples on each side, i.e. jumps,
/// kinks and spikes. Each location is the middle sample of the offending
/// triple.
std::vector<double> detect_nonanalytic_points(const Curve& curve, double threshold_factor = 5.0,
                                              std::size_t window = 10);

struct ScalingFit {
    std::map<int, double> j_c_by_n;
    double prefactor = 0.0;      // a in |J_c(N) - J_c(inf)| = a N^b
    double exponent = 0.0;       // b
    double log_prefactor = 0.0;  // ln a, the fitted intercept
    double r_squared = 0.0;
    std::vector<double> residuals;  // in ln space, one per fitted size
    std::vector<int> excluded;      // sizes with J_c(N) == J_c(inf)
};

/// Least-squares line through (ln N, ln |J_c(N) - J_c(inf)|).
ScalingFit scaling_fit(const std::map<int, double>& j_c_by_n, double j_c_infinity = 1.0);

struct ThermalDiff {
    double beta_over_h = 0.0;
    double j_over_h = 0.0;
    double p_t_diff = 0.0;
};

/// P_max(thermal, beta) - P_max(ground) on the (beta, J) grid, beta-major.
std::vector<ThermalDiff> thermal_diff_map(const ModelParams& params, std::span<const double> beta_grid,
                                          std::span<const double> j_grid, const OptimizerConfig& opt = {},
                                          std::size_t workers = 1, int max_sites = kDefaultMaxSites);

}  // namespace qbattery
