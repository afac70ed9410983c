#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qbattery/dynamics.hpp"
#include "qbattery/spin_model.hpp"

namespace qbattery {

/// Quenched average of P_max over Gaussian coupling realizations.
struct DisorderStats {
    double mean_p_max = 0.0;
    double std_error = 0.0;           // sample std / sqrt(n)
    std::size_t n_realizations = 0;   // realizations that entered the mean
    std::size_t n_failed = 0;         // excluded on degenerate normalization
    std::uint64_t master_seed = 0;
    bool converged_2dp = false;
};

/// Running mean over the last 10% of `samples` moves by less than 0.005.
bool running_mean_converged(const std::vector<double>& samples, double window_fraction = 0.1,
                            double tolerance = 0.005);

/// Monte Carlo estimate of <P_max> over `spec.n_realizations` realizations.
/// Realization k depends only on (spec.master_seed, k); the reduction runs in
/// index order, so the result is identical for any worker count.
DisorderStats quenched_power(const ModelParams& base, const DisorderSpec& spec, const StatePrep& prep,
                             const OptimizerConfig& opt = {}, std::size_t workers = 1,
                             int max_sites = kDefaultMaxSites);

}  // namespace qbattery
