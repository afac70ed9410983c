#include "qbattery/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "qbattery/errors.hpp"
#include "qbattery/parallel.hpp"

namespace qbattery {

bool running_mean_converged(const std::vector<double>& samples, double window_fraction, double tolerance) {
    const std::size_t n = samples.size();
    if (n == 0) return false;
    const auto window =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(n))));
    double sum = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sum += samples[k];
        const double mean = sum / static_cast<double>(k + 1);
        if (k + window == n) {
            lo = hi = mean;
        } else if (k + window > n) {
            lo = std::min(lo, mean);
            hi = std::max(hi, mean);
        }
    }
    return hi - lo < tolerance;
}

DisorderStats quenched_power(const ModelParams& base, const DisorderSpec& spec, const StatePrep& prep,
                             const OptimizerConfig& opt, std::size_t workers, int max_sites) {
    spec.validate();
    opt.validate();
    base.validate();

    std::vector<std::optional<double>> per_realization(spec.n_realizations);
    parallel_for(spec.n_realizations, workers, [&](std::size_t k) {
        const ModelParams params = sample_realization(base, spec, k);
        try {
            per_realization[k] = power_for(params, prep, opt, max_sites).p_max;
        } catch (const DegenerateSpectrumError&) {
            per_realization[k].reset();
        }
    });

    std::vector<double> samples;
    samples.reserve(per_realization.size());
    for (const auto& p : per_realization) {
        if (p) samples.push_back(*p);
    }

    DisorderStats stats;
    stats.master_seed = spec.master_seed;
    stats.n_realizations = samples.size();
    stats.n_failed = spec.n_realizations - samples.size();
    if (static_cast<double>(stats.n_failed) > 0.01 * static_cast<double>(spec.n_realizations)) {
        throw AggregateError(std::to_string(stats.n_failed) + " of " + std::to_string(spec.n_realizations) +
                             " realizations failed to normalize");
    }
    if (samples.empty()) {
        throw AggregateError("no realization succeeded");
    }

    // Shifted sum: identical samples give back exactly that sample.
    const double shift = samples.front();
    double sum = 0.0;
    for (double p : samples) sum += p - shift;
    const double n = static_cast<double>(samples.size());
    stats.mean_p_max = shift + sum / n;
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double p : samples) ss += (p - stats.mean_p_max) * (p - stats.mean_p_max);
        stats.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    stats.converged_2dp = running_mean_converged(samples);
    return stats;
}

}  // namespace qbattery
