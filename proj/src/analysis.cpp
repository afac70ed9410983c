#include "qbattery/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbattery/errors.hpp"
#include "qbattery/parallel.hpp"

namespace qbattery {

std::vector<double> linear_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ValidationError("grid step must be positive");
    }
    if (!(stop >= start)) {
        throw ValidationError("grid stop must not be below start");
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        double v = start + static_cast<double>(i) * step;
        // Snap values within rounding of a step multiple, and drop -0.
        const double snapped = std::round(v / step) * step;
        if (std::abs(v - snapped) < 1e-9 * step) v = snapped;
        out[i] = v == 0.0 ? 0.0 : v;
    }
    return out;
}

Curve power_curve(const ModelParams& base, std::span<const double> j_values, const StatePrep& prep,
                  const OptimizerConfig& opt, std::size_t workers, int max_sites) {
    base.validate();
    Curve curve(j_values.size());
    parallel_for(j_values.size(), workers, [&](std::size_t i) {
        ModelParams p = base;
        p.set_uniform_xy(j_values[i]);
        curve[i] = {j_values[i], power_for(p, prep, opt, max_sites).p_max};
    });
    return curve;
}

namespace {

constexpr double kZeroTolerance = 1e-9;

Curve sorted(const Curve& curve) {
    Curve out = curve;
    std::stable_sort(out.begin(), out.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.j < b.j; });
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    const auto mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

}  // namespace

AdvantageResult find_jmax(const Curve& curve, Interval range) {
    const CurvePoint* zero = nullptr;
    const CurvePoint* best = nullptr;
    std::size_t in_range = 0;
    for (const auto& pt : curve) {
        if (std::abs(pt.j) <= kZeroTolerance) zero = &pt;
        if (pt.j < range.lo - kZeroTolerance || pt.j > range.hi + kZeroTolerance) continue;
        ++in_range;
        if (!best || pt.value > best->value ||
            (pt.value == best->value && std::abs(pt.j) < std::abs(best->j))) {
            best = &pt;
        }
    }
    if (!zero) {
        throw ValidationError("power curve has no sample at J = 0");
    }
    if (in_range < 3) {
        throw ValidationError("power curve needs at least 3 samples inside the search range");
    }
    AdvantageResult out;
    out.j_max_over_h = best->j;
    out.p_at_jmax = best->value;
    out.p_at_zero = zero->value;
    out.p_adv = out.p_at_jmax - out.p_at_zero;
    out.relative_gain = out.p_at_zero != 0.0 ? out.p_adv / out.p_at_zero : 0.0;
    return out;
}

std::vector<double> detect_jumps(const Curve& curve, ScanDirection direction, double threshold_factor) {
    if (!(threshold_factor > 0.0)) {
        throw ValidationError("threshold_factor must be positive");
    }
    const Curve c = sorted(curve);
    if (c.size() < 2) return {};

    std::vector<double> steps(c.size() - 1);
    for (std::size_t i = 0; i + 1 < c.size(); ++i) steps[i] = std::abs(c[i + 1].value - c[i].value);
    const double threshold = threshold_factor * median(steps);

    std::vector<double> out;
    auto consider = [&](std::size_t i) {
        if (steps[i] > threshold) out.push_back(0.5 * (c[i].j + c[i + 1].j));
    };
    if (direction == ScanDirection::Ascending) {
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            if (c[i].j >= -kZeroTolerance) consider(i);
        }
    } else {
        for (std::size_t i = c.size() - 1; i-- > 0;) {
            if (c[i + 1].j <= kZeroTolerance) consider(i);
        }
    }
    return out;
}

std::optional<double> detect_first_jump(const Curve& curve, ScanDirection direction, double threshold_factor) {
    const auto jumps = detect_jumps(curve, direction, threshold_factor);
    if (jumps.empty()) return std::nullopt;
    return jumps.front();
}

std::vector<double> detect_nonanalytic_points(const Curve& curve, double threshold_factor, std::size_t window) {
    if (!(threshold_factor > 0.0)) {
        throw ValidationError("threshold_factor must be positive");
    }
    if (window < 1) {
        throw ValidationError("window must be >= 1");
    }
    const Curve c = sorted(curve);
    if (c.size() < 3) return {};
    std::vector<double> second(c.size() - 2);
    double scale = 0.0;
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
        second[i - 1] = std::abs(c[i + 1].value - 2.0 * c[i].value + c[i - 1].value);
    }
    for (const auto& pt : c) scale = std::max(scale, std::abs(pt.value));
    // Second differences at the rounding level are never flagged.
    const double floor = 1e-9 * std::max(scale, 1e-300);

    std::vector<double> out;
    for (std::size_t k = 0; k < second.size(); ++k) {
        const std::size_t lo = k > window ? k - window : 0;
        const std::size_t hi = std::min(second.size(), k + window + 1);
        const double local = median(std::vector<double>(second.begin() + static_cast<std::ptrdiff_t>(lo),
                                                        second.begin() + static_cast<std::ptrdiff_t>(hi)));
        if (second[k] > threshold_factor * std::max(local, floor)) out.push_back(c[k + 1].j);
    }
    return out;
}

ScalingFit scaling_fit(const std::map<int, double>& j_c_by_n, double j_c_infinity) {
    ScalingFit fit;
    fit.j_c_by_n = j_c_by_n;
    std::vector<double> xs, ys;
    for (const auto& [n, j_c] : j_c_by_n) {
        if (n < 1) {
            throw ValidationError("system size must be positive, got " + std::to_string(n));
        }
        const double gap = std::abs(j_c - j_c_infinity);
        if (gap == 0.0) {
            fit.excluded.push_back(n);
            continue;
        }
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(gap));
    }
    if (xs.size() < 2) {
        throw ValidationError("scaling fit needs at least two usable system sizes");
    }
    const double m = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) {
        throw ValidationError("scaling fit needs at least two distinct system sizes");
    }
    fit.exponent = sxy / sxx;
    fit.log_prefactor = my - fit.exponent * mx;
    fit.prefactor = std::exp(fit.log_prefactor);

    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.log_prefactor + fit.exponent * xs[i]);
        fit.residuals.push_back(r);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

std::vector<ThermalDiff> thermal_diff_map(const ModelParams& params, std::span<const double> beta_grid,
                                          std::span<const double> j_grid, const OptimizerConfig& opt,
                                          std::size_t workers, int max_sites) {
    if (beta_grid.empty() || j_grid.empty()) {
        throw ValidationError("thermal map grids must be non-empty");
    }
    for (double beta : beta_grid) {
        if (!(beta >= 0.0)) throw ValidationError("beta grid values must be non-negative");
    }
    params.validate();
    opt.validate();

    const std::size_t nb = beta_grid.size();
    std::vector<ThermalDiff> out(nb * j_grid.size());
    parallel_for(j_grid.size(), workers, [&](std::size_t jj) {
        ModelParams p = params;
        p.set_uniform_xy(j_grid[jj]);
        const DiagonalizedHamiltonian h = normalize_and_diagonalize(build_h0(p, max_sites));
        const double p_ground = power_max(ground_state(h.eig), h.normalized, p, opt).p_max;
        for (std::size_t bb = 0; bb < nb; ++bb) {
            const double p_thermal = power_max(thermal_state(h.eig, beta_grid[bb]), h.normalized, p, opt).p_max;
            out[bb * j_grid.size() + jj] = {beta_grid[bb], j_grid[jj], p_thermal - p_ground};
        }
    });
    return out;
}

}  // namespace qbattery
