#include "qbattery/dynamics.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qbattery/errors.hpp"

namespace qbattery {

void OptimizerConfig::validate() const {
    if (grid_points < 2) {
        throw ValidationError("grid_points must be >= 2");
    }
    if (!(refine_tolerance > 0.0)) {
        throw ValidationError("refine_tolerance must be positive");
    }
}

double charging_period(const ModelParams& params) {
    if (!(params.charging_omega > 0.0)) {
        throw ValidationError("charging_omega must be positive");
    }
    return 2.0 * std::numbers::pi / params.charging_omega;
}

LocalOperator charging_site_unitary(const ModelParams& params, double t) {
    // exp(-i theta sx) = cos(theta) I - i sin(theta) sx
    const double theta = 0.5 * params.charging_omega * t;
    LocalOperator u;
    u << std::cos(theta), Complex(0.0, -std::sin(theta)), Complex(0.0, -std::sin(theta)), std::cos(theta);
    return u;
}

namespace {

// Apply `u` to bit `bit` of every column of `m`.
template <typename Matrix>
void apply_site(Matrix& m, const LocalOperator& u, int bit) {
    const Eigen::Index mask = Eigen::Index{1} << bit;
    const Eigen::Index dim = m.rows();
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
        for (Eigen::Index a = 0; a < dim; ++a) {
            if (a & mask) continue;
            const Complex v0 = m(a, col);
            const Complex v1 = m(a | mask, col);
            m(a, col) = u(0, 0) * v0 + u(0, 1) * v1;
            m(a | mask, col) = u(1, 0) * v0 + u(1, 1) * v1;
        }
    }
}

template <typename Matrix>
void apply_product(Matrix& m, const LocalOperator& u, int n_sites) {
    for (int bit = 0; bit < n_sites; ++bit) apply_site(m, u, bit);
}

// In-place normalized Walsh-Hadamard transform of every column.
void hadamard_columns(Operator& m) {
    const Eigen::Index dim = m.rows();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
        Complex* data = m.col(col).data();
        for (Eigen::Index half = 1; half < dim; half <<= 1) {
            for (Eigen::Index start = 0; start < dim; start += 2 * half) {
                for (Eigen::Index k = start; k < start + half; ++k) {
                    const Complex lo = data[k];
                    const Complex hi = data[k + half];
                    data[k] = lo + hi;
                    data[k + half] = lo - hi;
                }
            }
        }
        m.col(col) *= scale;
    }
}

// T M T with T the N-fold Hadamard (real symmetric).
Operator to_x_basis(const Operator& m) {
    Operator a = m;
    hadamard_columns(a);
    Operator b = a.transpose();
    hadamard_columns(b);
    return b.transpose();
}

}  // namespace

QuantumState evolve(const QuantumState& state0, const ModelParams& params, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("evolution time must be non-negative, got " + std::to_string(t));
    }
    const int n = state0.n_sites();
    if (n != params.n_sites) {
        throw ValidationError("state has " + std::to_string(n) + " sites, params have " +
                              std::to_string(params.n_sites));
    }
    const LocalOperator u = charging_site_unitary(params, t);
    if (state0.is_pure()) {
        StateVector v = state0.vector();
        apply_product(v, u, n);
        return QuantumState::pure(std::move(v), state0.degenerate_ground());
    }
    // U rho U^dagger = U (U rho)^dagger for Hermitian rho.
    Operator a = state0.density();
    apply_product(a, u, n);
    Operator b = a.adjoint();
    apply_product(b, u, n);
    return QuantumState::mixed(std::move(b));
}

double work(const QuantumState& state_t, const QuantumState& state0, const NormalizedHamiltonian& h_norm) {
    if (state_t.dimension() != state0.dimension() || state0.dimension() != h_norm.matrix.rows()) {
        throw ValidationError("work: state and Hamiltonian dimensions differ");
    }
    return expectation(state_t, h_norm.matrix) - expectation(state0, h_norm.matrix);
}

WorkProfile::WorkProfile(const QuantumState& state0, const NormalizedHamiltonian& h_norm, double omega)
    : omega_(omega) {
    if (!(omega > 0.0)) {
        throw ValidationError("charging_omega must be positive");
    }
    const Eigen::Index dim = h_norm.matrix.rows();
    if (state0.dimension() != dim) {
        throw ValidationError("work profile: state and Hamiltonian dimensions differ");
    }
    const int n = sites_for_dimension(dim);
    const Operator hx = to_x_basis(h_norm.matrix);

    std::vector<int> popcount(dim);
    for (Eigen::Index a = 0; a < dim; ++a) popcount[a] = std::popcount(static_cast<std::uint64_t>(a));

    coefficients_.assign(n + 1, Complex(0.0));
    if (state0.is_pure()) {
        // c_d = sum over pop(b) - pop(a) = d of conj(psi_a) Hx_ab psi_b
        Operator psi = state0.vector();
        hadamard_columns(psi);
        for (Eigen::Index b = 0; b < dim; ++b) {
            const Complex psi_b = psi(b, 0);
            for (Eigen::Index a = 0; a < dim; ++a) {
                const int d = popcount[b] - popcount[a];
                if (d > 0) coefficients_[d] += std::conj(psi(a, 0)) * hx(a, b) * psi_b;
            }
        }
    } else {
        // c_d = sum over pop(a) - pop(b) = d of Hx_ba rho_ab
        const Operator rho = to_x_basis(state0.density());
        for (Eigen::Index b = 0; b < dim; ++b) {
            for (Eigen::Index a = 0; a < dim; ++a) {
                const int d = popcount[a] - popcount[b];
                if (d > 0) coefficients_[d] += hx(b, a) * rho(a, b);
            }
        }
    }
}

double WorkProfile::operator()(double t) const {
    double w = 0.0;
    for (std::size_t d = 1; d < coefficients_.size(); ++d) {
        const double phase = static_cast<double>(d) * omega_ * t;
        const Complex shift(std::cos(phase) - 1.0, std::sin(phase));
        w += 2.0 * (coefficients_[d] * shift).real();
    }
    return w;
}

double WorkProfile::period() const { return 2.0 * std::numbers::pi / omega_; }

double WorkProfile::amplitude() const {
    double total = 0.0;
    for (std::size_t d = 1; d < coefficients_.size(); ++d) total += std::abs(coefficients_[d]);
    return total;
}

namespace {

constexpr double kFlatProfile = 1e-13;

}  // namespace

PowerResult maximize_power(const WorkProfile& profile, const OptimizerConfig& opt) {
    opt.validate();
    const double period = profile.period();
    const std::size_t n = opt.grid_points;
    const double step = period / static_cast<double>(n);
    auto grid_time = [&](std::size_t i) { return i == n ? period : step * static_cast<double>(i); };
    auto power = [&](double t) { return profile(t) / t; };

    PowerResult result;
    result.grid_points = n;
    if (profile.amplitude() <= kFlatProfile) {
        result.t_star = grid_time(1);
        return result;
    }

    std::size_t best = 1;
    double best_p = power(grid_time(1));
    for (std::size_t i = 2; i <= n; ++i) {
        const double p = power(grid_time(i));
        if (p > best_p) {
            best_p = p;
            best = i;
        }
    }

    // Golden-section search on the bracket around the best grid point. Only
    // interior points are evaluated, so t = 0 is never touched.
    double lo = best == 1 ? 0.0 : grid_time(best - 1);
    double hi = best == n ? period : grid_time(best + 1);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double p1 = power(x1);
    double p2 = power(x2);
    while (hi - lo > opt.refine_tolerance) {
        if (p1 < p2) {
            lo = x1;
            x1 = x2;
            p1 = p2;
            x2 = lo + inv_phi * (hi - lo);
            p2 = power(x2);
        } else {
            hi = x2;
            x2 = x1;
            p2 = p1;
            x1 = hi - inv_phi * (hi - lo);
            p1 = power(x1);
        }
    }
    double t_star = 0.5 * (lo + hi);
    if (!(power(t_star) >= best_p)) t_star = grid_time(best);

    result.t_star = t_star;
    result.work_at_t_star = profile(t_star);
    result.p_max = result.work_at_t_star / t_star;
    return result;
}

PowerResult power_max(const QuantumState& state0, const NormalizedHamiltonian& h_norm,
                      const ModelParams& params, const OptimizerConfig& opt) {
    if (state0.n_sites() != params.n_sites) {
        throw ValidationError("state and params disagree on n_sites");
    }
    const WorkProfile profile(state0, h_norm, params.charging_omega);
    PowerResult result = maximize_power(profile, opt);
    result.degenerate_ground = state0.degenerate_ground();
    return result;
}

QuantumState prepare_state(const NormalizedHamiltonian& h_norm, const StatePrep& prep) {
    if (const auto* thermal = std::get_if<ThermalPrep>(&prep)) {
        return thermal_state(h_norm, thermal->beta);
    }
    return ground_state(h_norm);
}

PowerResult power_for(const ModelParams& params, const StatePrep& prep, const OptimizerConfig& opt,
                      int max_sites) {
    const DiagonalizedHamiltonian h = normalize_and_diagonalize(build_h0(params, max_sites));
    const QuantumState state0 = std::holds_alternative<ThermalPrep>(prep)
                                    ? thermal_state(h.eig, std::get<ThermalPrep>(prep).beta)
                                    : ground_state(h.eig);
    return power_max(state0, h.normalized, params, opt);
}

}  // namespace qbattery
