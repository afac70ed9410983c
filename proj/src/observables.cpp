#include "qbattery/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>

#include "qbattery/errors.hpp"
#include "qbattery/parallel.hpp"

namespace qbattery {

std::pair<int, int> middle_pair(int n_sites) {
    if (n_sites < 2) {
        throw ValidationError("middle pair needs n_sites >= 2, got " + std::to_string(n_sites));
    }
    const int first = n_sites % 2 == 0 ? n_sites / 2 : (n_sites + 1) / 2;
    return {first, first + 1};
}

EntanglementResult two_qubit_entanglement(const Operator& rho_pair) {
    const RealVector spectrum = eigenvalues_hermitian(partial_transpose(rho_pair, 2));
    EntanglementResult out;
    double trace_norm = 0.0;
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        trace_norm += std::abs(spectrum(i));
        if (spectrum(i) < 0.0) out.negativity -= spectrum(i);
    }
    out.log_negativity = std::log2(trace_norm);
    return out;
}

EntanglementResult middle_pair_entanglement(const QuantumState& state, int n_sites) {
    const auto pair = middle_pair(n_sites);
    if (state.n_sites() != n_sites) {
        throw ValidationError("state does not have " + std::to_string(n_sites) + " sites");
    }
    const std::array<int, 2> keep{pair.first, pair.second};
    const Operator rho_pair = state.is_pure() ? partial_trace(state.vector(), keep, n_sites)
                                              : partial_trace(state.density(), keep, n_sites);
    EntanglementResult out = two_qubit_entanglement(rho_pair);
    out.pair = pair;
    return out;
}

std::vector<double> site_x_magnetization(const QuantumState& state) {
    const int n = state.n_sites();
    const Eigen::Index dim = state.dimension();
    std::vector<double> out(n, 0.0);
    for (int site = 1; site <= n; ++site) {
        const Eigen::Index mask = Eigen::Index{1} << site_bit(site, n);
        double m = 0.0;
        if (state.is_pure()) {
            const auto& psi = state.vector();
            for (Eigen::Index a = 0; a < dim; ++a) m += (std::conj(psi(a ^ mask)) * psi(a)).real();
        } else {
            // Tr(sx rho) = sum_a rho(a, a ^ mask)
            const auto& rho = state.density();
            for (Eigen::Index a = 0; a < dim; ++a) m += rho(a, a ^ mask).real();
        }
        out[site - 1] = m;
    }
    return out;
}

OrderParams order_parameters(const ModelParams& params, BiasKind bias_kind, double bias_eps, int max_sites) {
    if (!(bias_eps >= 0.0)) {
        throw ValidationError("bias_eps must be non-negative");
    }
    const Operator h0 = build_h0(params, max_sites);
    const QuantumState psi = ground_state(h0, SymmetryBias{bias_kind, bias_eps});
    const auto mx = site_x_magnetization(psi);

    OrderParams out;
    out.bias_kind = bias_kind;
    out.bias_eps = bias_eps;
    const double n = static_cast<double>(params.n_sites);
    for (int site = 1; site <= params.n_sites; ++site) {
        const double sign = site % 2 == 0 ? 1.0 : -1.0;
        out.m_fm += mx[site - 1] / n;
        out.m_afm += sign * mx[site - 1] / n;
    }
    return out;
}

std::vector<FidelityPoint> fidelity_scan(const ModelParams& base, std::span<const double> j_values,
                                         double delta_j, const std::optional<SymmetryBias>& bias,
                                         std::size_t workers, int max_sites) {
    if (!(delta_j > 0.0)) {
        throw ValidationError("delta_j must be positive");
    }
    base.validate();

    // Deduplicate couplings on a 1e-9 lattice so that J + delta_j reuses the
    // ground state of the next grid point when the grid step equals delta_j.
    auto key = [](double j) { return static_cast<long long>(std::llround(j * 1e9)); };
    std::map<long long, double> couplings;
    for (double j : j_values) {
        couplings.emplace(key(j), j);
        couplings.emplace(key(j + delta_j), j + delta_j);
    }
    std::vector<long long> keys;
    std::vector<double> values;
    for (const auto& [k, j] : couplings) {
        keys.push_back(k);
        values.push_back(j);
    }

    std::vector<StateVector> ground(values.size());
    parallel_for(values.size(), workers, [&](std::size_t i) {
        ModelParams p = base;
        p.set_uniform_xy(values[i]);
        const Operator h0 = build_h0(p, max_sites);
        ground[i] = bias ? ground_state(h0, bias).vector() : ground_state(diagonalize_h0(h0)).vector();
    });

    auto lookup = [&](double j) -> const StateVector& {
        const auto it = std::lower_bound(keys.begin(), keys.end(), key(j));
        return ground[static_cast<std::size_t>(it - keys.begin())];
    };

    std::vector<FidelityPoint> out;
    out.reserve(j_values.size());
    for (double j : j_values) {
        const double overlap = std::abs(lookup(j).dot(lookup(j + delta_j)));
        out.push_back({j, std::min(overlap, 1.0)});
    }
    return out;
}

}  // namespace qbattery
