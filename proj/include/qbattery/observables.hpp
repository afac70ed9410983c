#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qbattery/linalg.hpp"
#include "qbattery/spin_model.hpp"
#include "qbattery/states.hpp"

namespace qbattery {

struct EntanglementResult {
    double negativity = 0.0;      // |sum of negative eigenvalues| of rho^{T_B}
    double log_negativity = 0.0;  // log2 || rho^{T_B} ||_1
    std::pair<int, int> pair{1, 2};
};

/// Sites (N/2, N/2 + 1) for even N and ((N+1)/2, (N+1)/2 + 1) for odd N.
std::pair<int, int> middle_pair(int n_sites);

/// Both measures for a two-qubit density matrix.
EntanglementResult two_qubit_entanglement(const Operator& rho_pair);

EntanglementResult middle_pair_entanglement(const QuantumState& state, int n_sites);

struct OrderParams {
    double m_fm = 0.0;   // sum_j <sx_j> / N
    double m_afm = 0.0;  // sum_j (-1)^j <sx_j> / N
    BiasKind bias_kind = BiasKind::Uniform;
    double bias_eps = 1e-4;
};

/// <sx_j> for every site, j = 1..N.
std::vector<double> site_x_magnetization(const QuantumState& state);

/// Ground state of H0 + bias (bias_eps in units of energy, default 1e-4 |h|)
/// and its uniform and staggered x magnetizations.
OrderParams order_parameters(const ModelParams& params, BiasKind bias_kind, double bias_eps = 1e-4,
                             int max_sites = kDefaultMaxSites);

struct FidelityPoint {
    double j = 0.0;
    double fidelity = 0.0;
};

/// |<psi_J | psi_{J + delta_j}>| between ground states with uniform xy
/// coupling J. Ground states shared between grid points are computed once.
std::vector<FidelityPoint> fidelity_scan(const ModelParams& base, std::span<const double> j_values,
                                         double delta_j = 0.005,
                                         const std::optional<SymmetryBias>& bias = std::nullopt,
                                         std::size_t workers = 1, int max_sites = kDefaultMaxSites);

}  // namespace qbattery
