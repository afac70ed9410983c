#pragma once

#include <optional>
#include <variant>

#include "qbattery/linalg.hpp"
#include "qbattery/spin_model.hpp"

namespace qbattery {

enum class StateKind { Pure, Mixed };

/// Pure state vector or density matrix over 2^N amplitudes.
class QuantumState {
public:
    static QuantumState pure(StateVector vector, bool degenerate_ground = false);
    static QuantumState mixed(Operator density);

    StateKind kind() const { return std::holds_alternative<StateVector>(data_) ? StateKind::Pure : StateKind::Mixed; }
    bool is_pure() const { return kind() == StateKind::Pure; }

    const StateVector& vector() const;
    const Operator& density() const;

    /// |psi><psi| for pure states, the stored matrix otherwise.
    Operator density_matrix() const;

    Eigen::Index dimension() const;
    int n_sites() const { return sites_for_dimension(dimension()); }

    /// Set when the state was picked from a degenerate ground space.
    bool degenerate_ground() const { return degenerate_ground_; }

private:
    QuantumState(std::variant<StateVector, Operator> data, bool degenerate_ground)
        : data_(std::move(data)), degenerate_ground_(degenerate_ground) {}

    std::variant<StateVector, Operator> data_;
    bool degenerate_ground_ = false;
};

enum class BiasKind { Uniform, Staggered };

/// Symmetry-breaking x field favouring +x on every site (uniform) or +x on
/// even and -x on odd sites (staggered).
struct SymmetryBias {
    BiasKind kind = BiasKind::Uniform;
    double epsilon = 1e-4;
};

/// -eps sum_j s_j sx_j with s_j = 1 (uniform) or (-1)^j (staggered).
Operator bias_operator(const SymmetryBias& bias, int n_sites);

inline constexpr double kDegeneracyTolerance = 1e-10;

/// Lowest eigenvector of `hamiltonian` (+ bias). A degenerate lowest level
/// yields the eigensolver's first vector with the degeneracy flag set.
QuantumState ground_state(const Operator& hamiltonian, const std::optional<SymmetryBias>& bias = std::nullopt);
QuantumState ground_state(const NormalizedHamiltonian& h_norm,
                          const std::optional<SymmetryBias>& bias = std::nullopt);

/// Ground state read off an existing decomposition.
QuantumState ground_state(const EigenDecomposition& eig);

/// exp(-beta H) / Z for the normalized Hamiltonian; beta = 0 is infinite temperature.
QuantumState thermal_state(const NormalizedHamiltonian& h_norm, double beta);
QuantumState thermal_state(const EigenDecomposition& eig, double beta);

/// <state|op|state> or Tr(op rho), real part.
double expectation(const QuantumState& state, const Operator& op);

}  // namespace qbattery
