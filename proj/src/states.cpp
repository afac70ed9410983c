#include "qbattery/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbattery/errors.hpp"

namespace qbattery {

QuantumState QuantumState::pure(StateVector vector, bool degenerate_ground) {
    const double norm = vector.norm();
    if (std::abs(norm - 1.0) > 1e-10) {
        throw ValidationError("pure state is not normalized (norm " + std::to_string(norm) + ")");
    }
    sites_for_dimension(vector.size());
    return QuantumState(std::move(vector), degenerate_ground);
}

QuantumState QuantumState::mixed(Operator density) {
    sites_for_dimension(density.rows());
    if (density.rows() != density.cols()) {
        throw ValidationError("density matrix is not square");
    }
    const double trace = density.trace().real();
    if (std::abs(trace - 1.0) > 1e-10) {
        throw ValidationError("density matrix trace is " + std::to_string(trace));
    }
    return QuantumState(std::move(density), false);
}

const StateVector& QuantumState::vector() const {
    if (!is_pure()) throw ValidationError("state is mixed; no state vector");
    return std::get<StateVector>(data_);
}

const Operator& QuantumState::density() const {
    if (is_pure()) throw ValidationError("state is pure; use density_matrix()");
    return std::get<Operator>(data_);
}

Operator QuantumState::density_matrix() const {
    if (is_pure()) {
        const auto& v = std::get<StateVector>(data_);
        return v * v.adjoint();
    }
    return std::get<Operator>(data_);
}

Eigen::Index QuantumState::dimension() const {
    return is_pure() ? std::get<StateVector>(data_).size() : std::get<Operator>(data_).rows();
}

Operator bias_operator(const SymmetryBias& bias, int n_sites) {
    const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_sites));
    Operator out = Operator::Zero(dim, dim);
    for (int site = 1; site <= n_sites; ++site) {
        // A field along +x (or alternating +-x) lowers the energy of the
        // matching polarization, hence the minus sign.
        const double sign = (bias.kind == BiasKind::Staggered && site % 2 == 1) ? 1.0 : -1.0;
        const Eigen::Index mask = Eigen::Index{1} << site_bit(site, n_sites);
        for (Eigen::Index a = 0; a < dim; ++a) {
            out(a ^ mask, a) += sign * bias.epsilon;
        }
    }
    return out;
}

QuantumState ground_state(const Operator& hamiltonian, const std::optional<SymmetryBias>& bias) {
    // Two lowest pairs are enough for the state and the degeneracy flag.
    const Eigen::Index count = std::min<Eigen::Index>(2, hamiltonian.rows());
    if (bias) {
        return ground_state(lowest_eigenpairs(
            hamiltonian + bias_operator(*bias, sites_for_dimension(hamiltonian.rows())), count));
    }
    return ground_state(lowest_eigenpairs(hamiltonian, count));
}

QuantumState ground_state(const EigenDecomposition& eig) {
    const bool degenerate =
        eig.eigenvalues.size() > 1 && eig.eigenvalues(1) - eig.eigenvalues(0) <= kDegeneracyTolerance;
    StateVector psi = eig.eigenvectors.col(0);
    psi.normalize();
    return QuantumState::pure(std::move(psi), degenerate);
}

QuantumState ground_state(const NormalizedHamiltonian& h_norm, const std::optional<SymmetryBias>& bias) {
    return ground_state(h_norm.matrix, bias);
}

QuantumState thermal_state(const NormalizedHamiltonian& h_norm, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw ValidationError("beta must be a non-negative number");
    }
    return thermal_state(eig_hermitian(h_norm.matrix), beta);
}

QuantumState thermal_state(const EigenDecomposition& eig, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw ValidationError("beta must be a non-negative number");
    }
    // Shift by the ground energy so the largest weight is exactly 1.
    const double e0 = eig.eigenvalues(0);
    RealVector weights = (-beta * (eig.eigenvalues.array() - e0)).exp().matrix();
    weights /= weights.sum();
    Operator rho = eig.eigenvectors * weights.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return QuantumState::mixed(std::move(rho));
}

double expectation(const QuantumState& state, const Operator& op) {
    if (op.rows() != state.dimension()) {
        throw ValidationError("operator and state dimensions differ");
    }
    if (state.is_pure()) {
        const auto& v = state.vector();
        return v.dot(op * v).real();
    }
    // Tr(op rho) = sum_ij op_ij rho_ji
    return (op.transpose().cwiseProduct(state.density())).sum().real();
}

}  // namespace qbattery
