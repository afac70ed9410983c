#pragma once

// Dense complex-matrix substrate for spin-1/2 chains.
//
// Basis convention: sigma^z = diag(1, -1), computational basis ordered
// lexicographically with site 1 as the most significant qubit. Site j of an
// N-site chain therefore lives on bit (N - j) of the basis index.

#include <complex>
#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace qbattery {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using LocalOperator = Eigen::Matrix2cd;

namespace pauli {
LocalOperator identity();
LocalOperator x();
LocalOperator y();
LocalOperator z();
}  // namespace pauli

/// 2^n_sites, throwing ValidationError for n_sites < 1.
std::size_t hilbert_dimension(int n_sites);

/// Number of sites for a power-of-two dimension; ValidationError otherwise.
int sites_for_dimension(Eigen::Index dim);

/// Bit position of 1-indexed `site` inside a basis index.
inline int site_bit(int site, int n_sites) { return n_sites - site; }

/// I^(site-1) (x) local (x) I^(n_sites-site).
Operator kron_embed(const LocalOperator& local, int site, int n_sites);

Operator kron(const Operator& a, const Operator& b);

struct EigenDecomposition {
    RealVector eigenvalues;  // ascending
    Operator eigenvectors;   // columns
};

/// Largest entry of |M - M^dagger|.
double hermiticity_defect(const Operator& op);

/// Full spectrum of a Hermitian operator. Inputs with an identically zero
/// imaginary part are routed through the real symmetric solver (LAPACK dsyevd),
/// the rest through zheevd.
EigenDecomposition eig_hermitian(const Operator& op);

/// Block-diagonal solve for an operator that conserves the given sector
/// labels (one per basis index). Eigenpairs are merged in ascending order;
/// equal eigenvalues keep the lower label first. Couplings between sectors
/// raise ValidationError.
EigenDecomposition eig_hermitian_sectors(const Operator& op, std::span<const int> sector_of_index);

/// The `count` lowest eigenpairs, ascending; eigenvectors has `count` columns.
EigenDecomposition lowest_eigenpairs(const Operator& op, Eigen::Index count);

/// Eigenvalues only, ascending.
RealVector eigenvalues_hermitian(const Operator& op);

/// exp(-i op t), spectrally.
Operator unitary_exp(const Operator& op, double t);
Operator unitary_exp(const EigenDecomposition& eig, double t);

/// Reduced density matrix on `keep_sites` (1-indexed, any order; the result
/// is laid out in ascending site order).
Operator partial_trace(const Operator& rho, std::span<const int> keep_sites, int n_sites);

/// Reduced density matrix of the pure state |psi><psi| without forming it.
Operator partial_trace(const StateVector& psi, std::span<const int> keep_sites, int n_sites);

/// Transpose of tensor factor `subsystem` (1 or 2) of a two-qubit operator.
Operator partial_transpose(const Operator& rho, int subsystem);

/// Sum of singular values; for Hermitian input, sum of |eigenvalues|.
double trace_norm(const Operator& op);

/// Clip eigenvalues in [-tol, 0) to zero and renormalize to unit trace.
/// Eigenvalues below -tol raise ValidationError.
Operator clip_to_density(const Operator& rho, double tol = 1e-10);

}  // namespace qbattery
