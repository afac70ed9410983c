#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qbattery/linalg.hpp"

namespace qbattery {

inline constexpr int kDefaultMaxSites = 14;

/// Open XYZ chain in a z field, charged by a uniform x field.
///
/// Energies are in units of |h|; with the default h = 1 every coupling reads
/// directly as J/|h|, Delta/|h| or omega/|h|.
struct ModelParams {
    int n_sites = 1;
    double field_h = 1.0;
    double anisotropy_gamma = 0.0;
    std::vector<double> xy_couplings;  // J_j, one per bond
    std::vector<double> zz_couplings;  // Delta_j, one per bond
    double charging_omega = 2.0;

    /// Site-independent couplings J and Delta on all N-1 bonds.
    static ModelParams uniform(int n_sites, double field_h, double gamma, double j, double delta,
                               double omega = 2.0);

    std::size_t n_bonds() const { return n_sites > 0 ? static_cast<std::size_t>(n_sites - 1) : 0; }

    void set_uniform_xy(double j);
    void set_uniform_zz(double delta);

    /// Throws ValidationError on any broken invariant.
    void validate() const;
};

enum class DisorderTarget { XyCouplings, ZzCouplings };

struct DisorderSpec {
    DisorderTarget target = DisorderTarget::XyCouplings;
    double mean = 0.0;
    double sigma = 0.0;
    std::size_t n_realizations = 5000;
    std::uint64_t master_seed = 0;

    void validate() const;
};

/// H0 rescaled so that its spectrum spans exactly [-1, 1].
struct NormalizedHamiltonian {
    Operator matrix;
    double e_min = 0.0;  // before normalization
    double e_max = 0.0;

    int n_sites() const { return sites_for_dimension(matrix.rows()); }
};

/// H0 = (h/2) sum_j sz_j
///    + (1/4) sum_j J_j [(1+g) sx_j sx_{j+1} + (1-g) sy_j sy_{j+1}]
///    + (1/4) sum_j Delta_j sz_j sz_{j+1}
/// with open boundaries. Built directly in the computational basis.
Operator build_h0(const ModelParams& params, int max_sites = kDefaultMaxSites);

/// (omega/2) sum_j sx_j.
Operator build_charging(const ModelParams& params, int max_sites = kDefaultMaxSites);

/// The per-site factor (omega/2) sx of the charging Hamiltonian.
LocalOperator charging_site_factor(const ModelParams& params);

/// [2 H - (E_max + E_min) I] / (E_max - E_min).
NormalizedHamiltonian normalize(const Operator& h0);

/// Z2 label of every basis index: the parity of the number of down spins.
/// H0 conserves prod_j sz_j, so it is block diagonal in these labels.
std::vector<int> parity_sectors(int n_sites);

/// Full eigendecomposition of an H0 built by build_h0, one parity block at a time.
EigenDecomposition diagonalize_h0(const Operator& h0);

/// Normalized Hamiltonian together with its eigendecomposition, from one
/// diagonalization of H0.
struct DiagonalizedHamiltonian {
    NormalizedHamiltonian normalized;
    EigenDecomposition eig;  // of normalized.matrix
};

DiagonalizedHamiltonian normalize_and_diagonalize(const Operator& h0);

/// Standard normal variate, a pure function of (seed, stream, counter).
double counter_gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Copy of `base` with the targeted coupling array redrawn from
/// N(mean, sigma^2), one independent draw per bond.
ModelParams sample_realization(const ModelParams& base, const DisorderSpec& spec, std::size_t index);

}  // namespace qbattery
