#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "qbattery/linalg.hpp"
#include "qbattery/spin_model.hpp"
#include "qbattery/states.hpp"

namespace qbattery {

struct OptimizerConfig {
    std::size_t grid_points = 2000;
    double refine_tolerance = 1e-10;

    void validate() const;
};

struct PowerResult {
    double t_star = 0.0;
    double work_at_t_star = 0.0;
    double p_max = 0.0;
    bool degenerate_ground = false;
    std::size_t grid_points = 0;
};

/// One period of the charging evolution, 2 pi / omega.
double charging_period(const ModelParams& params);

/// exp(-i (omega/2) sx t), the single-site factor of U(t).
LocalOperator charging_site_unitary(const ModelParams& params, double t);

/// U(t) rho U(t)^dagger (or U(t)|psi>) with U(t) applied one site at a time.
QuantumState evolve(const QuantumState& state0, const ModelParams& params, double t);

/// Tr(H rho(t)) - Tr(H rho(0)).
double work(const QuantumState& state_t, const QuantumState& state0, const NormalizedHamiltonian& h_norm);

/// W(t) for a fixed initial state as a trigonometric polynomial in omega t.
///
/// In the eigenbasis of sum_j sx_j the charging unitary is diagonal and every
/// Bohr frequency is an integer multiple of omega, so
///   W(t) = sum_{d=1..N} 2 Re[c_d (exp(i d omega t) - 1)].
/// Building the profile costs one basis change; each evaluation is O(N).
class WorkProfile {
public:
    WorkProfile(const QuantumState& state0, const NormalizedHamiltonian& h_norm, double omega);

    double operator()(double t) const;
    double period() const;
    double omega() const { return omega_; }

    /// Sum of |c_d| over d >= 1; zero means W vanishes identically.
    double amplitude() const;

    const std::vector<Complex>& coefficients() const { return coefficients_; }

private:
    double omega_;
    std::vector<Complex> coefficients_;  // index d = 0..N; c_0 unused
};

/// max_t W(t)/t over (0, 2 pi / omega]: uniform grid, then golden-section refinement.
PowerResult power_max(const QuantumState& state0, const NormalizedHamiltonian& h_norm,
                      const ModelParams& params, const OptimizerConfig& opt = {});

/// Same optimizer over an arbitrary profile.
PowerResult maximize_power(const WorkProfile& profile, const OptimizerConfig& opt = {});

struct GroundPrep {};
struct ThermalPrep {
    double beta = 0.0;
};
using StatePrep = std::variant<GroundPrep, ThermalPrep>;

QuantumState prepare_state(const NormalizedHamiltonian& h_norm, const StatePrep& prep);

/// Build H0, normalize, prepare the initial state and run power_max.
PowerResult power_for(const ModelParams& params, const StatePrep& prep, const OptimizerConfig& opt = {},
                      int max_sites = kDefaultMaxSites);

}  // namespace qbattery
