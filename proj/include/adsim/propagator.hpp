#pragma once

#include "adsim/hamiltonian.hpp"
#include "adsim/spectral.hpp"

#include <Eigen/Dense>
#include <vector>

// High-accuracy unitary integration of i eps dpsi/dtau = H(tau) psi with a
// 4th-order commutator-free exponential scheme and step-doubling adaptivity.

namespace adsim {

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double max_defect = 0.0; // max | ||psi|| - 1 | over output samples
};

struct EvolutionResult {
    std::vector<double> grid;
    std::vector<Eigen::VectorXcd> psi;
    double JT = 0.0;      // dimensionless total time J*T
    double T = 0.0;       // physical time, units 1/J
    double epsilon = 0.0; // 1 / (J T)
    std::vector<double> dynamical_phase; // (1/eps) int_0^tau E, filled by accumulate_phase
    StepStats step_stats;

    const Eigen::VectorXcd& final_state() const { return psi.back(); }
};

struct EvolveOptions {
    double tol = 1e-10;          // local error per unit tau
    std::size_t output_points = 513;
    std::size_t max_steps = 4'000'000;
    double h_init = 1e-3;
    bool fixed_step = false;     // disable adaptivity (order studies)
    std::size_t fixed_steps = 0; // per output segment when fixed_step
};

/// Integrates from tau = 0 to 1 with initial state = target eigenvector of
/// H(0) (ground state unless `initial` is supplied).
EvolutionResult evolve(const HamiltonianFamily& family, double JT,
                       const EvolveOptions& opts = {},
                       const Eigen::VectorXcd* initial = nullptr);

/// Evolves a full propagator matrix U(tau) (columns evolve independently);
/// used for density-matrix conjugation in the open-system module.
Eigen::MatrixXcd evolve_unitary(const HamiltonianFamily& family, double JT,
                                const EvolveOptions& opts = {});

/// (1/eps) int_0^1 E(tau) dtau from frames sharing the result's grid; also
/// fills result.dynamical_phase per sample.
double accumulate_phase(EvolutionResult& result, const std::vector<SpectralFrame>& frames);

} // namespace adsim
