#pragma once

#include "adsim/hamiltonian.hpp"

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

// Gauge-fixed instantaneous eigensystem along a tau-grid: target tracking,
// gap profile, projectors, the reduced resolvent, and the eigenstate
// derivative formulas with their norm bounds.

namespace adsim {

/// Instantaneous eigensystem at one tau. The reduced resolvent is stored
/// with the factor i, G_r = i [H - E]_r^{-1}, so that G_r (H - E) = i P_perp
/// holds exactly; pass with_i = false to audit the printed convention
/// without the factor.
struct SpectralFrame {
    double tau = 0.0;
    Eigen::VectorXd E;        // ordering follows continuity from tau = 0
    Eigen::MatrixXcd vectors; // orthonormal columns
    int target = 0;
    Eigen::MatrixXcd P;
    Eigen::MatrixXcd Pperp;
    Eigen::MatrixXcd Gr;

    double target_energy() const { return E(target); }
    Eigen::VectorXcd target_vector() const { return vectors.col(target); }
    /// Distance from the target eigenvalue to the rest of the spectrum.
    double gap() const;
};

/// Full eigendecomposition with target selection. Without a hint the target
/// is the ground state; with a hint (previous frame's target vector) the
/// eigenvector of maximal overlap is tracked, and an overlap below 1/sqrt(2)
/// is a tracking error.
SpectralFrame decompose(const Eigen::MatrixXcd& H,
                        const std::optional<Eigen::VectorXcd>& target_hint = std::nullopt,
                        bool with_i = true);

/// Frames of family(tau) on the grid with continuity-tracked target.
std::vector<SpectralFrame> frames_on_grid(const HamiltonianFamily& family,
                                          const std::vector<double>& grid,
                                          bool with_i = true);

/// Discrete parallel transport: reorders eigenvector columns by overlap with
/// the previous frame and fixes phases so consecutive overlaps are real
/// positive, enforcing <Phi | dPhi/dtau> = 0 on the grid. Idempotent.
void fix_gauge(std::vector<SpectralFrame>& frames);

struct GapProfile {
    std::vector<double> grid;
    std::vector<double> delta0;    // instantaneous dimensionless gap
    std::vector<int> emin_index;   // index attaining the gap
    double Delta = 0.0;            // min over grid
    double A = 0.0;                // 1 / Delta
    double d = 0.0;                // J * Delta
    double argmin_tau = 0.0;

    std::string to_csv() const;
    nlohmann::json summary_json() const;
};

GapProfile gap_profile(const std::vector<SpectralFrame>& frames, double J = 1.0);

/// dPhi/dtau = i G_r dH/dtau |Phi> in the parallel-transport gauge.
Eigen::VectorXcd target_derivative(const SpectralFrame& frame, const Eigen::MatrixXcd& Hdot);

struct EnergyDerivatives {
    double Edot = 0.0;
    double Eddot = 0.0;
    Eigen::VectorXcd pperp_phi_ddot;
};

/// Hellmann-Feynman Edot, the second-derivative formula for Eddot, and the
/// projected second derivative of the target vector.
EnergyDerivatives hellmann_feynman(const SpectralFrame& frame, const Eigen::MatrixXcd& Hdot,
                                   const Eigen::MatrixXcd& Hddot,
                                   const Eigen::VectorXcd& Phidot);

struct InequalityCheck {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    double ratio() const { return bound > 0.0 ? measured / bound : 0.0; }
};

/// Evaluates the proved norm inequalities (||Phidot|| <= A beta,
/// ||Pdot|| <= 2 A beta, ||Pperp Phiddot|| <= 6 A^2 beta^2 + 2 A eta,
/// ||Grdot Pperp|| <= 4 A^2 beta) over gauge-fixed frames; derivative
/// operators use 4th-order grid differences on interior points.
std::vector<InequalityCheck> corollary_bounds(const std::vector<SpectralFrame>& frames,
                                              const HamiltonianFamily& family);

} // namespace adsim
