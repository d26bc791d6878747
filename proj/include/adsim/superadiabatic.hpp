#pragma once

#include "adsim/gridmath.hpp"
#include "adsim/hamiltonian.hpp"
#include "adsim/spectral.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

// Order-N asymptotic expansion of the evolved state around the tracked
// eigenstate: the psi_j_perp recursion through the reduced resolvent, the
// f_j running integrals with final-time constants, the assembled state
// Psi_N, and the error functional A_N.

namespace adsim {

struct ExpandOptions {
    std::size_t grid_points = 2049;
    double noise_tol = 1e-6; // relative differentiation-noise budget per order
    bool with_i = true;      // resolvent convention (see SpectralFrame)
};

struct ExpansionSeries {
    std::vector<double> grid;
    int N = 0;
    std::vector<SpectralFrame> frames;              // gauge-fixed
    std::vector<Eigen::VectorXcd> phi_dot;          // dPhi/dtau per sample
    std::vector<std::vector<Eigen::VectorXcd>> psi_perp; // [j][k], j = 0..N+1
    std::vector<std::vector<Complex>> f;            // [j][k], j = 0..N
    std::vector<Complex> c;                         // integration constants, c[0] = 1
    std::vector<double> noise;                      // per-order derivative noise
    std::vector<double> energy_integral;            // int_0^tau E, per sample

    double h() const { return grid[1] - grid[0]; }
    std::string to_csv() const; // columns tau, j, psi_perp_norm, f_real, f_imag
};

/// Runs the recursion psi_j_perp = G_r (f_{j-1} |Phidot> + Pperp |psidot_{j-1}_perp>)
/// with psi_0_perp = 0 and f_0 = 1, through order N+1 for psi and N for f.
/// f_j(tau) = int_0^tau <Phidot | psi_j_perp> + c_j with c_j making f_j(1) = 0.
/// Throws when the differentiation-noise estimate exceeds opts.noise_tol
/// (order unreachable at this grid resolution).
ExpansionSeries expand(const HamiltonianFamily& family, int N,
                       const ExpandOptions& opts = {});

struct SuperadiabaticState {
    double tau = 0.0;
    double epsilon = 0.0;
    int N = 0;
    Eigen::VectorXcd vector;
    double dynamical_phase = 0.0; // (1/eps) int_0^tau E
};

/// Psi_N(tau_k, eps) = e^{-i phase} (sum_{j<=N} eps^j (f_j Phi + psi_j_perp)
///                                   + eps^{N+1} psi_{N+1}_perp).
SuperadiabaticState assemble_state(const ExpansionSeries& series, std::size_t k,
                                   double epsilon);

/// All grid samples at once (the approximate trajectory).
std::vector<Eigen::VectorXcd> assemble_trajectory(const ExpansionSeries& series,
                                                  double epsilon);

struct ABound {
    double numeric = 0.0;  // int_0^1 ||dpsi_{N+1}_perp/dtau||
    double analytic = 0.0; // (N+2)^{gamma+1} ((N+1) A^3 beta^2 / gamma)^{N+1}
    double A = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

/// Both sides of the truncation-error constant; numeric <= analytic when the
/// inputs satisfy the standing assumptions.
ABound a_bound(const ExpansionSeries& series, const HamiltonianFamily& family,
               double gamma);

/// Exact product C(N) = prod_{j=1}^{N-1} (1 + gamma (j-1)^{j-1} / j^j), with
/// 0^0 = 1; C(1) = 1 (empty product) and C(2) = 1 + gamma.
double c_product(int N, double gamma);
/// Cap (N+1)^{gamma+1} >= C(N).
double c_cap(int N, double gamma);
/// g(N) = ((N-1)/gamma)^{N-1}, with g(1) = 1 by convention.
double g_factor(int N, double gamma);

struct EndpointNorm {
    int j = 0;
    double at_zero = 0.0;
    double at_one = 0.0;
};

struct BoundaryVanishingReport {
    std::vector<EndpointNorm> norms; // j = 1..min(Nb, N+1)
    bool pass = false;               // all <= tol
};

/// Checks ||psi_j_perp|| at both endpoints for j <= Nb (a schedule with Nb
/// flattened derivatives forces these to vanish).
BoundaryVanishingReport boundary_vanishing(const ExpansionSeries& series, int Nb,
                                           double tol = 1e-6);

} // namespace adsim
