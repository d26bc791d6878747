#pragma once

#include "adsim/propagator.hpp"
#include "adsim/superadiabatic.hpp"

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

// Adiabatic error metrics and every closed-form time/error bound: the main
// theorem, its two corollaries, the JRS comparison, the phase-transition
// scaling corollary, and the Grover gap.

namespace adsim {

struct ErrorReport {
    double delta = 0.0;       // || psi(1) - theta0 e^{-i chi} Phi(1) ||
    double delta1 = 0.0;      // || psi(1) - Psi_N(1) ||
    double delta2 = 0.0;      // || e^{i chi} Psi_N(1) - Phi(1) ||
    double fidelity = 0.0;    // |<psi(1) | Phi(1)>|
    double fs_distance = 0.0; // arccos(fidelity)
    double chi = 0.0;         // dynamical phase (1/eps) int_0^1 E

    nlohmann::json to_json() const;
};

/// Final-time metrics. chi is Simpson-integrated from the frames; theta0 is
/// the phase of <Phi(0)|psi(0)>, which makes delta invariant under a global
/// phase on the initial state. delta1/delta2 are zero when no series is
/// given. The triangle inequality delta <= delta1 + delta2 is exact when the
/// evolution starts from the series' own initial state.
ErrorReport error_report(const EvolutionResult& result,
                         const std::vector<SpectralFrame>& frames,
                         const ExpansionSeries* series = nullptr);

struct BoundInputs {
    int N = 1;          // vanishing-derivative count (schedule must have Nb >= N)
    double q = 2.0;     // time dilation, > 1
    double gamma = kDefaultGamma;
    double xi = 1.0;    // sup ||dh/dtau||, energy units
    double d = 1.0;     // minimum dimensional gap, energy units
    double J = 1.0;     // energy unit
    int n = 1;          // system size (QPT corollary)
    double z = 1.0;     // dynamical critical exponent
    int m = 1;          // JRS target multiplicity
    double delta_u = 0.1; // target error (fixed-error corollary)

    void validate() const;
    /// Same physics with J scaled out (xi/J, d/J, J=1); T is J-invariant.
    BoundInputs dimensionless() const;
};

/// T = (q / gamma) N xi^2 / d^3, physical time in units 1/energy.
double theorem1_time(const BoundInputs& in);
/// delta <= (N+1)^{gamma+1} q^{-N}.
double theorem1_error_bound(const BoundInputs& in);

struct ExponentialEnvelope {
    double c = 0.0;        // gamma d^3 / (e xi^2)
    double envelope = 0.0; // (cT+1)^{gamma+1} e^{-cT}
};

/// Error envelope as a function of total time at the optimal dilation q = e.
ExponentialEnvelope corollary_exponential(double T, const BoundInputs& in);

/// T achieving target error delta_u:
/// T = delta_u^{-1/N} (1/gamma) N (N+1)^{(gamma+1)/N} xi^2 / d^3.
double corollary_fixed_error(const BoundInputs& in);
/// Dilation implied by corollary_fixed_error; theorem1_error_bound at this q
/// reproduces delta_u exactly.
double corollary_fixed_error_q(const BoundInputs& in);

struct JrsProfiles {
    std::vector<double> grid;
    std::vector<double> hdot_norm;  // ||dh/dtau||, energy units
    std::vector<double> hddot_norm; // ||d^2h/dtau^2||, energy units
    std::vector<double> d0;         // instantaneous dimensional gap
};

struct JrsTimes {
    double T_integral = 0.0; // q int (m ||hddot|| / d0^2 + 7 m sqrt(m) ||hdot||^2 / d0^3)
    double T_sup = 0.0;      // 7 q xi^2 / d^3 (m = 1 form)
    double delta_bound = 0.0; // q^{-2}
};

JrsTimes jrs_time(const JrsProfiles& p, double q, int m);

/// T = (q/gamma) N (sup |xidot|)^2 / J^3 * n^{4-3z}; xi_dot_sup in energy units.
double qpt_time(double q, double gamma, int N, double xi_dot_sup, double J, int n, double z);

/// Closed-form search-Hamiltonian gap J sqrt(2^{-n} + 4 (1 - 2^{-n}) (x - 1/2)^2).
double grover_gap(int n, double x, double J = 1.0);

/// Pure-state conversion between Euclidean distance delta and trace distance.
double trace_distance_from_delta(double delta);

} // namespace adsim
