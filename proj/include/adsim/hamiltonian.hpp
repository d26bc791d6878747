#pragma once

#include "adsim/pauli.hpp"
#include "adsim/schedule.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

namespace adsim {

/// Coefficient function xi_sigma(tau) = offset + scale * x(tau) (or 1 - x(tau)
/// with `complement`), where x is looked up in a ScheduleBank by id. Keeping
/// the reference symbolic makes specs serializable.
struct CoefficientRef {
    std::string schedule_id;
    double scale = 1.0;
    double offset = 0.0;
    bool complement = false;

    double eval(const ScheduleBank& bank, double tau, int k) const;
};

struct HamiltonianTerm {
    PauliString pauli;
    CoefficientRef coeff;
};

/// Time-dependent n-qubit Hamiltonian H(tau) = sum_sigma xi_sigma(tau) sigma,
/// with Pauli support limited to weight <= L and energy unit J.
struct LocalHamiltonianSpec {
    int n = 1;
    int L = 1;
    double J = 1.0;
    std::vector<HamiltonianTerm> terms;

    void validate() const;
    int dim() const { return 1 << n; }

    nlohmann::json to_json() const;
    static LocalHamiltonianSpec from_json(const nlohmann::json& j);
};

/// k-th tau-derivative of the assembled dense matrix (k = 0 is H itself).
Eigen::MatrixXcd assemble(const LocalHamiltonianSpec& spec, const ScheduleBank& bank,
                          double tau, int k = 0);

/// Grover search Hamiltonian (1-x)(I - |phi><phi|) + x(I - |m><m|) at
/// interpolation value x, with |phi> the uniform superposition.
Eigen::MatrixXcd grover_hamiltonian(int n, std::uint64_t marked, double x);

/// Largest absolute eigenvalue (operator norm of a Hermitian matrix).
double operator_norm(const Eigen::MatrixXcd& m);

struct NormProfile {
    double beta = 0.0; // sup ||dH/dtau||
    double eta = 0.0;  // sup ||d^2H/dtau^2||
    double xi = 0.0;   // J * beta, energy units
    std::vector<double> grid;
};

/// Grid-sampled norm profile; a lower estimate of the true suprema.
NormProfile norm_profile(const LocalHamiltonianSpec& spec, const ScheduleBank& bank,
                         const std::vector<double>& grid);

/// A time-dependent Hamiltonian family handed to the spectral, propagator,
/// and expansion modules: op(tau, k) returns the k-th derivative matrix.
struct HamiltonianFamily {
    std::function<Eigen::MatrixXcd(double, int)> op;
    int dim = 0;
    double J = 1.0;

    Eigen::MatrixXcd operator()(double tau, int k = 0) const { return op(tau, k); }
};

HamiltonianFamily make_family(const LocalHamiltonianSpec& spec, const ScheduleBank& bank);

/// Grover family driven by a schedule x(tau).
HamiltonianFamily make_grover_family(int n, std::uint64_t marked, const Schedule& x,
                                     double J = 1.0);

/// Builtin specs used by the experiment harness.
LocalHamiltonianSpec x_to_z_spec(int n, const std::string& schedule_id);
LocalHamiltonianSpec random_2local_spec(int n, const std::string& schedule_id,
                                        std::uint64_t seed);

} // namespace adsim
