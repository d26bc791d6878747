#include "adsim/propagator.hpp"

#include "adsim/gridmath.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adsim {

namespace {

const Complex kI{0.0, 1.0};

// Gauss-Legendre nodes on [0,1] and the 4th-order commutator-free weights.
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kNode1 = 0.5 - kSqrt3 / 6.0;
constexpr double kNode2 = 0.5 + kSqrt3 / 6.0;
constexpr double kA1 = (3.0 - 2.0 * kSqrt3) / 12.0;
constexpr double kA2 = (3.0 + 2.0 * kSqrt3) / 12.0;

// exp(-i K) psi for Hermitian K, exactly unitary via eigendecomposition.
void apply_exp(const Eigen::MatrixXcd& K, Eigen::MatrixXcd& psi) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(K);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("propagator: eigensolver failed during exponential");
    Eigen::VectorXcd phases =
        (-kI * es.eigenvalues().cast<Complex>().array()).exp().matrix();
    psi = es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * psi));
}

// One commutator-free 4th-order step tau -> tau + h on the column block psi.
void cf4_step(const HamiltonianFamily& family, double JT, double tau, double h,
              Eigen::MatrixXcd& psi) {
    Eigen::MatrixXcd h1 = family(tau + kNode1 * h, 0);
    Eigen::MatrixXcd h2 = family(tau + kNode2 * h, 0);
    // i eps dpsi/dtau = H psi  =>  dpsi/dtau = -i JT H psi
    Eigen::MatrixXcd k1 = (h * JT) * (kA1 * h1 + kA2 * h2);
    Eigen::MatrixXcd k2 = (h * JT) * (kA2 * h1 + kA1 * h2);
    apply_exp(k2, psi);
    apply_exp(k1, psi);
}

struct Integrator {
    const HamiltonianFamily& family;
    double JT;
    const EvolveOptions& opts;
    StepStats stats;
    double h; // current trial step

    Integrator(const HamiltonianFamily& f, double jt, const EvolveOptions& o)
        : family(f), JT(jt), opts(o), h(o.h_init) {}

    // advance psi from tau_a to tau_b
    void segment(double tau_a, double tau_b, Eigen::MatrixXcd& psi) {
        if (opts.fixed_step) {
            if (opts.fixed_steps == 0)
                throw std::invalid_argument("evolve: fixed_step requires fixed_steps > 0");
            double hs = (tau_b - tau_a) / double(opts.fixed_steps);
            for (std::size_t k = 0; k < opts.fixed_steps; ++k) {
                cf4_step(family, JT, tau_a + double(k) * hs, hs, psi);
                ++stats.accepted;
            }
            return;
        }
        double tau = tau_a;
        while (tau < tau_b - 1e-15) {
            double hs = std::min(h, tau_b - tau);
            if (stats.accepted + stats.rejected > opts.max_steps)
                throw std::runtime_error("evolve: step limit exceeded");
            if (hs < 1e-14)
                throw std::runtime_error("evolve: step size underflow (tolerance unreachable)");
            Eigen::MatrixXcd coarse = psi;
            cf4_step(family, JT, tau, hs, coarse);
            Eigen::MatrixXcd fine = psi;
            cf4_step(family, JT, tau, 0.5 * hs, fine);
            cf4_step(family, JT, tau + 0.5 * hs, 0.5 * hs, fine);
            double err = (fine - coarse).norm() / 15.0;
            // the step-doubling estimate cannot resolve errors below the
            // roundoff of the paired eigendecompositions, so the per-step
            // budget is floored there instead of shrinking h forever
            double budget = std::max(opts.tol * hs, 1e-14 * psi.norm());
            if (err <= budget) {
                psi = std::move(fine);
                tau += hs;
                ++stats.accepted;
            } else {
                ++stats.rejected;
            }
            double factor = err > 0.0 ? 0.9 * std::pow(budget / err, 0.2) : 4.0;
            h = hs * std::clamp(factor, 0.2, 4.0);
        }
    }
};

} // namespace

EvolutionResult evolve(const HamiltonianFamily& family, double JT, const EvolveOptions& opts,
                       const Eigen::VectorXcd* initial) {
    if (JT <= 0.0) throw std::invalid_argument("evolve: JT must be positive");
    if (opts.output_points < 2) throw std::invalid_argument("evolve: need >= 2 output points");

    EvolutionResult r;
    r.JT = JT;
    r.T = JT / family.J;
    r.epsilon = 1.0 / JT;
    r.grid = uniform_grid(opts.output_points);

    Eigen::MatrixXcd psi;
    if (initial) {
        if (initial->size() != family.dim)
            throw std::invalid_argument("evolve: initial state dimension mismatch");
        psi = *initial;
    } else {
        psi = decompose(family(0.0, 0)).target_vector();
    }

    Integrator integ(family, JT, opts);
    r.psi.reserve(r.grid.size());
    r.psi.push_back(psi.col(0));
    for (std::size_t k = 1; k < r.grid.size(); ++k) {
        integ.segment(r.grid[k - 1], r.grid[k], psi);
        r.psi.push_back(psi.col(0));
        integ.stats.max_defect =
            std::max(integ.stats.max_defect, std::abs(psi.col(0).norm() - 1.0));
    }
    r.step_stats = integ.stats;
    return r;
}

Eigen::MatrixXcd evolve_unitary(const HamiltonianFamily& family, double JT,
                                const EvolveOptions& opts) {
    if (JT <= 0.0) throw std::invalid_argument("evolve_unitary: JT must be positive");
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(family.dim, family.dim);
    Integrator integ(family, JT, opts);
    integ.segment(0.0, 1.0, u);
    return u;
}

double accumulate_phase(EvolutionResult& result, const std::vector<SpectralFrame>& frames) {
    if (frames.size() != result.grid.size())
        throw std::invalid_argument("accumulate_phase: frame grid mismatch");
    std::vector<double> energies(frames.size());
    for (std::size_t k = 0; k < frames.size(); ++k) energies[k] = frames[k].target_energy();
    double h = result.grid[1] - result.grid[0];
    auto running = cumulative_integral(energies, h);
    result.dynamical_phase.resize(running.size());
    for (std::size_t k = 0; k < running.size(); ++k)
        result.dynamical_phase[k] = running[k] / result.epsilon;
    return result.dynamical_phase.back();
}

} // namespace adsim
