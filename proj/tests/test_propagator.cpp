#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adsim/gridmath.hpp"
#include "adsim/propagator.hpp"

#include <cmath>

using namespace adsim;

namespace {

HamiltonianFamily xz_family(int n, const std::string& schedule_id) {
    ScheduleBank bank;
    return make_family(x_to_z_spec(n, schedule_id), bank);
}

HamiltonianFamily frozen_family() {
    LocalHamiltonianSpec spec;
    spec.n = 1;
    spec.L = 1;
    spec.terms.push_back({PauliString("Z"), {"constant_one", 1.0, 0.0, false}});
    ScheduleBank bank;
    return make_family(spec, bank);
}

// reverse-time counterpart: phi(tau) = psi(1 - tau) solves the equation with
// -H(1 - tau)
HamiltonianFamily reversed(const HamiltonianFamily& fam) {
    HamiltonianFamily r = fam;
    auto op = fam.op;
    r.op = [op](double tau, int k) -> Eigen::MatrixXcd {
        double sign = (k % 2 == 0) ? -1.0 : 1.0;
        return sign * op(1.0 - tau, k);
    };
    return r;
}

// classic fixed-step RK4 on dpsi/dtau = -i JT H(tau) psi
Eigen::VectorXcd rk4_oracle(const HamiltonianFamily& fam, double JT,
                            const Eigen::VectorXcd& psi0, std::size_t steps) {
    Eigen::VectorXcd psi = psi0;
    double h = 1.0 / double(steps);
    Complex factor(0.0, -JT);
    for (std::size_t n = 0; n < steps; ++n) {
        double t = n * h;
        Eigen::VectorXcd k1 = factor * (fam(t, 0) * psi);
        Eigen::VectorXcd k2 = factor * (fam(t + h / 2, 0) * (psi + (h / 2) * k1));
        Eigen::VectorXcd k3 = factor * (fam(t + h / 2, 0) * (psi + (h / 2) * k2));
        Eigen::VectorXcd k4 = factor * (fam(t + h, 0) * (psi + h * k3));
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
}

} // namespace

TEST_CASE("stationary state picks up only the dynamical phase") {
    HamiltonianFamily fam = frozen_family();
    double JT = 17.0;
    EvolutionResult r = evolve(fam, JT);
    CHECK(r.epsilon == doctest::Approx(1.0 / JT));
    CHECK(r.JT == doctest::Approx(JT));
    // ground state of Z is |1>, energy -1; psi(1) = e^{+i JT} |1>
    Eigen::VectorXcd expect(2);
    expect << 0.0, std::exp(Complex(0.0, JT));
    Complex align = expect.dot(r.final_state());
    CHECK(std::abs(std::abs(align) - 1.0) < 1e-10);
    CHECK((r.final_state() - align / std::abs(align) * expect).norm() < 1e-9);
}

TEST_CASE("unitarity defect stays within budget") {
    EvolutionResult r = evolve(xz_family(2, "smooth2"), 80.0);
    CHECK(r.step_stats.max_defect <= 1e-10);
    for (const auto& psi : r.psi) CHECK(std::abs(psi.norm() - 1.0) <= 1e-10);
    CHECK(r.step_stats.accepted > 0);
}

TEST_CASE("agreement with a dense fixed-step reference") {
    HamiltonianFamily fam = xz_family(1, "linear");
    double JT = 50.0;
    Eigen::VectorXcd psi0 = decompose(fam(0.0, 0)).target_vector();
    Eigen::VectorXcd oracle = rk4_oracle(fam, JT, psi0, 1000000);
    EvolveOptions opts;
    opts.tol = 1e-12;
    EvolutionResult r = evolve(fam, JT, opts, &psi0);
    CHECK((r.final_state() - oracle).norm() < 1e-7);
}

TEST_CASE("fixed-step convergence order is four") {
    HamiltonianFamily fam = xz_family(1, "smooth1");
    double JT = 30.0;
    Eigen::VectorXcd psi0 = decompose(fam(0.0, 0)).target_vector();

    EvolveOptions fine;
    fine.tol = 1e-13;
    Eigen::VectorXcd reference = evolve(fam, JT, fine, &psi0).final_state();

    std::vector<double> logh, logerr;
    for (std::size_t steps : {40, 80, 160, 320, 640}) {
        EvolveOptions opts;
        opts.fixed_step = true;
        opts.fixed_steps = steps;
        opts.output_points = 2;
        EvolutionResult r = evolve(fam, JT, opts, &psi0);
        double err = (r.final_state() - reference).norm();
        REQUIRE(err > 0.0);
        logh.push_back(std::log(1.0 / double(steps)));
        logerr.push_back(std::log(err));
    }
    LinearFit fit = least_squares(logh, logerr);
    CHECK(fit.slope == doctest::Approx(4.0).epsilon(0.075)); // 4 +- 0.3
}

TEST_CASE("time reversibility") {
    HamiltonianFamily fam = xz_family(1, "smooth2");
    double JT = 500.0;
    EvolveOptions opts;
    opts.tol = 1e-11;
    EvolutionResult fwd = evolve(fam, JT, opts);
    Eigen::VectorXcd end = fwd.final_state();
    EvolutionResult bwd = evolve(reversed(fam), JT, opts, &end);
    CHECK((bwd.final_state() - fwd.psi.front()).norm() < 1e-8);
}

TEST_CASE("tightening the tolerance improves the final state monotonically") {
    Schedule x = Schedule::smooth_poly(2);
    HamiltonianFamily fam = make_grover_family(2, 0, x);
    double JT = 200.0;
    EvolveOptions fine;
    fine.tol = 1e-13;
    Eigen::VectorXcd reference = evolve(fam, JT, fine).final_state();
    double prev = 1e9;
    for (double tol : {1e-6, 1e-8, 1e-10}) {
        EvolveOptions opts;
        opts.tol = tol;
        double err = (evolve(fam, JT, opts).final_state() - reference).norm();
        CHECK(err <= prev * 1.01);
        prev = err;
    }
}

TEST_CASE("dynamical phase accumulation") {
    // constant energy -1: phase is -JT
    HamiltonianFamily fam = frozen_family();
    double JT = 10.0;
    EvolutionResult r = evolve(fam, JT);
    auto frames = frames_on_grid(fam, r.grid);
    double total = accumulate_phase(r, frames);
    CHECK(total == doctest::Approx(-10.0).epsilon(1e-10));
    CHECK(r.dynamical_phase.front() == doctest::Approx(0.0));
    CHECK(r.dynamical_phase.size() == r.grid.size());

    // quadrature oracle at 10x resolution on a moving instance
    HamiltonianFamily xz = xz_family(1, "linear");
    EvolveOptions opts;
    opts.output_points = 513;
    EvolutionResult rx = evolve(xz, 25.0, opts);
    auto fx = frames_on_grid(xz, rx.grid);
    double phase = accumulate_phase(rx, fx);
    auto fine_grid = uniform_grid(5121);
    auto fine_frames = frames_on_grid(xz, fine_grid);
    std::vector<double> E;
    for (const auto& f : fine_frames) E.push_back(f.target_energy());
    double oracle = simpson(E, fine_grid[1] - fine_grid[0]) * 25.0;
    CHECK(phase == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("input validation and failure modes") {
    HamiltonianFamily fam = xz_family(1, "linear");
    CHECK_THROWS_AS(evolve(fam, -1.0), std::invalid_argument);
    Eigen::VectorXcd wrong = Eigen::VectorXcd::Ones(3);
    CHECK_THROWS_AS(evolve(fam, 10.0, {}, &wrong), std::invalid_argument);

    EvolveOptions opts;
    opts.fixed_step = true; // fixed_steps left at zero
    CHECK_THROWS_AS(evolve(fam, 10.0, opts), std::invalid_argument);

    EvolveOptions capped;
    capped.max_steps = 3;
    capped.tol = 1e-13;
    CHECK_THROWS_AS(evolve(fam, 5000.0, capped), std::runtime_error);
}

TEST_CASE("full propagator matches single-vector evolution") {
    HamiltonianFamily fam = xz_family(1, "smooth2");
    double JT = 60.0;
    EvolveOptions opts;
    opts.tol = 1e-11;
    Eigen::MatrixXcd u = evolve_unitary(fam, JT, opts);
    CHECK((u * u.adjoint() - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);
    Eigen::VectorXcd psi0 = decompose(fam(0.0, 0)).target_vector();
    Eigen::VectorXcd direct = evolve(fam, JT, opts, &psi0).final_state();
    CHECK((u * psi0 - direct).norm() < 1e-8);
}
