#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adsim/metrics.hpp"

#include <cmath>

using namespace adsim;

namespace {

constexpr double kE = 2.718281828459045;

HamiltonianFamily xz_family(int n, const std::string& schedule_id) {
    ScheduleBank bank;
    return make_family(x_to_z_spec(n, schedule_id), bank);
}

} // namespace

TEST_CASE("error metrics on a converged run") {
    HamiltonianFamily fam = xz_family(1, "smooth3");
    EvolveOptions opts;
    opts.tol = 1e-12;
    EvolutionResult r = evolve(fam, 400.0, opts);
    auto frames = frames_on_grid(fam, r.grid);
    fix_gauge(frames);
    ErrorReport rep = error_report(r, frames);
    CHECK(rep.delta < 1e-2);
    CHECK(rep.fidelity > 1.0 - 1e-6);
    CHECK(rep.fidelity <= 1.0 + 1e-12);
    CHECK(rep.fs_distance ==
          doctest::Approx(std::acos(std::min(rep.fidelity, 1.0))));

    // recomputation oracle from the raw vectors
    Eigen::VectorXcd phi1 = frames.back().target_vector();
    Complex ov0 = frames.front().target_vector().dot(r.psi.front());
    Complex theta0 = ov0 / std::abs(ov0);
    double oracle = (r.final_state() -
                     theta0 * std::exp(Complex(0.0, -rep.chi)) * phi1)
                        .norm();
    CHECK(rep.delta == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("delta is invariant under a global phase on the initial state") {
    HamiltonianFamily fam = xz_family(1, "smooth2");
    Eigen::VectorXcd psi0 = decompose(fam(0.0, 0)).target_vector();
    Eigen::VectorXcd rotated = std::exp(Complex(0.0, 1.234)) * psi0;
    EvolveOptions opts;
    opts.tol = 1e-12;
    EvolutionResult a = evolve(fam, 60.0, opts, &psi0);
    EvolutionResult b = evolve(fam, 60.0, opts, &rotated);
    auto frames = frames_on_grid(fam, a.grid);
    fix_gauge(frames);
    double da = error_report(a, frames).delta;
    double db = error_report(b, frames).delta;
    CHECK(std::abs(da - db) < 1e-10);
}

TEST_CASE("triangle inequality and series closure") {
    HamiltonianFamily fam = xz_family(1, "smooth3");
    int N = 2; // schedule has Nb = 3 = N + 1 flattened derivatives
    ExpandOptions eo;
    eo.grid_points = 2049;
    ExpansionSeries series = expand(fam, N, eo);

    double JT = 40.0;
    Eigen::VectorXcd init = assemble_state(series, 0, 1.0 / JT).vector;
    EvolveOptions opts;
    opts.tol = 1e-12;
    opts.output_points = 513;
    EvolutionResult r = evolve(fam, JT, opts, &init);
    auto frames = frames_on_grid(fam, r.grid);
    fix_gauge(frames);
    ErrorReport rep = error_report(r, frames, &series);

    // exact triangle split in the series' own phase convention:
    // psi(1) - e^{-i chi} Phi(1) = (psi(1) - Psi_N(1)) + (Psi_N(1) - e^{-i chi} Phi(1))
    SuperadiabaticState fin = assemble_state(series, series.grid.size() - 1, 1.0 / JT);
    double total = (r.final_state() - std::exp(Complex(0.0, -fin.dynamical_phase)) *
                                          series.frames.back().target_vector())
                       .norm();
    CHECK(total <= rep.delta1 + rep.delta2 + 1e-12);
    CHECK(rep.delta2 <= 1e-6);
    // the measured series error is controlled by the quadrature functional
    ABound ab = a_bound(series, fam, kDefaultGamma);
    double eps = 1.0 / JT;
    CHECK(rep.delta1 <= ab.numeric * std::pow(eps, N + 1) * (1.0 + 1e-6) + 1e-12);
}

TEST_CASE("main time formula") {
    BoundInputs in;
    in.N = 1;
    in.q = 2.0;
    in.gamma = 1.0 / 14.0;
    in.xi = 1.0;
    in.d = 1.0;
    CHECK(theorem1_time(in) == doctest::Approx(28.0).epsilon(1e-14));
    in.N = 0;
    CHECK(theorem1_time(in) == doctest::Approx(0.0));
    in.N = 3;
    double t1 = theorem1_time(in);
    in.q = 4.0;
    CHECK(theorem1_time(in) == doctest::Approx(2.0 * t1).epsilon(1e-14));
    in.q = 0.5;
    CHECK_THROWS_AS(theorem1_time(in), std::invalid_argument);
}

TEST_CASE("main error bound") {
    BoundInputs in;
    in.gamma = 1.0 / 14.0;
    in.N = 0;
    in.q = 2.0;
    CHECK(theorem1_error_bound(in) == doctest::Approx(1.0));
    in.N = 10;
    in.q = kE;
    CHECK(theorem1_error_bound(in) ==
          doctest::Approx(std::pow(11.0, 15.0 / 14.0) * std::exp(-10.0)).epsilon(1e-12));
    in.N = 1;
    in.q = 2.0;
    double b2 = theorem1_error_bound(in);
    in.q = 4.0;
    CHECK(theorem1_error_bound(in) < b2);
}

TEST_CASE("exponential envelope") {
    BoundInputs in;
    in.gamma = 1.0 / 14.0;
    in.xi = 1.0;
    in.d = 1.0;
    ExponentialEnvelope env = corollary_exponential(0.0, in);
    CHECK(env.c == doctest::Approx(1.0 / (14.0 * kE)).epsilon(1e-14));
    CHECK(env.envelope == doctest::Approx(1.0));
    // decreasing once cT exceeds gamma + 1
    double t0 = (in.gamma + 1.0) / env.c;
    double prev = corollary_exponential(t0, in).envelope;
    for (double t = t0 * 1.1; t < t0 * 3.0; t += t0 * 0.3) {
        double cur = corollary_exponential(t, in).envelope;
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("fixed-error time inverts the error bound exactly") {
    BoundInputs in;
    in.gamma = 1.0 / 14.0;
    in.xi = 1.3;
    in.d = 0.8;
    in.N = 4;
    in.delta_u = 0.02;
    double q = corollary_fixed_error_q(in);
    BoundInputs back = in;
    back.q = q;
    CHECK(theorem1_error_bound(back) == doctest::Approx(in.delta_u).epsilon(1e-12));
    // T from the dilation route matches the closed form
    CHECK(theorem1_time(back) == doctest::Approx(corollary_fixed_error(in)).epsilon(1e-12));

    // insensitivity to the target error at large N
    in.N = 20;
    in.delta_u = 0.5;
    double t_half = corollary_fixed_error(in);
    in.delta_u = 0.999;
    double t_one = corollary_fixed_error(in);
    CHECK(t_half / t_one <= std::pow(2.0, 1.0 / 20.0) * 1.001);
    in.delta_u = 1.5;
    CHECK_THROWS_AS(corollary_fixed_error(in), std::invalid_argument);
}

TEST_CASE("comparison formula: integral and sup forms") {
    JrsProfiles p;
    std::size_t m = 101;
    for (std::size_t i = 0; i < m; ++i) {
        p.grid.push_back(double(i) / double(m - 1));
        p.hdot_norm.push_back(1.5);
        p.hddot_norm.push_back(0.0);
        p.d0.push_back(0.5);
    }
    JrsTimes t = jrs_time(p, 2.0, 1);
    double expect = 2.0 * 7.0 * 1.5 * 1.5 / (0.5 * 0.5 * 0.5);
    CHECK(t.T_integral == doctest::Approx(expect).epsilon(1e-10));
    CHECK(t.T_sup == doctest::Approx(expect).epsilon(1e-12));
    CHECK(t.delta_bound == doctest::Approx(0.25));

    // multiplicity scaling: m and m sqrt(m)
    for (std::size_t i = 0; i < m; ++i) p.hddot_norm[i] = 0.7;
    JrsTimes t1 = jrs_time(p, 2.0, 1);
    JrsTimes t4 = jrs_time(p, 2.0, 4);
    double curvature1 = 2.0 * 0.7 / 0.25;
    double velocity1 = 2.0 * 7.0 * 2.25 / 0.125;
    CHECK(t1.T_integral == doctest::Approx(curvature1 + velocity1).epsilon(1e-10));
    CHECK(t4.T_integral == doctest::Approx(4.0 * curvature1 + 8.0 * velocity1).epsilon(1e-10));
}

TEST_CASE("phase-transition scaling exponents") {
    double base = qpt_time(2.0, 1.0 / 14.0, 2, 1.0, 1.0, 2, 1.0);
    CHECK(qpt_time(2.0, 1.0 / 14.0, 2, 1.0, 1.0, 4, 1.0) == doctest::Approx(2.0 * base));
    CHECK(qpt_time(2.0, 1.0 / 14.0, 2, 1.0, 1.0, 4, 4.0 / 3.0) ==
          doctest::Approx(qpt_time(2.0, 1.0 / 14.0, 2, 1.0, 1.0, 2, 4.0 / 3.0)));
    double z_half_2 = qpt_time(2.0, 1.0 / 14.0, 2, 1.0, 1.0, 2, 0.5);
    double z_half_4 = qpt_time(2.0, 1.0 / 14.0, 2, 1.0, 1.0, 4, 0.5);
    CHECK(z_half_4 / z_half_2 == doctest::Approx(std::pow(2.0, 2.5)).epsilon(1e-12));
}

TEST_CASE("search gap closed form") {
    CHECK(grover_gap(2, 0.5, 1.0) == doctest::Approx(0.5));
    CHECK(grover_gap(2, 0.0, 1.0) == doctest::Approx(1.0));
    for (int n = 1; n <= 6; ++n) {
        CHECK(grover_gap(n, 0.5, 1.0) == doctest::Approx(std::pow(2.0, -n / 2.0)));
        for (int i = 0; i <= 10; ++i) {
            double x = i / 10.0;
            SpectralFrame f = decompose(grover_hamiltonian(n, 0, x));
            CHECK(std::abs(f.gap() - grover_gap(n, x)) < 1e-10);
        }
    }
}

TEST_CASE("metric conversion for pure states") {
    CHECK(trace_distance_from_delta(0.0) == doctest::Approx(0.0));
    // orthogonal pure states: Euclidean sqrt(2), trace distance 1
    CHECK(trace_distance_from_delta(std::sqrt(2.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(trace_distance_from_delta(3.0), std::invalid_argument);
}

TEST_CASE("input normalization removes the energy unit") {
    BoundInputs in;
    in.N = 2;
    in.q = 3.0;
    in.xi = 4.0;
    in.d = 2.0;
    in.J = 2.0;
    BoundInputs dimless = in.dimensionless();
    CHECK(dimless.J == doctest::Approx(1.0));
    CHECK(dimless.xi == doctest::Approx(2.0));
    CHECK(dimless.d == doctest::Approx(1.0));
    // J T is invariant: T scales as 1/J
    CHECK(in.J * theorem1_time(in) ==
          doctest::Approx(dimless.J * theorem1_time(dimless)).epsilon(1e-12));
    CHECK(theorem1_error_bound(in) == doctest::Approx(theorem1_error_bound(dimless)));
}
