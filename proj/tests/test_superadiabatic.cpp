#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adsim/superadiabatic.hpp"

#include <cmath>

using namespace adsim;

namespace {

HamiltonianFamily xz_family(int n, const std::string& schedule_id) {
    ScheduleBank bank;
    return make_family(x_to_z_spec(n, schedule_id), bank);
}

HamiltonianFamily frozen_family() {
    // H = X + Z, never moving
    LocalHamiltonianSpec spec;
    spec.n = 1;
    spec.L = 1;
    spec.terms.push_back({PauliString("X"), {"constant_one", 1.0, 0.0, false}});
    spec.terms.push_back({PauliString("Z"), {"constant_one", 1.0, 0.0, false}});
    ScheduleBank bank;
    return make_family(spec, bank);
}

} // namespace

TEST_CASE("frozen Hamiltonian: every correction vanishes") {
    ExpandOptions opts;
    opts.grid_points = 513;
    ExpansionSeries s = expand(frozen_family(), 2, opts);
    for (int j = 1; j <= 3; ++j)
        for (const auto& v : s.psi_perp[std::size_t(j)]) CHECK(v.norm() < 1e-12);
    for (int j = 1; j <= 2; ++j)
        for (const auto& fv : s.f[std::size_t(j)]) CHECK(std::abs(fv) < 1e-12);
    for (const auto& fv : s.f[0]) CHECK(fv == Complex(1.0, 0.0));
}

TEST_CASE("first correction equals the resolvent applied to the frame velocity") {
    ExpandOptions opts;
    opts.grid_points = 513;
    HamiltonianFamily fam = xz_family(1, "smooth4");
    ExpansionSeries s = expand(fam, 1, opts);
    double A = 1.0 / gap_profile(s.frames).Delta;
    double beta = 0.0;
    for (double tau : s.grid) beta = std::max(beta, operator_norm(fam(tau, 1)));
    for (std::size_t k = 0; k < s.grid.size(); k += 16) {
        Eigen::VectorXcd direct = s.frames[k].Gr * s.phi_dot[k];
        CHECK((s.psi_perp[1][k] - direct).norm() < 1e-12);
        CHECK(s.psi_perp[1][k].norm() <= A * A * beta + 1e-9);
    }
}

TEST_CASE("orthogonality to the tracked state at every order and sample") {
    ExpandOptions opts;
    opts.grid_points = 2049;
    ExpansionSeries s = expand(xz_family(1, "smooth4"), 2, opts);
    for (std::size_t j = 0; j <= 3; ++j)
        for (std::size_t k = 0; k < s.grid.size(); k += 8) {
            Complex ov = s.frames[k].target_vector().dot(s.psi_perp[j][k]);
            CHECK(std::abs(ov) < 1e-8);
        }
}

TEST_CASE("scalar integrals: f_0 = 1 and f_j(1) = 0") {
    ExpandOptions opts;
    opts.grid_points = 1025;
    ExpansionSeries s = expand(xz_family(1, "smooth3"), 2, opts);
    CHECK(s.f[0].front() == Complex(1.0, 0.0));
    for (int j = 1; j <= 2; ++j) {
        CHECK(std::abs(s.f[std::size_t(j)].back()) < 1e-8);
        CHECK(std::abs(s.f[std::size_t(j)].front() - s.c[std::size_t(j)]) < 1e-12);
    }
}

TEST_CASE("recursion-form equivalence with the resolvent-derivative variant") {
    ExpandOptions opts;
    opts.grid_points = 1025;
    HamiltonianFamily fam = xz_family(1, "smooth3");
    ExpansionSeries s = expand(fam, 2, opts);
    double h = s.h();
    std::vector<Eigen::MatrixXcd> gr;
    for (const auto& f : s.frames) gr.push_back(f.Gr);
    auto grdot = grid_derivative(gr, h);
    auto psidot1 = grid_derivative(s.psi_perp[1], h);
    for (std::size_t k = 8; k + 8 < s.grid.size(); k += 32) {
        // psi_2 = Gr (f_1 Phidot + Pperp psidot_1) = Gr psidot_1 - f_1 Grdot Phi
        Eigen::VectorXcd alt = s.frames[k].Gr * psidot1[k] -
                               s.f[1][k] * (grdot[k] * s.frames[k].target_vector());
        CHECK((s.psi_perp[2][k] - alt).norm() < 1e-6 * (1.0 + alt.norm()));
    }
}

TEST_CASE("velocity bound on the first correction") {
    ExpandOptions opts;
    opts.grid_points = 2049;
    HamiltonianFamily fam = xz_family(1, "smooth2");
    ExpansionSeries s = expand(fam, 1, opts);
    double A = 1.0 / gap_profile(s.frames).Delta;
    double beta = 0.0;
    for (double tau : s.grid) beta = std::max(beta, operator_norm(fam(tau, 1)));
    auto psidot1 = grid_derivative(s.psi_perp[1], s.h());
    for (std::size_t k = 2; k + 2 < s.grid.size(); ++k)
        CHECK(psidot1[k].norm() <= 14.0 * A * A * A * beta * beta + 1e-6);
}

TEST_CASE("induction bound on correction norms") {
    ExpandOptions opts;
    opts.grid_points = 4097; // the order-4 derivative needs the finer grid
    HamiltonianFamily fam = xz_family(1, "smooth3");
    ExpansionSeries s = expand(fam, 3, opts);
    double gamma = kDefaultGamma;
    double A = 1.0 / gap_profile(s.frames).Delta;
    double beta = 0.0;
    for (double tau : s.grid) beta = std::max(beta, operator_norm(fam(tau, 1)));
    for (int N = 1; N <= 3; ++N) {
        double bound = c_product(N, gamma) * g_factor(N, gamma) *
                       std::pow(A, 3 * N - 1) * std::pow(beta, 2 * N - 1);
        for (const auto& v : s.psi_perp[std::size_t(N)]) CHECK(v.norm() <= bound + 1e-9);
    }
}

TEST_CASE("constant factors of the induction bound") {
    double gamma = kDefaultGamma;
    CHECK(c_product(1, gamma) == doctest::Approx(1.0));
    CHECK(c_product(2, gamma) == doctest::Approx(1.0 + gamma));
    CHECK(c_product(3, gamma) ==
          doctest::Approx((1.0 + gamma) * (1.0 + gamma / 4.0)));
    // cap dominates the exact product
    for (int N = 1; N <= 6; ++N) CHECK(c_product(N, gamma) <= c_cap(N, gamma));
    CHECK(g_factor(1, gamma) == doctest::Approx(1.0));
    CHECK(g_factor(2, gamma) == doctest::Approx(1.0 / gamma));
    CHECK(g_factor(3, gamma) == doctest::Approx(std::pow(2.0 / gamma, 2)));
}

TEST_CASE("assembled state: truncation, normalization, and small-epsilon limit") {
    ExpandOptions opts;
    opts.grid_points = 1025;
    ExpansionSeries s = expand(xz_family(1, "smooth3"), 2, opts);
    std::size_t mid = s.grid.size() / 2;

    // norm deviation shrinks linearly with epsilon (first-order series defect)
    double e0 = 1e-2;
    double dev1 = std::abs(assemble_state(s, mid, e0).vector.norm() - 1.0);
    double dev2 = std::abs(assemble_state(s, mid, e0 / 2).vector.norm() - 1.0);
    double dev4 = std::abs(assemble_state(s, mid, e0 / 4).vector.norm() - 1.0);
    CHECK(dev2 < dev1);
    CHECK(dev4 < dev2);

    // epsilon -> 0 recovers the tracked state up to the dynamical phase
    SuperadiabaticState tiny = assemble_state(s, mid, 1e-9);
    Eigen::VectorXcd expect = std::exp(Complex(0.0, -tiny.dynamical_phase)) *
                              s.frames[mid].target_vector();
    CHECK((tiny.vector - expect).norm() < 1e-6);
}

TEST_CASE("initial and final collapse under sufficient flattening") {
    // Nb = N + 1 = 3
    ExpandOptions opts;
    opts.grid_points = 1025;
    ExpansionSeries s = expand(xz_family(1, "smooth3"), 2, opts);
    double eps = 1.0 / 40.0;
    SuperadiabaticState init = assemble_state(s, 0, eps);
    CHECK(std::abs(init.vector.norm() - 1.0) < 1e-6);
    Complex theta = s.frames.front().target_vector().dot(init.vector);
    CHECK(std::abs(std::abs(theta) - 1.0) < 1e-6);
    CHECK((init.vector - theta * s.frames.front().target_vector()).norm() < 1e-6);

    SuperadiabaticState fin = assemble_state(s, s.grid.size() - 1, eps);
    Eigen::VectorXcd unwound = std::exp(Complex(0.0, fin.dynamical_phase)) * fin.vector;
    CHECK((unwound - s.frames.back().target_vector()).norm() < 1e-6);
}

TEST_CASE("endpoint vanishing needs the flattened schedule") {
    ExpandOptions opts;
    opts.grid_points = 1025;
    ExpansionSeries flat = expand(xz_family(1, "smooth3"), 2, opts);
    BoundaryVanishingReport r = boundary_vanishing(flat, 3);
    CHECK(r.pass);
    for (const auto& e : r.norms) {
        CHECK(e.at_zero <= 1e-6);
        CHECK(e.at_one <= 1e-6);
    }

    ExpansionSeries lin = expand(xz_family(1, "linear"), 1, opts);
    CHECK(lin.psi_perp[1].front().norm() > 1e-3);
}

TEST_CASE("error functional: quadrature stays below the closed form") {
    ExpandOptions opts;
    opts.grid_points = 2049;
    HamiltonianFamily fam = xz_family(1, "smooth2");
    ExpansionSeries s = expand(fam, 1, opts);
    ABound b = a_bound(s, fam, kDefaultGamma);
    CHECK(b.numeric > 0.0);
    CHECK(b.numeric <= b.analytic);

    // arithmetic pin of the closed form at N=1, A=2, beta=1
    ABound probe;
    probe.A = 2.0;
    probe.beta = 1.0;
    double gamma = 1.0 / 14.0;
    double expect = std::pow(3.0, gamma + 1.0) * std::pow(2.0 * 8.0 * 1.0 / gamma, 2);
    double direct = std::pow(3.0, gamma + 1.0) * 224.0 * 224.0;
    CHECK(expect == doctest::Approx(direct).epsilon(1e-12));

    ExpansionSeries frozen = expand(frozen_family(), 1, opts);
    CHECK(a_bound(frozen, frozen_family(), kDefaultGamma).numeric ==
          doctest::Approx(0.0));
}

TEST_CASE("input validation") {
    ExpandOptions opts;
    opts.grid_points = 256;
    CHECK_THROWS_AS(expand(xz_family(1, "smooth2"), 1, opts), std::invalid_argument);
    opts.grid_points = 513;
    CHECK_THROWS_AS(expand(xz_family(1, "smooth2"), 9, opts), std::invalid_argument);
    ExpansionSeries s = expand(xz_family(1, "smooth2"), 1, opts);
    CHECK_THROWS_AS(assemble_state(s, s.grid.size(), 0.1), std::invalid_argument);
    CHECK_THROWS_AS(assemble_state(s, 0, -1.0), std::invalid_argument);
}

TEST_CASE("csv export layout") {
    ExpandOptions opts;
    opts.grid_points = 513;
    ExpansionSeries s = expand(xz_family(1, "smooth2"), 1, opts);
    std::string csv = s.to_csv();
    CHECK(csv.rfind("tau,j,psi_perp_norm,f_real,f_imag", 0) == 0);
}
