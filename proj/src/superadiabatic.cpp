#include "adsim/superadiabatic.hpp"

#include "adsim/gridmath.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace adsim {

namespace {

double series_scale(const std::vector<Eigen::VectorXcd>& v) {
    double s = 0.0;
    for (const auto& x : v) s = std::max(s, x.norm());
    return s;
}

} // namespace

ExpansionSeries expand(const HamiltonianFamily& family, int N, const ExpandOptions& opts) {
    if (N < 0 || N > 6) throw std::invalid_argument("expand: order must be in [0,6]");
    if (opts.grid_points < 512) throw std::invalid_argument("expand: need >= 512 grid points");

    ExpansionSeries s;
    s.N = N;
    s.grid = uniform_grid(opts.grid_points);
    s.frames = frames_on_grid(family, s.grid, opts.with_i);
    fix_gauge(s.frames);
    double h = s.h();
    std::size_t m = s.grid.size();
    Eigen::Index dim = family.dim;

    std::vector<double> energies(m);
    s.phi_dot.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        energies[k] = s.frames[k].target_energy();
        s.phi_dot[k] = target_derivative(s.frames[k], family(s.grid[k], 1));
    }
    s.energy_integral = cumulative_integral(energies, h);

    s.psi_perp.assign(std::size_t(N) + 2, {});
    s.f.assign(std::size_t(N) + 1, {});
    s.c.assign(std::size_t(N) + 1, Complex(0.0, 0.0));
    s.noise.assign(std::size_t(N) + 2, 0.0);

    s.psi_perp[0].assign(m, Eigen::VectorXcd::Zero(dim));
    s.f[0].assign(m, Complex(1.0, 0.0));
    s.c[0] = Complex(1.0, 0.0);

    for (int j = 1; j <= N + 1; ++j) {
        const auto& prev = s.psi_perp[std::size_t(j) - 1];
        std::vector<Eigen::VectorXcd> prev_dot;
        if (j == 1) {
            prev_dot.assign(m, Eigen::VectorXcd::Zero(dim));
        } else {
            double scale = series_scale(prev);
            double noise = derivative_noise_estimate(prev, h);
            s.noise[std::size_t(j)] = noise;
            if (scale > 0.0 && noise > opts.noise_tol)
                throw std::runtime_error(
                    "expand: order " + std::to_string(j) +
                    " unreachable at this grid resolution (differentiation noise " +
                    std::to_string(noise) + ")");
            prev_dot = grid_derivative(prev, h);
        }
        auto& cur = s.psi_perp[std::size_t(j)];
        cur.resize(m);
        const auto& fprev = s.f[std::size_t(j) - 1];
        for (std::size_t k = 0; k < m; ++k) {
            const SpectralFrame& fr = s.frames[k];
            cur[k] = fr.Gr * (fprev[k] * s.phi_dot[k] + fr.Pperp * prev_dot[k]);
        }
        if (j <= N) {
            std::vector<Complex> integrand(m);
            for (std::size_t k = 0; k < m; ++k) integrand[k] = s.phi_dot[k].dot(cur[k]);
            auto running = cumulative_integral(integrand, h);
            Complex cj = -running.back(); // enforce f_j(1) = 0
            s.c[std::size_t(j)] = cj;
            auto& fj = s.f[std::size_t(j)];
            fj.resize(m);
            for (std::size_t k = 0; k < m; ++k) fj[k] = running[k] + cj;
        }
    }
    return s;
}

SuperadiabaticState assemble_state(const ExpansionSeries& series, std::size_t k,
                                   double epsilon) {
    if (k >= series.grid.size()) throw std::invalid_argument("assemble_state: index off grid");
    if (epsilon <= 0.0) throw std::invalid_argument("assemble_state: epsilon must be positive");
    SuperadiabaticState st;
    st.tau = series.grid[k];
    st.epsilon = epsilon;
    st.N = series.N;
    st.dynamical_phase = series.energy_integral[k] / epsilon;

    Eigen::VectorXcd phi = series.frames[k].target_vector();
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(phi.size());
    double ej = 1.0;
    for (int j = 0; j <= series.N; ++j) {
        sum += ej * (series.f[std::size_t(j)][k] * phi + series.psi_perp[std::size_t(j)][k]);
        ej *= epsilon;
    }
    sum += ej * series.psi_perp[std::size_t(series.N) + 1][k];
    st.vector = std::exp(Complex(0.0, -st.dynamical_phase)) * sum;
    return st;
}

std::vector<Eigen::VectorXcd> assemble_trajectory(const ExpansionSeries& series,
                                                  double epsilon) {
    std::vector<Eigen::VectorXcd> out(series.grid.size());
    for (std::size_t k = 0; k < series.grid.size(); ++k)
        out[k] = assemble_state(series, k, epsilon).vector;
    return out;
}

ABound a_bound(const ExpansionSeries& series, const HamiltonianFamily& family, double gamma) {
    if (gamma <= 0.0) throw std::invalid_argument("a_bound: gamma must be positive");
    ABound b;
    b.gamma = gamma;
    b.A = 1.0 / gap_profile(series.frames).Delta;
    for (double tau : series.grid)
        b.beta = std::max(b.beta, operator_norm(family(tau, 1)));

    const auto& top = series.psi_perp[std::size_t(series.N) + 1];
    double h = series.h();
    if (series_scale(top) > 0.0) {
        auto top_dot = grid_derivative(top, h);
        std::vector<double> norms(top_dot.size());
        for (std::size_t k = 0; k < top_dot.size(); ++k) norms[k] = top_dot[k].norm();
        b.numeric = simpson(norms, h);
    }
    int N = series.N;
    b.analytic = std::pow(double(N + 2), gamma + 1.0) *
                 std::pow((N + 1) * b.A * b.A * b.A * b.beta * b.beta / gamma, N + 1);
    return b;
}

double c_product(int N, double gamma) {
    if (N < 1) throw std::invalid_argument("c_product: N >= 1");
    double p = 1.0;
    for (int j = 1; j <= N - 1; ++j) {
        double num = (j == 1) ? 1.0 : std::pow(double(j - 1), j - 1); // 0^0 = 1
        p *= 1.0 + gamma * num / std::pow(double(j), j);
    }
    return p;
}

double c_cap(int N, double gamma) {
    if (N < 1) throw std::invalid_argument("c_cap: N >= 1");
    return std::pow(double(N + 1), gamma + 1.0);
}

double g_factor(int N, double gamma) {
    if (N < 1) throw std::invalid_argument("g_factor: N >= 1");
    if (N == 1) return 1.0;
    return std::pow(double(N - 1) / gamma, N - 1);
}

BoundaryVanishingReport boundary_vanishing(const ExpansionSeries& series, int Nb, double tol) {
    BoundaryVanishingReport r;
    r.pass = true;
    int jmax = std::min(Nb, series.N + 1);
    for (int j = 1; j <= jmax; ++j) {
        EndpointNorm e;
        e.j = j;
        e.at_zero = series.psi_perp[std::size_t(j)].front().norm();
        e.at_one = series.psi_perp[std::size_t(j)].back().norm();
        if (e.at_zero > tol || e.at_one > tol) r.pass = false;
        r.norms.push_back(e);
    }
    return r;
}

std::string ExpansionSeries::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "tau,j,psi_perp_norm,f_real,f_imag\n";
    for (std::size_t j = 0; j < psi_perp.size(); ++j) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            Complex fv = j < f.size() ? f[j][k] : Complex(0.0, 0.0);
            os << grid[k] << "," << j << "," << psi_perp[j][k].norm() << "," << fv.real()
               << "," << fv.imag() << "\n";
        }
    }
    return os.str();
}

} // namespace adsim
