#include "adsim/metrics.hpp"

#include "adsim/gridmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace adsim {

namespace {
constexpr double kE = 2.718281828459045;
}

ErrorReport error_report(const EvolutionResult& result,
                         const std::vector<SpectralFrame>& frames,
                         const ExpansionSeries* series) {
    if (frames.size() != result.grid.size())
        throw std::invalid_argument("error_report: frame grid mismatch");
    ErrorReport rep;
    double h = result.grid[1] - result.grid[0];
    std::vector<double> energies(frames.size());
    for (std::size_t k = 0; k < frames.size(); ++k) energies[k] = frames[k].target_energy();
    rep.chi = simpson(energies, h) / result.epsilon;

    const Eigen::VectorXcd& psi1 = result.final_state();
    Eigen::VectorXcd phi1 = frames.back().target_vector();

    Complex ov0 = frames.front().target_vector().dot(result.psi.front());
    Complex theta0 = std::abs(ov0) > 0 ? ov0 / std::abs(ov0) : Complex(1.0, 0.0);
    Complex phase = theta0 * std::exp(Complex(0.0, -rep.chi));
    rep.delta = (psi1 - phase * phi1).norm();

    Complex ovf = phi1.dot(psi1);
    rep.fidelity = std::abs(ovf);
    rep.fs_distance = std::acos(std::clamp(rep.fidelity, 0.0, 1.0));

    if (series) {
        std::size_t last = series->grid.size() - 1;
        SuperadiabaticState fin = assemble_state(*series, last, result.epsilon);
        rep.delta1 = (psi1 - fin.vector).norm();
        Eigen::VectorXcd phi_series = series->frames.back().target_vector();
        rep.delta2 =
            (std::exp(Complex(0.0, fin.dynamical_phase)) * fin.vector - phi_series).norm();
    }
    return rep;
}

nlohmann::json ErrorReport::to_json() const {
    return {{"delta", delta},   {"delta1", delta1},           {"delta2", delta2},
            {"fidelity", fidelity}, {"fs_distance", fs_distance}, {"chi", chi}};
}

void BoundInputs::validate() const {
    if (q <= 1.0) throw std::invalid_argument("BoundInputs: q must exceed 1");
    if (gamma <= 0.0) throw std::invalid_argument("BoundInputs: gamma must be positive");
    if (d <= 0.0) throw std::invalid_argument("BoundInputs: d must be positive");
    if (J <= 0.0) throw std::invalid_argument("BoundInputs: J must be positive");
    if (m < 1) throw std::invalid_argument("BoundInputs: m must be >= 1");
    if (N < 0) throw std::invalid_argument("BoundInputs: N must be >= 0");
}

BoundInputs BoundInputs::dimensionless() const {
    BoundInputs out = *this;
    out.xi = xi / J;
    out.d = d / J;
    out.J = 1.0;
    return out;
}

double theorem1_time(const BoundInputs& in) {
    in.validate();
    return (in.q / in.gamma) * in.N * in.xi * in.xi / (in.d * in.d * in.d);
}

double theorem1_error_bound(const BoundInputs& in) {
    in.validate();
    return std::pow(double(in.N + 1), in.gamma + 1.0) * std::pow(in.q, -double(in.N));
}

ExponentialEnvelope corollary_exponential(double T, const BoundInputs& in) {
    if (T < 0.0) throw std::invalid_argument("corollary_exponential: T must be >= 0");
    ExponentialEnvelope e;
    e.c = in.gamma * in.d * in.d * in.d / (kE * in.xi * in.xi);
    e.envelope = std::pow(e.c * T + 1.0, in.gamma + 1.0) * std::exp(-e.c * T);
    return e;
}

double corollary_fixed_error(const BoundInputs& in) {
    in.validate();
    if (in.delta_u <= 0.0 || in.delta_u >= 1.0)
        throw std::invalid_argument("corollary_fixed_error: need 0 < delta_u < 1");
    if (in.N < 1) throw std::invalid_argument("corollary_fixed_error: need N >= 1");
    double nn = double(in.N);
    return std::pow(in.delta_u, -1.0 / nn) * (1.0 / in.gamma) * nn *
           std::pow(nn + 1.0, (in.gamma + 1.0) / nn) * in.xi * in.xi /
           (in.d * in.d * in.d);
}

double corollary_fixed_error_q(const BoundInputs& in) {
    double nn = double(in.N);
    return std::pow(in.delta_u, -1.0 / nn) * std::pow(nn + 1.0, (in.gamma + 1.0) / nn);
}

JrsTimes jrs_time(const JrsProfiles& p, double q, int m) {
    if (q <= 1.0) throw std::invalid_argument("jrs_time: q must exceed 1");
    if (m < 1) throw std::invalid_argument("jrs_time: m must be >= 1");
    std::size_t k = p.grid.size();
    if (k < 3 || p.hdot_norm.size() != k || p.hddot_norm.size() != k || p.d0.size() != k)
        throw std::invalid_argument("jrs_time: profiles must share a grid of >= 3 points");
    double h = p.grid[1] - p.grid[0];
    double mm = double(m);
    std::vector<double> integrand(k);
    double xi = 0.0, d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        if (p.d0[i] <= 0.0) throw std::invalid_argument("jrs_time: gap must be positive");
        integrand[i] = mm * p.hddot_norm[i] / (p.d0[i] * p.d0[i]) +
                       7.0 * mm * std::sqrt(mm) * p.hdot_norm[i] * p.hdot_norm[i] /
                           (p.d0[i] * p.d0[i] * p.d0[i]);
        xi = std::max(xi, p.hdot_norm[i]);
        d = std::min(d, p.d0[i]);
    }
    JrsTimes t;
    t.T_integral = q * simpson(integrand, h);
    t.T_sup = 7.0 * q * xi * xi / (d * d * d);
    t.delta_bound = 1.0 / (q * q);
    return t;
}

double qpt_time(double q, double gamma, int N, double xi_dot_sup, double J, int n, double z) {
    if (q <= 1.0) throw std::invalid_argument("qpt_time: q must exceed 1");
    if (z <= 0.0) throw std::invalid_argument("qpt_time: z must be positive");
    return (q / gamma) * N * xi_dot_sup * xi_dot_sup / (J * J * J) *
           std::pow(double(n), 4.0 - 3.0 * z);
}

double grover_gap(int n, double x, double J) {
    if (n < 1) throw std::invalid_argument("grover_gap: n must be >= 1");
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("grover_gap: x outside [0,1]");
    double p = std::pow(2.0, -double(n));
    return J * std::sqrt(p + 4.0 * (1.0 - p) * (x - 0.5) * (x - 0.5));
}

double trace_distance_from_delta(double delta) {
    if (delta < 0.0 || delta > 2.0)
        throw std::invalid_argument("trace_distance_from_delta: delta outside [0,2]");
    return delta * std::sqrt(1.0 - delta * delta / 4.0);
}

} // namespace adsim
