#include "adsim/opensys.hpp"

#include "adsim/gridmath.hpp"
#include "adsim/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <random>
#include <stdexcept>

namespace adsim {

namespace {
const Complex kI{0.0, 1.0};
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::VectorXcd out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Eigen::MatrixXcd random_hermitian(int dim, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("random_hermitian: dim must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::MatrixXcd m = 0.5 * (g + g.adjoint());
    double norm = operator_norm(m);
    if (norm > 0.0) m /= norm;
    return m;
}

void JointSpec::validate() const {
    system.validate();
    if (bath.rows() != bath.cols()) throw std::invalid_argument("JointSpec: bath not square");
    if (bath.rows() < 1) throw std::invalid_argument("JointSpec: empty bath");
    if (dim() > 1024) throw std::invalid_argument("JointSpec: joint dimension exceeds 1024");
    double bs = bath.cwiseAbs().maxCoeff();
    if ((bath - bath.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + bs))
        throw std::invalid_argument("JointSpec: bath not Hermitian");
    if (coupling.rows() != dim() || coupling.cols() != dim())
        throw std::invalid_argument("JointSpec: coupling dimension mismatch");
    double cs = coupling.cwiseAbs().maxCoeff();
    if ((coupling - coupling.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + cs))
        throw std::invalid_argument("JointSpec: coupling not Hermitian");
}

HamiltonianFamily make_joint_family(const JointSpec& spec, const ScheduleBank& bank) {
    spec.validate();
    HamiltonianFamily sys = make_family(spec.system, bank);
    int dB = spec.d_B();
    Eigen::MatrixXcd idB = Eigen::MatrixXcd::Identity(dB, dB);
    Eigen::MatrixXcd idS = Eigen::MatrixXcd::Identity(spec.d_S(), spec.d_S());
    Eigen::MatrixXcd constant = spec.coupling + kron(idS, spec.bath);

    HamiltonianFamily fam;
    fam.dim = spec.dim();
    fam.J = spec.system.J;
    fam.op = [sys, idB, constant](double tau, int k) -> Eigen::MatrixXcd {
        Eigen::MatrixXcd lifted = kron(sys(tau, k), idB);
        return k == 0 ? Eigen::MatrixXcd(lifted + constant) : lifted;
    };
    return fam;
}

void DensityState::validate(double tol) const {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("DensityState: not square");
    double scale = rho.cwiseAbs().maxCoeff();
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol * (1.0 + scale))
        throw std::invalid_argument("DensityState: not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
        throw std::invalid_argument("DensityState: trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw std::invalid_argument("DensityState: negative eigenvalue");
}

bool DensityState::is_pure(double tol) const {
    return std::abs((rho * rho).trace().real() - 1.0) < tol;
}

Eigen::VectorXcd DensityState::pure_vector() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    Eigen::Index top;
    es.eigenvalues().maxCoeff(&top);
    return es.eigenvectors().col(top);
}

DensityState DensityState::from_vector(const Eigen::VectorXcd& v) {
    double n = v.norm();
    if (n <= 0.0) throw std::invalid_argument("DensityState: zero vector");
    Eigen::VectorXcd u = v / n;
    return DensityState{u * u.adjoint()};
}

DensityState joint_evolve(const HamiltonianFamily& family, double JT,
                          const DensityState& initial, const EvolveOptions& opts,
                          bool force_conjugation) {
    initial.validate(1e-9);
    if (!force_conjugation && initial.is_pure()) {
        Eigen::VectorXcd v0 = initial.pure_vector();
        EvolveOptions o = opts;
        o.output_points = 2; // endpoint only
        EvolutionResult r = evolve(family, JT, o, &v0);
        return DensityState::from_vector(r.final_state());
    }
    Eigen::MatrixXcd u = evolve_unitary(family, JT, opts);
    return DensityState{u * initial.rho * u.adjoint()};
}

DensityState partial_trace_bath(const DensityState& rho, int d_S, int d_B) {
    if (Eigen::Index(d_S) * d_B != rho.rho.rows())
        throw std::invalid_argument("partial_trace_bath: dims do not factorize");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d_S, d_S);
    for (int s = 0; s < d_S; ++s)
        for (int t = 0; t < d_S; ++t)
            for (int b = 0; b < d_B; ++b) out(s, t) += rho.rho(s * d_B + b, t * d_B + b);
    return DensityState{std::move(out)};
}

double trace_distance(const DensityState& r1, const DensityState& r2) {
    if (r1.rho.rows() != r2.rho.rows())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r1.rho - r2.rho, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Theorem2Report theorem2_report(const JointSpec& spec, const ScheduleBank& bank,
                               const BoundInputs& inputs, std::uint64_t seed,
                               const std::optional<DensityState>& bath_initial,
                               const EvolveOptions& opts) {
    spec.validate();
    HamiltonianFamily joint = make_joint_family(spec, bank);
    HamiltonianFamily sys = make_family(spec.system, bank);

    // bath initial state: ground of h_B unless supplied
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> bath_es(spec.bath);
    DensityState rho_B0 = bath_initial
                              ? *bath_initial
                              : DensityState::from_vector(bath_es.eigenvectors().col(0));
    rho_B0.validate(1e-9);

    std::vector<double> grid = uniform_grid(257);
    std::vector<SpectralFrame> sys_frames = frames_on_grid(sys, grid);
    fix_gauge(sys_frames);
    Eigen::VectorXcd phiS0 = sys_frames.front().target_vector();
    Eigen::VectorXcd phiS1 = sys_frames.back().target_vector();

    // joint frames track the eigenstate connected to Phi_S(0) (x) bath ground
    Eigen::VectorXcd hint = kron(phiS0, Eigen::VectorXcd(bath_es.eigenvectors().col(0)));
    double joint_delta = std::numeric_limits<double>::infinity();
    double beta = 0.0;
    std::optional<Eigen::VectorXcd> h = hint;
    for (double tau : grid) {
        SpectralFrame f = decompose(joint(tau, 0), h);
        joint_delta = std::min(joint_delta, f.gap());
        beta = std::max(beta, operator_norm(joint(tau, 1)));
        h = f.target_vector();
    }

    Theorem2Report rep;
    rep.seed = seed;
    rep.joint_gap = spec.system.J * joint_delta;
    rep.system_gap = gap_profile(sys_frames, spec.system.J).d;

    BoundInputs in = inputs;
    in.J = spec.system.J;
    in.xi = in.J * beta;
    in.d = rep.joint_gap;
    rep.T = theorem1_time(in);
    double JT = in.J * rep.T;
    double euclid = std::min(theorem1_error_bound(in), 2.0);
    rep.bound = trace_distance_from_delta(euclid);

    DensityState rho0{kron(Eigen::MatrixXcd(phiS0 * phiS0.adjoint()), rho_B0.rho)};
    DensityState rhoT = joint_evolve(joint, JT, rho0, opts);

    // decoupled adiabatic reference at final time
    Eigen::VectorXcd bath_phases =
        (-kI * JT * bath_es.eigenvalues().cast<Complex>().array()).exp().matrix();
    Eigen::MatrixXcd uB = bath_es.eigenvectors() * bath_phases.asDiagonal() *
                          bath_es.eigenvectors().adjoint();
    DensityState rho_ad{kron(Eigen::MatrixXcd(phiS1 * phiS1.adjoint()),
                             Eigen::MatrixXcd(uB * rho_B0.rho * uB.adjoint()))};

    rep.delta_SB = trace_distance(rhoT, rho_ad);
    DensityState rhoS = partial_trace_bath(rhoT, spec.d_S(), spec.d_B());
    rep.delta_S = trace_distance(rhoS, DensityState{phiS1 * phiS1.adjoint()});
    return rep;
}

nlohmann::json Theorem2Report::to_json() const {
    return {{"delta_S", delta_S},     {"delta_SB", delta_SB}, {"bound", bound},
            {"joint_gap", joint_gap}, {"system_gap", system_gap}, {"T", T},
            {"seed", seed}};
}

} // namespace adsim
