#include "adsim/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <memory>
#include <nlohmann/json.hpp>
#include <random>
#include <stdexcept>

namespace adsim {

double CoefficientRef::eval(const ScheduleBank& bank, double tau, int k) const {
    const Schedule& s = bank.get(schedule_id);
    double x = s.eval(tau, k);
    double v = complement ? ((k == 0 ? 1.0 : 0.0) - x) : x;
    return scale * v + (k == 0 ? offset : 0.0);
}

void LocalHamiltonianSpec::validate() const {
    if (n < 1 || n > 10)
        throw std::invalid_argument("LocalHamiltonianSpec: n must be in [1,10] (dense backend)");
    if (L < 0 || L > n) throw std::invalid_argument("LocalHamiltonianSpec: need 0 <= L <= n");
    if (J <= 0.0) throw std::invalid_argument("LocalHamiltonianSpec: J must be positive");
    for (const auto& t : terms) {
        if (t.pauli.qubits() != n)
            throw std::invalid_argument("LocalHamiltonianSpec: term qubit count mismatch");
        if (t.pauli.weight() > L)
            throw std::invalid_argument("LocalHamiltonianSpec: term weight exceeds locality L");
    }
}

Eigen::MatrixXcd assemble(const LocalHamiltonianSpec& spec, const ScheduleBank& bank,
                          double tau, int k) {
    spec.validate();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(spec.dim(), spec.dim());
    for (const auto& t : spec.terms) {
        double c = t.coeff.eval(bank, tau, k);
        if (c != 0.0) h += c * pauli_matrix(t.pauli);
    }
    return h;
}

Eigen::MatrixXcd grover_hamiltonian(int n, std::uint64_t marked, double x) {
    if (n < 1 || n > 10) throw std::invalid_argument("grover_hamiltonian: n must be in [1,10]");
    std::uint64_t dim = 1ull << n;
    if (marked >= dim) throw std::invalid_argument("grover_hamiltonian: marked index out of range");
    if (x < -1e-12 || x > 1.0 + 1e-12)
        throw std::invalid_argument("grover_hamiltonian: x outside [0,1]");
    Eigen::Index d = Eigen::Index(dim);
    Eigen::VectorXcd phi = Eigen::VectorXcd::Constant(d, 1.0 / std::sqrt(double(dim)));
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(d, d);
    h -= (1.0 - x) * (phi * phi.adjoint());
    h(Eigen::Index(marked), Eigen::Index(marked)) -= x;
    return h;
}

double operator_norm(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("operator_norm: eigensolver failed to converge");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

NormProfile norm_profile(const LocalHamiltonianSpec& spec, const ScheduleBank& bank,
                         const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("norm_profile: empty grid");
    NormProfile p;
    p.grid = grid;
    for (double tau : grid) {
        p.beta = std::max(p.beta, operator_norm(assemble(spec, bank, tau, 1)));
        p.eta = std::max(p.eta, operator_norm(assemble(spec, bank, tau, 2)));
    }
    p.xi = spec.J * p.beta;
    return p;
}

HamiltonianFamily make_family(const LocalHamiltonianSpec& spec, const ScheduleBank& bank) {
    spec.validate();
    HamiltonianFamily fam;
    fam.dim = spec.dim();
    fam.J = spec.J;
    // copy the bank entries actually referenced so the family owns its state
    auto bank_copy = std::make_shared<ScheduleBank>(bank);
    fam.op = [spec, bank_copy](double tau, int k) {
        return assemble(spec, *bank_copy, tau, k);
    };
    return fam;
}

HamiltonianFamily make_grover_family(int n, std::uint64_t marked, const Schedule& x, double J) {
    std::uint64_t dim = 1ull << n;
    if (marked >= dim) throw std::invalid_argument("make_grover_family: marked index out of range");
    HamiltonianFamily fam;
    fam.dim = int(dim);
    fam.J = J;
    Eigen::MatrixXcd h0 = grover_hamiltonian(n, marked, 0.0);
    Eigen::MatrixXcd h1 = grover_hamiltonian(n, marked, 1.0);
    fam.op = [h0, h1, x](double tau, int k) -> Eigen::MatrixXcd {
        double c = x.eval(tau, k);
        if (k == 0) return (1.0 - c) * h0 + c * h1;
        return c * (h1 - h0);
    };
    return fam;
}

LocalHamiltonianSpec x_to_z_spec(int n, const std::string& schedule_id) {
    LocalHamiltonianSpec spec;
    spec.n = n;
    spec.L = 1;
    spec.J = 1.0;
    for (int q = 0; q < n; ++q) {
        std::string xw(std::size_t(n), 'I'), zw(std::size_t(n), 'I');
        xw[std::size_t(q)] = 'X';
        zw[std::size_t(q)] = 'Z';
        spec.terms.push_back({PauliString(xw), {schedule_id, 1.0, 0.0, true}});
        spec.terms.push_back({PauliString(zw), {schedule_id, 1.0, 0.0, false}});
    }
    return spec;
}

LocalHamiltonianSpec random_2local_spec(int n, const std::string& schedule_id,
                                        std::uint64_t seed) {
    LocalHamiltonianSpec spec;
    spec.n = n;
    spec.L = 2;
    spec.J = 1.0;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto strings = enumerate_strings(n, 2);
    double norm = 1.0 / std::sqrt(double(strings.size()));
    for (const auto& p : strings) {
        if (p.weight() == 0) continue;
        double c0 = gauss(rng) * norm;
        double c1 = gauss(rng) * norm;
        // (1-x) * c0 + x * c1 on each string
        if (c0 != 0.0) spec.terms.push_back({p, {schedule_id, c0, 0.0, true}});
        if (c1 != 0.0) spec.terms.push_back({p, {schedule_id, c1, 0.0, false}});
    }
    return spec;
}

nlohmann::json LocalHamiltonianSpec::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["L"] = L;
    j["J"] = J;
    j["terms"] = nlohmann::json::array();
    for (const auto& t : terms) {
        nlohmann::json jt;
        jt["pauli"] = t.pauli.letters;
        jt["schedule"] = t.coeff.schedule_id;
        jt["params"] = {{"scale", t.coeff.scale},
                        {"offset", t.coeff.offset},
                        {"complement", t.coeff.complement}};
        j["terms"].push_back(std::move(jt));
    }
    return j;
}

LocalHamiltonianSpec LocalHamiltonianSpec::from_json(const nlohmann::json& j) {
    LocalHamiltonianSpec spec;
    spec.n = j.at("n").get<int>();
    spec.L = j.at("L").get<int>();
    spec.J = j.at("J").get<double>();
    for (const auto& jt : j.at("terms")) {
        HamiltonianTerm t{PauliString(jt.at("pauli").get<std::string>()), {}};
        t.coeff.schedule_id = jt.at("schedule").get<std::string>();
        if (jt.contains("params")) {
            const auto& p = jt["params"];
            t.coeff.scale = p.value("scale", 1.0);
            t.coeff.offset = p.value("offset", 0.0);
            t.coeff.complement = p.value("complement", false);
        }
        spec.terms.push_back(std::move(t));
    }
    spec.validate();
    return spec;
}

} // namespace adsim
