#include "adsim/spectral.hpp"

#include "adsim/gridmath.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace adsim {

namespace {

constexpr double kDegenerateGap = 1e-12;
const Complex kI{0.0, 1.0};

void build_projectors(SpectralFrame& f, bool with_i) {
    Eigen::Index dim = f.vectors.rows();
    Eigen::VectorXcd phi = f.vectors.col(f.target);
    f.P = phi * phi.adjoint();
    f.Pperp = Eigen::MatrixXcd::Identity(dim, dim) - f.P;
    f.Gr = Eigen::MatrixXcd::Zero(dim, dim);
    double et = f.E(f.target);
    for (Eigen::Index j = 0; j < f.E.size(); ++j) {
        if (j == f.target) continue;
        double gap = f.E(j) - et;
        if (std::abs(gap) < kDegenerateGap)
            throw std::runtime_error("decompose: degenerate target (zero gap)");
        f.Gr += (1.0 / gap) * (f.vectors.col(j) * f.vectors.col(j).adjoint());
    }
    if (with_i) f.Gr *= kI;
}

} // namespace

double SpectralFrame::gap() const {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < E.size(); ++j)
        if (j != target) best = std::min(best, std::abs(E(j) - E(target)));
    return best;
}

SpectralFrame decompose(const Eigen::MatrixXcd& H,
                        const std::optional<Eigen::VectorXcd>& target_hint, bool with_i) {
    double scale = H.cwiseAbs().maxCoeff();
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + scale))
        throw std::invalid_argument("decompose: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw std::runtime_error("decompose: eigensolver failed");
    SpectralFrame f;
    f.E = es.eigenvalues();
    f.vectors = es.eigenvectors();
    if (target_hint) {
        Eigen::VectorXd overlaps = (target_hint->adjoint() * f.vectors).cwiseAbs().transpose();
        Eigen::Index best;
        double val = overlaps.maxCoeff(&best);
        if (val < 1.0 / std::sqrt(2.0))
            throw std::runtime_error("decompose: target tracking ambiguous (max overlap " +
                                     std::to_string(val) + ")");
        f.target = int(best);
    } else {
        f.target = 0;
    }
    build_projectors(f, with_i);
    return f;
}

std::vector<SpectralFrame> frames_on_grid(const HamiltonianFamily& family,
                                          const std::vector<double>& grid, bool with_i) {
    std::vector<SpectralFrame> frames;
    frames.reserve(grid.size());
    std::optional<Eigen::VectorXcd> hint;
    for (double tau : grid) {
        SpectralFrame f = decompose(family(tau, 0), hint, with_i);
        f.tau = tau;
        hint = f.target_vector();
        frames.push_back(std::move(f));
    }
    return frames;
}

void fix_gauge(std::vector<SpectralFrame>& frames) {
    if (frames.empty()) return;
    for (std::size_t k = 1; k < frames.size(); ++k) {
        const SpectralFrame& prev = frames[k - 1];
        SpectralFrame& cur = frames[k];
        Eigen::Index m = cur.vectors.cols();
        Eigen::MatrixXcd overlap = prev.vectors.adjoint() * cur.vectors;
        // greedy column assignment by descending |overlap|
        std::vector<int> perm(std::size_t(m), -1);
        std::vector<bool> used_row(std::size_t(m), false), used_col(std::size_t(m), false);
        for (Eigen::Index pick = 0; pick < m; ++pick) {
            double best = -1.0;
            Eigen::Index br = 0, bc = 0;
            for (Eigen::Index r = 0; r < m; ++r) {
                if (used_row[std::size_t(r)]) continue;
                for (Eigen::Index c = 0; c < m; ++c) {
                    if (used_col[std::size_t(c)]) continue;
                    double v = std::abs(overlap(r, c));
                    if (v > best) {
                        best = v;
                        br = r;
                        bc = c;
                    }
                }
            }
            perm[std::size_t(br)] = int(bc);
            used_row[std::size_t(br)] = used_col[std::size_t(bc)] = true;
        }
        // only the tracked column must stay continuous; non-target columns may
        // mix inside degenerate subspaces, which leaves P, Pperp, Gr unchanged
        if (std::abs(overlap(prev.target, perm[std::size_t(prev.target)])) <
            1.0 / std::sqrt(2.0))
            throw std::runtime_error(
                "fix_gauge: vanishing consecutive target overlap; grid too coarse");
        Eigen::MatrixXcd vecs(cur.vectors.rows(), m);
        Eigen::VectorXd energies(m);
        int new_target = cur.target;
        for (Eigen::Index r = 0; r < m; ++r) {
            Eigen::Index c = perm[std::size_t(r)];
            Complex ov = overlap(r, c);
            Complex phase = std::abs(ov) > 0 ? ov / std::abs(ov) : Complex(1.0, 0.0);
            vecs.col(r) = cur.vectors.col(c) / phase;
            energies(r) = cur.E(c);
            if (int(c) == cur.target) new_target = int(r);
        }
        cur.vectors = std::move(vecs);
        cur.E = std::move(energies);
        cur.target = new_target;
        // projectors and G_r are sums of phase-free dyads; the permutation
        // only relabels terms, so rebuilding is unnecessary
    }
}

GapProfile gap_profile(const std::vector<SpectralFrame>& frames, double J) {
    if (frames.size() < 2) throw std::invalid_argument("gap_profile: need >= 2 frames");
    GapProfile p;
    p.Delta = std::numeric_limits<double>::infinity();
    for (const auto& f : frames) {
        double best = std::numeric_limits<double>::infinity();
        int arg = -1;
        for (Eigen::Index j = 0; j < f.E.size(); ++j) {
            if (j == f.target) continue;
            double g = std::abs(f.E(j) - f.E(f.target));
            if (g < best) {
                best = g;
                arg = int(j);
            }
        }
        if (best <= 0.0)
            throw std::runtime_error("gap_profile: non-positive gap (isolation assumption violated)");
        p.grid.push_back(f.tau);
        p.delta0.push_back(best);
        p.emin_index.push_back(arg);
        if (best < p.Delta) {
            p.Delta = best;
            p.argmin_tau = f.tau;
        }
    }
    p.A = 1.0 / p.Delta;
    p.d = J * p.Delta;
    return p;
}

std::string GapProfile::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "tau,delta0,Emin_index\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        os << grid[i] << "," << delta0[i] << "," << emin_index[i] << "\n";
    return os.str();
}

nlohmann::json GapProfile::summary_json() const {
    return {{"Delta", Delta}, {"A", A}, {"d", d}, {"argmin_tau", argmin_tau}};
}

Eigen::VectorXcd target_derivative(const SpectralFrame& frame, const Eigen::MatrixXcd& Hdot) {
    return kI * (frame.Gr * (Hdot * frame.target_vector()));
}

EnergyDerivatives hellmann_feynman(const SpectralFrame& frame, const Eigen::MatrixXcd& Hdot,
                                   const Eigen::MatrixXcd& Hddot,
                                   const Eigen::VectorXcd& Phidot) {
    EnergyDerivatives out;
    Eigen::VectorXcd phi = frame.target_vector();
    out.Edot = std::real(Complex(phi.dot(Hdot * phi)));
    out.Eddot = 2.0 * std::real(Complex(phi.dot(Hdot * Phidot))) +
                std::real(Complex(phi.dot(Hddot * phi)));
    Eigen::Index dim = phi.size();
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
    out.pperp_phi_ddot =
        kI * (frame.Gr * ((Hddot - out.Eddot * id) * phi) +
              2.0 * (frame.Gr * ((Hdot - out.Edot * id) * Phidot)));
    return out;
}

std::vector<InequalityCheck> corollary_bounds(const std::vector<SpectralFrame>& frames,
                                              const HamiltonianFamily& family) {
    if (frames.size() < 9) throw std::invalid_argument("corollary_bounds: need >= 9 frames");
    double h = frames[1].tau - frames[0].tau;
    double A = 1.0 / gap_profile(frames).Delta;
    double beta = 0.0, eta = 0.0;
    std::vector<Eigen::MatrixXcd> pperp, gr;
    std::vector<double> phidot_norm, ppdd_norm;
    for (const auto& f : frames) {
        Eigen::MatrixXcd hd = family(f.tau, 1);
        Eigen::MatrixXcd hdd = family(f.tau, 2);
        beta = std::max(beta, operator_norm(hd));
        eta = std::max(eta, operator_norm(hdd));
        Eigen::VectorXcd phidot = target_derivative(f, hd);
        phidot_norm.push_back(phidot.norm());
        ppdd_norm.push_back(hellmann_feynman(f, hd, hdd, phidot).pperp_phi_ddot.norm());
        pperp.push_back(f.Pperp);
        gr.push_back(f.Gr);
    }
    auto pperp_dot = grid_derivative(pperp, h);
    auto gr_dot = grid_derivative(gr, h);

    std::vector<InequalityCheck> checks(4);
    checks[0].name = "phi_dot";
    checks[0].bound = A * beta;
    checks[1].name = "p_perp_dot";
    checks[1].bound = 2.0 * A * beta;
    checks[2].name = "pperp_phi_ddot";
    checks[2].bound = 6.0 * A * A * beta * beta + 2.0 * A * eta;
    checks[3].name = "gr_dot_pperp";
    checks[3].bound = 4.0 * A * A * beta;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        checks[0].measured = std::max(checks[0].measured, phidot_norm[i]);
        checks[2].measured = std::max(checks[2].measured, ppdd_norm[i]);
        if (i < 2 || i + 2 >= frames.size()) continue; // interior stencils only
        checks[1].measured = std::max(checks[1].measured, operator_norm(pperp_dot[i]));
        Eigen::MatrixXcd gp = gr_dot[i] * pperp[i];
        checks[3].measured =
            std::max(checks[3].measured, std::sqrt(operator_norm(gp.adjoint() * gp)));
    }
    return checks;
}

} // namespace adsim
