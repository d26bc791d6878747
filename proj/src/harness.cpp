#include "adsim/harness.hpp"

#include "adsim/opensys.hpp"
#include "adsim/propagator.hpp"
#include "adsim/spectral.hpp"
#include "adsim/superadiabatic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace adsim {

void ExperimentConfig::validate() const {
    if (!inline_spec && builtin != "grover" && builtin != "x-to-z" && builtin != "random-2local")
        throw std::invalid_argument("config: unknown builtin '" + builtin + "'");
    if (n < 1 || n > 8) throw std::invalid_argument("config: n must be in [1,8]");
    if (builtin == "random-2local" && n > 6)
        throw std::invalid_argument("config: random-2local limited to n <= 6");
    if (schedule.family != "smooth_poly" && schedule.family != "linear" &&
        schedule.family != "rational")
        throw std::invalid_argument("config: unknown schedule family '" + schedule.family + "'");
    if (N < 0 || N > 8) throw std::invalid_argument("config: N must be in [0,8]");
    if (q <= 1.0) throw std::invalid_argument("config: q must exceed 1");
    if (tol <= 0.0) throw std::invalid_argument("config: tol must be positive");
    if (!sweep_variable.empty()) {
        if (sweep_variable != "N" && sweep_variable != "T" && sweep_variable != "q" &&
            sweep_variable != "n")
            throw std::invalid_argument("config: sweep variable must be N, T, q, or n");
        if (sweep_values.empty()) throw std::invalid_argument("config: empty sweep range");
    }
    if (grid_points < 3) throw std::invalid_argument("config: grid_points too small");
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    if (inline_spec)
        j["hamiltonian"] = inline_spec->to_json();
    else
        j["hamiltonian"] = builtin;
    j["n"] = n;
    j["marked"] = marked;
    j["seed"] = seed;
    j["schedule"] = {{"family", schedule.family}, {"Nb", schedule.Nb},
                     {"gamma", schedule.gamma}};
    j["N"] = N;
    j["q"] = q;
    if (JT) j["JT"] = *JT;
    if (!sweep_variable.empty())
        j["sweep"] = {{"variable", sweep_variable}, {"values", sweep_values}};
    j["tol"] = tol;
    j["expansion"] = expansion;
    j["grid_points"] = grid_points;
    if (!output_dir.empty()) j["output"] = output_dir;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    if (j.contains("hamiltonian")) {
        if (j["hamiltonian"].is_string())
            c.builtin = j["hamiltonian"].get<std::string>();
        else
            c.inline_spec = LocalHamiltonianSpec::from_json(j["hamiltonian"]);
    }
    c.n = j.value("n", 2);
    c.marked = j.value("marked", std::uint64_t(0));
    c.seed = j.value("seed", std::uint64_t(1));
    if (j.contains("schedule")) {
        const auto& s = j["schedule"];
        c.schedule.family = s.value("family", std::string("smooth_poly"));
        c.schedule.Nb = s.value("Nb", 2);
        c.schedule.gamma = s.value("gamma", kDefaultGamma);
    }
    c.N = j.value("N", 1);
    c.q = j.value("q", 2.0);
    if (j.contains("JT")) c.JT = j["JT"].get<double>();
    if (j.contains("sweep")) {
        c.sweep_variable = j["sweep"].value("variable", std::string());
        c.sweep_values = j["sweep"].value("values", std::vector<double>{});
    }
    c.tol = j.value("tol", 1e-10);
    c.expansion = j.value("expansion", false);
    c.grid_points = j.value("grid_points", std::size_t(513));
    c.output_dir = j.value("output", std::string());
    c.validate();
    return c;
}

std::string ExperimentConfig::hash() const {
    std::string dump = to_json().dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

Instance build_instance(const ExperimentConfig& cfg, int N, int n) {
    Instance inst{HamiltonianFamily{}, Schedule::linear(), cfg.schedule.gamma, 0.0, 0.0};
    int nb = std::max(cfg.schedule.Nb, N); // theorem needs Nb >= N
    if (cfg.schedule.family == "smooth_poly")
        inst.schedule = Schedule::smooth_poly(nb, cfg.schedule.gamma);
    else if (cfg.schedule.family == "rational")
        inst.schedule = Schedule::rational_example().second;
    else
        inst.schedule = Schedule::linear();
    inst.gamma = inst.schedule.gamma();

    if (cfg.inline_spec) {
        ScheduleBank bank;
        bank.add("config_x", inst.schedule);
        inst.family = make_family(*cfg.inline_spec, bank);
    } else if (cfg.builtin == "grover") {
        inst.family = make_grover_family(n, cfg.marked & ((1ull << n) - 1), inst.schedule);
    } else {
        ScheduleBank bank;
        bank.add("config_x", inst.schedule);
        LocalHamiltonianSpec spec = cfg.builtin == "x-to-z"
                                        ? x_to_z_spec(n, "config_x")
                                        : random_2local_spec(n, "config_x", cfg.seed);
        inst.family = make_family(spec, bank);
    }

    std::vector<double> grid = uniform_grid(cfg.grid_points);
    auto frames = frames_on_grid(inst.family, grid);
    GapProfile gp = gap_profile(frames, inst.family.J);
    inst.d = gp.d;
    double beta = 0.0;
    for (double tau : grid) beta = std::max(beta, operator_norm(inst.family(tau, 1)));
    inst.xi = inst.family.J * beta;
    return inst;
}

namespace {

SweepRow run_point(const ExperimentConfig& cfg, const std::string& var, double x) {
    SweepRow row;
    row.x = x;
    int N = cfg.N, n = cfg.n;
    double q = cfg.q;
    if (var == "N") N = int(std::lround(x));
    if (var == "q") q = x;
    if (var == "n") n = int(std::lround(x));

    Instance inst = build_instance(cfg, N, n);
    BoundInputs in;
    in.N = N;
    in.q = q;
    in.gamma = inst.gamma;
    in.xi = inst.xi;
    in.d = inst.d;
    in.J = inst.family.J;

    double JT;
    if (var == "T")
        JT = x;
    else if (cfg.JT)
        JT = *cfg.JT;
    else
        JT = inst.family.J * theorem1_time(in);

    row.N = N;
    row.q = q;
    row.T = JT;
    row.delta_bound = theorem1_error_bound(in);

    EvolveOptions opts;
    opts.tol = cfg.tol;
    opts.output_points = cfg.grid_points;
    EvolutionResult res = evolve(inst.family, JT, opts);
    auto frames = frames_on_grid(inst.family, res.grid);
    fix_gauge(frames);

    const ExpansionSeries* series_ptr = nullptr;
    ExpansionSeries series;
    if (cfg.expansion) {
        ExpandOptions eo;
        eo.grid_points = std::max<std::size_t>(cfg.grid_points, 1025);
        series = expand(inst.family, std::min(N, 3), eo);
        series_ptr = &series;
    }
    ErrorReport rep = error_report(res, frames, series_ptr);
    row.delta_measured = rep.delta;
    row.delta1 = rep.delta1;
    row.delta2 = rep.delta2;
    row.fidelity = rep.fidelity;
    return row;
}

} // namespace

SweepTable run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    SweepTable table;
    table.config_hash = cfg.hash();
    std::string var = cfg.sweep_variable;
    table.variable = var;
    std::vector<double> values = cfg.sweep_values;
    if (var.empty()) { // single point
        var = "T";
        values = {cfg.JT ? *cfg.JT : 0.0};
        if (values[0] == 0.0) {
            Instance inst = build_instance(cfg, cfg.N, cfg.n);
            BoundInputs in;
            in.N = cfg.N;
            in.q = cfg.q;
            in.gamma = inst.gamma;
            in.xi = inst.xi;
            in.d = inst.d;
            in.J = inst.family.J;
            values[0] = inst.family.J * theorem1_time(in);
        }
    }
    for (double x : values) {
        auto start = std::chrono::steady_clock::now();
        SweepRow row;
        try {
            row = run_point(cfg, var, x);
        } catch (const std::exception& e) {
            row.x = x;
            row.error = e.what();
        }
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string SweepTable::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "N,q,T,delta_measured,delta_bound,delta1,delta2,fidelity,error,config_hash\n";
    for (const auto& r : rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        os << r.N << "," << r.q << "," << r.T << "," << r.delta_measured << ","
           << r.delta_bound << "," << r.delta1 << "," << r.delta2 << "," << r.fidelity << ","
           << err << "," << config_hash << "\n";
    }
    return os.str();
}

nlohmann::json SweepTable::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows)
        rows_json.push_back({{"x", r.x},
                             {"N", r.N},
                             {"q", r.q},
                             {"T", r.T},
                             {"delta_measured", r.delta_measured},
                             {"delta_bound", r.delta_bound},
                             {"delta1", r.delta1},
                             {"delta2", r.delta2},
                             {"fidelity", r.fidelity},
                             {"error", r.error},
                             {"wall_ms", r.wall_ms}});
    return {{"variable", variable}, {"config_hash", config_hash}, {"rows", rows_json}};
}

FitResult fit_decay(const SweepTable& table, double floor) {
    FitResult out;
    std::vector<double> xs, ys;
    for (const auto& r : table.rows) {
        if (!r.error.empty()) {
            ++out.failed;
            continue;
        }
        if (r.delta_measured <= floor) {
            ++out.censored;
            continue;
        }
        double x = r.x;
        if (table.variable == "T") x = r.T;
        xs.push_back(x);
        ys.push_back(std::log(r.delta_measured));
    }
    if (xs.size() < 4)
        throw std::runtime_error("fit_decay: need >= 4 usable rows (" +
                                 std::to_string(xs.size()) + " available)");
    out.fit = least_squares(xs, ys);
    return out;
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("write_atomic: cannot open " + tmp.string());
        f << content;
        if (!f.good()) throw std::runtime_error("write_atomic: write failed for " + path);
    }
    fs::rename(tmp, p);
}

} // namespace adsim
