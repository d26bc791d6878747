#pragma once

#include "adsim/gridmath.hpp"
#include "adsim/hamiltonian.hpp"
#include "adsim/metrics.hpp"

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

// Experiment plumbing: JSON configs, builtin problem instances, parameter
// sweeps with per-row error capture, decay fits, and atomic CSV/JSON output.

namespace adsim {

struct ScheduleConfig {
    std::string family = "smooth_poly"; // smooth_poly | linear | rational
    int Nb = 2;
    double gamma = kDefaultGamma;
};

struct ExperimentConfig {
    // builtin name (grover | x-to-z | random-2local) or inline spec
    std::string builtin = "x-to-z";
    std::optional<LocalHamiltonianSpec> inline_spec;
    int n = 2;
    std::uint64_t marked = 0; // grover target index
    std::uint64_t seed = 1;
    ScheduleConfig schedule;
    int N = 1;      // bound order (vanishing-derivative count)
    double q = 2.0;
    std::optional<double> JT; // explicit total time; otherwise the theorem formula
    std::string sweep_variable; // "", "N", "T", "q", "n"
    std::vector<double> sweep_values;
    double tol = 1e-10;
    bool expansion = false; // also compute delta1/delta2 via the series
    std::size_t grid_points = 513;
    std::string output_dir;

    void validate() const;
    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    /// FNV-1a over the canonical JSON dump; recorded in every output row.
    std::string hash() const;
};

/// Instance resolved from a config at concrete (N, n) values.
struct Instance {
    HamiltonianFamily family;
    Schedule schedule;
    double gamma = kDefaultGamma;
    double xi = 0.0; // J sup ||dH/dtau||
    double d = 0.0;  // minimal dimensional gap
};

Instance build_instance(const ExperimentConfig& cfg, int N, int n);

struct SweepRow {
    double x = 0.0; // sweep-variable value
    int N = 0;
    double q = 0.0;
    double T = 0.0; // J T (dimensionless total time)
    double delta_measured = 0.0;
    double delta_bound = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double fidelity = 0.0;
    std::string error; // per-row failure capture; sweep continues
    double wall_ms = 0.0;
};

struct SweepTable {
    std::string variable;
    std::string config_hash;
    std::vector<SweepRow> rows;

    /// Deterministic: excludes wall time. Columns
    /// N,q,T,delta_measured,delta_bound,delta1,delta2,fidelity,error,config_hash.
    std::string to_csv() const;
    nlohmann::json to_json() const; // includes timings
};

SweepTable run_sweep(const ExperimentConfig& cfg);

struct FitResult {
    LinearFit fit;          // ln(delta) vs x
    std::size_t censored = 0; // rows at or below the numerical floor
    std::size_t failed = 0;   // rows with recorded errors
};

constexpr double kDeltaFloor = 1e-12;

FitResult fit_decay(const SweepTable& table, double floor = kDeltaFloor);

/// Write-to-temp-then-rename; creates the directory if needed.
void write_atomic(const std::string& path, const std::string& content);

} // namespace adsim
