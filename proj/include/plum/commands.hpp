#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "plum/core_data.hpp"
#include "plum/crs.hpp"
#include "plum/inference.hpp"
#include "plum/simulator.hpp"
#include "plum/summary.hpp"

namespace plum {

/// Output depths lo, lo + step, ..., hi. Written "lo:hi:step".
struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;

    static GridSpec parse(const std::string& text);
    std::string str() const;
};

enum class ModelKind { Plum, Crs };

/// Everything one invocation needs. Settings left unset fall back to the
/// documented defaults; `explicit_keys` records which were given.
struct RunConfig {
    std::string input;
    std::optional<std::size_t> supported_tail;
    std::string supported_file;
    ModelKind model = ModelKind::Plum;
    double dc = 1.0;
    PriorConfig prior;
    std::optional<std::size_t> iterations;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    std::optional<GridSpec> grid;
    std::vector<std::string> scenario;
    double burn_in_fraction = 0.2;
    std::size_t thin = 0;  // 0: the parameter dimension
    std::size_t n_mc = 5000;
    bool extrapolate = false;
    bool noise = true;
    std::set<std::string> explicit_keys;

    /// Applies one key=value setting. Keys match the long flag names with
    /// '-' or '_' (input, supported_tail, supported_file, model, dc, iters,
    /// seed, al, out, grid, scenario, burn_in, thin, mc, extrapolate, noise,
    /// recursion, and the prior keys phi_shape, phi_mean, ps_shape, ps_mean,
    /// omega_a, omega_b, alpha_shape, alpha_mean).
    void set(const std::string& key, const std::string& value);

    /// Throws InputError on inconsistent or out-of-range settings.
    void validate() const;

    nlohmann::json to_json() const;
};

/// Parses a flat key=value file ('#' comments, blank lines ignored) into `cfg`.
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Default chain length for a parameter vector of `dimension` entries.
std::size_t default_iterations(std::size_t dimension);

/// Loads the input CSV and attaches the supported data: the deepest
/// `supported_tail` slices are moved out of the chronology, or the whole
/// file is the chronology and `supported_file` supplies the data.
SplitDataset prepare_dataset(const RunConfig& cfg, std::vector<std::string>& warnings);
SplitDataset prepare_dataset(const CoreDataset& ds, const RunConfig& cfg);

struct PlumRun {
    SectionGrid grid;
    std::size_t iterations = 0;
    PosteriorEnsemble ensemble;
    ChronologySummary summary;
    std::optional<Diagnostics> diagnostics;
    std::vector<std::string> warnings;
    nlohmann::json metadata;
};

/// Bayesian chronology of `data` (already split). The model grid reaches
/// the deeper of the deepest chronology slice and the output grid's end;
/// the chronology limit applies at the deepest chronology slice.
PlumRun run_plum(const SplitDataset& data, double input_deepest, const RunConfig& cfg);

struct CrsRun {
    CrsResult result;
    std::vector<std::string> warnings;
    nlohmann::json metadata;
};

CrsRun run_crs(const SplitDataset& data, const RunConfig& cfg);

struct SimulationRun {
    CoreDataset dataset;
    nlohmann::json metadata;
};

SimulationRun run_simulate(const RunConfig& cfg);

/// CLI entry points. Each writes its outputs under cfg.out_dir and returns
/// the exit status: 0 success, 2 input error, 3 infeasible model, 4 other.
/// Failures are reported on `err` as a single JSON object.
int cmd_plum(const RunConfig& cfg, std::ostream& err);
int cmd_crs(const RunConfig& cfg, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& err);

/// Maps the active exception to an exit status and writes the error JSON.
int report_failure(std::ostream& err);

/// depth,age,mean,sd,lo95,hi95: zero-noise age and Monte Carlo summaries.
std::string crs_csv(const CrsResult& result);

}  // namespace plum
