#include "plum/commands.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "plum/error.hpp"
#include "plum/plum_sampler.hpp"
#include "text_util.hpp"

namespace plum {

namespace {

using nlohmann::json;

constexpr std::size_t kIterationsPerDimension = 60000;
constexpr double kLowEss = 100.0;

// Streams split off the run seed.
constexpr std::uint64_t kCrsStream = 3;
constexpr std::uint64_t kSimulationStream = 4;

std::string normalise_key(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

double to_double(const std::string& key, const std::string& value) {
    auto v = detail::parse_double(value);
    if (!v) throw InputError("setting '" + key + "' expects a number, got '" + value + "'");
    return *v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end || value.empty()) {
        throw InputError("setting '" + key + "' expects a non-negative integer, got '" + value + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw InputError("setting '" + key + "' expects true or false, got '" + value + "'");
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

const char* recursion_name(SlopeRecursion r) {
    return r == SlopeRecursion::FromBottom ? "from_bottom" : "from_top";
}

json marginal_json(const Marginal& m) {
    return {{"mean", m.mean}, {"sd", m.sd}, {"lo95", m.lo95}, {"hi95", m.hi95}};
}

json prior_json(const PriorConfig& p) {
    return {{"phi", {{"distribution", "gamma"}, {"shape", p.phi_shape}, {"mean", p.phi_mean}}},
            {"p_s", {{"distribution", "gamma"}, {"shape", p.ps_shape}, {"mean", p.ps_mean}}},
            {"omega", {{"distribution", "beta"}, {"a", p.omega_a}, {"b", p.omega_b}}},
            {"alpha", {{"distribution", "gamma"}, {"shape", p.alpha_shape}, {"mean", p.alpha_mean}}},
            {"a_l", p.a_l},
            {"recursion", recursion_name(p.recursion)}};
}

const std::vector<std::string>& defaultable_keys() {
    static const std::vector<std::string> keys = {
        "dc",        "iters",      "seed",     "grid",     "burn_in",   "thin",
        "mc",        "al",         "phi_shape", "phi_mean", "ps_shape", "ps_mean",
        "omega_a",   "omega_b",    "alpha_shape", "alpha_mean", "recursion", "extrapolate"};
    return keys;
}

json software_json() { return {{"name", "plum210"}, {"version", PLUM210_VERSION}}; }

json base_metadata(const RunConfig& cfg, const std::string& command) {
    json defaults = json::array();
    for (const auto& k : defaultable_keys()) {
        if (!cfg.explicit_keys.contains(k)) defaults.push_back(k);
    }
    return {{"software", software_json()},
            {"command", command},
            {"config", cfg.to_json()},
            {"defaults_applied", defaults}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("failed writing " + path.string());
}

std::filesystem::path output_dir(const RunConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        body();
        return 0;
    } catch (...) {
        return report_failure(err);
    }
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(':', start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) {
        throw InputError("grid must be lo:hi or lo:hi:step, got '" + text + "'");
    }
    GridSpec g;
    g.lo = to_double("grid", parts[0]);
    g.hi = to_double("grid", parts[1]);
    if (parts.size() == 3) g.step = to_double("grid", parts[2]);
    if (!(g.lo >= 0.0) || !(g.hi >= g.lo) || !(g.step > 0.0) || !std::isfinite(g.hi)) {
        throw InputError("grid needs 0 <= lo <= hi and step > 0, got '" + text + "'");
    }
    return g;
}

std::string GridSpec::str() const {
    return detail::format_double(lo) + ':' + detail::format_double(hi) + ':' +
           detail::format_double(step);
}

void RunConfig::set(const std::string& raw_key, const std::string& value) {
    const std::string key = normalise_key(raw_key);
    if (key == "input") {
        input = value;
    } else if (key == "supported_tail") {
        supported_tail = static_cast<std::size_t>(to_unsigned(key, value));
    } else if (key == "supported_file") {
        supported_file = value;
    } else if (key == "model") {
        if (value == "plum") {
            model = ModelKind::Plum;
        } else if (value == "crs") {
            model = ModelKind::Crs;
        } else {
            throw InputError("model must be plum or crs, got '" + value + "'");
        }
    } else if (key == "dc") {
        dc = to_double(key, value);
    } else if (key == "iters") {
        iterations = static_cast<std::size_t>(to_unsigned(key, value));
    } else if (key == "seed") {
        seed = to_unsigned(key, value);
    } else if (key == "al") {
        prior.a_l = to_double(key, value);
    } else if (key == "out") {
        out_dir = value;
    } else if (key == "grid") {
        grid = GridSpec::parse(value);
    } else if (key == "scenario") {
        scenario = split_words(value);
    } else if (key == "burn_in") {
        burn_in_fraction = to_double(key, value);
    } else if (key == "thin") {
        thin = static_cast<std::size_t>(to_unsigned(key, value));
    } else if (key == "mc") {
        n_mc = static_cast<std::size_t>(to_unsigned(key, value));
    } else if (key == "extrapolate") {
        extrapolate = to_bool(key, value);
    } else if (key == "noise") {
        noise = to_bool(key, value);
    } else if (key == "recursion") {
        if (value == "from_bottom") {
            prior.recursion = SlopeRecursion::FromBottom;
        } else if (value == "from_top") {
            prior.recursion = SlopeRecursion::FromTop;
        } else {
            throw InputError("recursion must be from_bottom or from_top, got '" + value + "'");
        }
    } else if (key == "phi_shape") {
        prior.phi_shape = to_double(key, value);
    } else if (key == "phi_mean") {
        prior.phi_mean = to_double(key, value);
    } else if (key == "ps_shape") {
        prior.ps_shape = to_double(key, value);
    } else if (key == "ps_mean") {
        prior.ps_mean = to_double(key, value);
    } else if (key == "omega_a") {
        prior.omega_a = to_double(key, value);
    } else if (key == "omega_b") {
        prior.omega_b = to_double(key, value);
    } else if (key == "alpha_shape") {
        prior.alpha_shape = to_double(key, value);
    } else if (key == "alpha_mean") {
        prior.alpha_mean = to_double(key, value);
    } else {
        throw InputError("unknown setting '" + raw_key + "'");
    }
    explicit_keys.insert(key);
}

void RunConfig::validate() const {
    if (supported_tail && !supported_file.empty()) {
        throw InputError("--supported-tail and --supported-file are mutually exclusive");
    }
    if (supported_tail && *supported_tail == 0) throw InputError("supported tail must be at least 1");
    if (!(dc > 0.0) || !std::isfinite(dc)) throw InputError("dc must be positive");
    if (iterations && *iterations == 0) throw InputError("iters must be positive");
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
        throw InputError("burn_in must lie in [0, 1)");
    }
    if (n_mc == 0) throw InputError("mc must be positive");
    prior.validate();
}

json RunConfig::to_json() const {
    json j;
    j["input"] = input;
    j["supported_tail"] = supported_tail ? json(*supported_tail) : json(nullptr);
    j["supported_file"] = supported_file;
    j["model"] = model == ModelKind::Plum ? "plum" : "crs";
    j["dc"] = dc;
    j["iters"] = iterations ? json(*iterations) : json(nullptr);
    j["seed"] = seed;
    j["out"] = out_dir;
    j["grid"] = grid ? json(grid->str()) : json(nullptr);
    j["scenario"] = scenario;
    j["burn_in"] = burn_in_fraction;
    j["thin"] = thin;
    j["mc"] = n_mc;
    j["extrapolate"] = extrapolate;
    j["noise"] = noise;
    j["al"] = prior.a_l;
    j["recursion"] = recursion_name(prior.recursion);
    j["phi_shape"] = prior.phi_shape;
    j["phi_mean"] = prior.phi_mean;
    j["ps_shape"] = prior.ps_shape;
    j["ps_mean"] = prior.ps_mean;
    j["omega_a"] = prior.omega_a;
    j["omega_b"] = prior.omega_b;
    j["alpha_shape"] = prior.alpha_shape;
    j["alpha_mean"] = prior.alpha_mean;
    return j;
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find('\n', start), text.size());
        const std::string line = trim(std::string_view(text).substr(start, end - start));
        ++line_no;
        start = end + 1;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key=value, got '" + line + "'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key");
        try {
            cfg.set(key, value);
        } catch (const ParseError&) {
            throw;
        } catch (const InputError& e) {
            throw ParseError(line_no, e.what());
        }
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    apply_config_text(cfg, detail::read_file(path));
}

std::size_t default_iterations(std::size_t dimension) {
    return kIterationsPerDimension * dimension;
}

SplitDataset prepare_dataset(const CoreDataset& ds, const RunConfig& cfg) {
    if (cfg.supported_tail && !cfg.supported_file.empty()) {
        throw InputError("--supported-tail and --supported-file are mutually exclusive");
    }
    if (cfg.supported_tail) return split_supported(ds, *cfg.supported_tail);
    if (!cfg.supported_file.empty()) {
        SplitDataset out;
        out.chronology = ds;
        out.supported = read_supported_file(cfg.supported_file);
        out.chronology.supported.insert(out.chronology.supported.end(), out.supported.begin(),
                                        out.supported.end());
        return out;
    }
    throw InputError("supported activity source missing: give --supported-tail N or --supported-file PATH");
}

SplitDataset prepare_dataset(const RunConfig& cfg, std::vector<std::string>& warnings) {
    if (cfg.input.empty()) throw InputError("--input is required");
    const auto ds = read_dataset_file(cfg.input, {}, warnings);
    return prepare_dataset(ds, cfg);
}

PlumRun run_plum(const SplitDataset& data, double input_deepest, const RunConfig& cfg) {
    cfg.validate();
    const auto& chron = data.chronology;
    validate(chron);
    const GridSpec out = cfg.grid.value_or(GridSpec{0.0, std::max(input_deepest, chron.deepest()), cfg.dc});
    const auto grid = SectionGrid::covering(std::max(chron.deepest(), out.hi), cfg.dc);
    const PlumModel model(chron, grid, cfg.prior);

    const std::size_t n_iter = cfg.iterations.value_or(default_iterations(model.dimension()));
    const auto chain = sample_posterior(model, n_iter, cfg.seed, {cfg.burn_in_fraction, cfg.thin});
    if (chain.size() == 0) throw InputError("no draws kept; raise --iters or lower burn-in");

    std::vector<std::string> warnings;
    PosteriorEnsemble ens = PosteriorEnsemble::from_chain(chain, grid, cfg.prior.recursion);
    const auto depths = depth_grid(out.lo, out.hi, out.step);
    auto summary = summarize(ens, depths);

    std::optional<Diagnostics> diag;
    if (ens.size() >= 100) {
        diag = diagnostics(ens);
        warnings.insert(warnings.end(), diag->warnings.begin(), diag->warnings.end());
        for (std::size_t j = 0; j < diag->names.size(); ++j) {
            if (diag->ess[j] < kLowEss) {
                warnings.push_back("effective sample size of " + diag->names[j] + " is " +
                                   std::to_string(static_cast<long>(diag->ess[j])) +
                                   "; consider more iterations");
                break;
            }
        }
    } else {
        warnings.push_back("fewer than 100 stored draws; diagnostics skipped");
    }
    if (out.hi > chron.deepest()) {
        warnings.push_back("ages below " + detail::format_double(chron.deepest()) +
                           " cm have no 210Pb data and follow the accumulation prior");
    }

    json meta = base_metadata(cfg, "plum");
    meta["seeds"] = {{"run", cfg.seed},
                     {"initial_points", derive_seed(cfg.seed, 1)},
                     {"twalk", derive_seed(cfg.seed, 2)}};
    meta["priors"] = prior_json(cfg.prior);
    meta["model"] = {{"sections", grid.sections()},
                     {"dc", grid.spacing()},
                     {"extent_cm", grid.extent()},
                     {"limit_depth_cm", model.limit_depth()},
                     {"chronology_slices", chron.measurements.size()},
                     {"supported_data", chron.supported.size()},
                     {"output_grid", out.str()}};
    json diag_json = nullptr;
    if (diag) {
        diag_json = json::object();
        for (std::size_t j = 0; j < diag->names.size(); ++j) {
            diag_json["iat"][diag->names[j]] = diag->iat[j];
            diag_json["ess"][diag->names[j]] = diag->ess[j];
        }
    }
    meta["chain"] = {{"iterations", chain.iterations},
                     {"burn_in", chain.burn_in},
                     {"thin", chain.thin},
                     {"stored_draws", chain.size()},
                     {"acceptance_rate", chain.acceptance_rate},
                     {"moves", {"traverse", "walk", "blow", "hop"}},
                     {"proposed", chain.proposed},
                     {"accepted", chain.accepted}};
    meta["diagnostics"] = diag_json;
    meta["posterior"] = {{"phi", marginal_json(summary.phi)}, {"p_s", marginal_json(summary.p_s)}};
    meta["warnings"] = warnings;

    return PlumRun{grid, n_iter, std::move(ens), std::move(summary), std::move(diag),
                   std::move(warnings), std::move(meta)};
}

CrsRun run_crs(const SplitDataset& data, const RunConfig& cfg) {
    cfg.validate();
    auto est = tail_supported_estimate(data.supported);
    std::vector<std::string> warnings;
    if (est.degenerate) {
        est.sd = data.supported.front().sigma;
        warnings.push_back("one supported datum; its measurement sigma is used as the supported sd");
    }
    const std::uint64_t mc_seed = derive_seed(cfg.seed, kCrsStream);
    CrsRun run{crs_ages(data.chronology, est.mean, est.sd, cfg.n_mc, mc_seed, cfg.extrapolate),
               {}, {}};
    warnings.insert(warnings.end(), run.result.warnings.begin(), run.result.warnings.end());
    if (run.result.terminal_depth) {
        warnings.push_back("deepest retained sample at " +
                           detail::format_double(*run.result.terminal_depth) +
                           " cm carries the remaining inventory and has no age");
    }
    if (cfg.grid) warnings.push_back("CRS ages are reported at measured depths; --grid is ignored");

    json meta = base_metadata(cfg, "crs");
    meta["seeds"] = {{"run", cfg.seed}, {"monte_carlo", mc_seed}};
    meta["supported"] = {{"mean", est.mean}, {"sd", est.sd}, {"data", data.supported.size()}};
    meta["a0"] = run.result.a0;
    meta["supply"] = run.result.supply;
    meta["dropped_depths"] = run.result.dropped_depths;
    meta["terminal_depth"] =
        run.result.terminal_depth ? json(*run.result.terminal_depth) : json(nullptr);
    meta["extrapolated"] = run.result.extrapolated;
    meta["replicates"] = cfg.n_mc;
    meta["warnings"] = warnings;
    run.warnings = std::move(warnings);
    run.metadata = std::move(meta);
    return run;
}

SimulationRun run_simulate(const RunConfig& cfg) {
    cfg.validate();
    const Scenario scenario = cfg.scenario.empty() ? Scenario{} : Scenario::parse(cfg.scenario);
    json meta = base_metadata(cfg, "simulate");
    CoreDataset base;
    if (!cfg.input.empty()) {
        std::vector<std::string> ignored;
        base = read_dataset_file(cfg.input, {}, ignored);
        meta["source"] = cfg.input;
    } else {
        auto spec = SimulationSpec::defaults();
        spec.seed = derive_seed(cfg.seed, kSimulationStream);
        spec.add_noise = cfg.noise;
        base = simulate(spec);
        meta["source"] = "simulator";
        meta["seeds"] = {{"run", cfg.seed}, {"simulation", spec.seed}};
        meta["truth"] = {{"phi", spec.phi},
                         {"p_s", spec.p_s},
                         {"age", "t(x) = x^2/3 + x/2"},
                         {"density", "rho(x) = 1.5 - 0.05 cos(pi x / 30)"}};
    }
    auto ds = scenario_filter(base, scenario);
    meta["scenario"] = scenario.name();
    meta["rows"] = ds.measurements.size();
    return {std::move(ds), std::move(meta)};
}

int cmd_plum(const RunConfig& cfg, std::ostream& err) {
    return guarded(err, [&] {
        std::vector<std::string> warnings;
        if (cfg.input.empty()) throw InputError("--input is required");
        const auto ds = read_dataset_file(cfg.input, {}, warnings);
        const auto data = prepare_dataset(ds, cfg);
        auto run = run_plum(data, ds.deepest(), cfg);
        warnings.insert(warnings.end(), run.warnings.begin(), run.warnings.end());
        run.metadata["warnings"] = warnings;
        const auto dir = output_dir(cfg);
        write_text(dir / "draws.csv", draws_csv(run.ensemble));
        write_text(dir / "chronology.csv", chronology_csv(run.summary.records));
        write_text(dir / "metadata.json", run.metadata.dump(2) + "\n");
        for (const auto& w : warnings) err << "warning: " << w << '\n';
    });
}

int cmd_crs(const RunConfig& cfg, std::ostream& err) {
    return guarded(err, [&] {
        std::vector<std::string> warnings;
        const auto data = prepare_dataset(cfg, warnings);
        auto run = run_crs(data, cfg);
        warnings.insert(warnings.end(), run.warnings.begin(), run.warnings.end());
        run.metadata["warnings"] = warnings;
        const auto dir = output_dir(cfg);
        std::vector<AgeRecord> records;
        for (const auto& r : run.result.records) {
            records.push_back({r.depth, r.age_mean, r.age_lo95, r.age_hi95});
        }
        write_text(dir / "chronology.csv", chronology_csv(records));
        write_text(dir / "crs.csv", crs_csv(run.result));
        write_text(dir / "metadata.json", run.metadata.dump(2) + "\n");
        for (const auto& w : warnings) err << "warning: " << w << '\n';
    });
}

int cmd_simulate(const RunConfig& cfg, std::ostream& err) {
    return guarded(err, [&] {
        const auto run = run_simulate(cfg);
        const auto dir = output_dir(cfg);
        write_text(dir / "simulated.csv", serialize_dataset(run.dataset));
        write_text(dir / "metadata.json", run.metadata.dump(2) + "\n");
    });
}

int report_failure(std::ostream& err) {
    json e;
    int code = 4;
    try {
        throw;
    } catch (const ParseError& ex) {
        code = 2;
        e = {{"kind", "parse_error"}, {"message", ex.what()}, {"line", ex.line()}};
    } catch (const InputError& ex) {
        code = 2;
        e = {{"kind", "input_error"}, {"message", ex.what()}};
    } catch (const InfeasibleError& ex) {
        code = 3;
        e = {{"kind", "infeasible"}, {"message", ex.what()}};
    } catch (const std::exception& ex) {
        e = {{"kind", "internal_error"}, {"message", ex.what()}};
    } catch (...) {
        e = {{"kind", "internal_error"}, {"message", "unknown failure"}};
    }
    err << json{{"error", e}, {"exit_code", code}}.dump() << '\n';
    return code;
}

std::string crs_csv(const CrsResult& result) {
    std::string out = "depth,age,mean,sd,lo95,hi95\n";
    for (const auto& r : result.records) {
        out += detail::format_double(r.depth) + ',' + detail::format_double(r.age) + ',' +
               detail::format_double(r.age_mean) + ',' + detail::format_double(r.age_sd) + ',' +
               detail::format_double(r.age_lo95) + ',' + detail::format_double(r.age_hi95) + '\n';
    }
    return out;
}

}  // namespace plum
