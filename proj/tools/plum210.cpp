// plum210: 210Pb chronologies with the Bayesian Plum model or classical CRS.

#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "plum/commands.hpp"
#include "plum/error.hpp"

namespace {

class Flags {
public:
    explicit Flags(CLI::App* app) : app_(app) {}

    void value(const std::string& name, const std::string& key, const std::string& help) {
        auto& b = add(key);
        b.option = app_->add_option(name, b.value, help);
    }

    void words(const std::string& name, const std::string& key, const std::string& help) {
        auto& b = add(key);
        b.option = app_->add_option(name, b.words, help)->expected(1, 3);
    }

    /// Boolean switch stored as `key`; `inverted` sets it to false.
    void flag(const std::string& name, const std::string& key, const std::string& help,
              bool inverted = false) {
        auto& b = add(key);
        b.is_flag = true;
        b.inverted = inverted;
        b.option = app_->add_flag(name, b.flag, help);
    }

    void config() { app_->add_option("--config", config_path_, "key=value settings file; flags win"); }

    plum::RunConfig build() const {
        plum::RunConfig cfg;
        if (!config_path_.empty()) plum::apply_config_file(cfg, config_path_);
        for (const auto& owned : bindings_) {
            const Binding& b = *owned;
            if (b.option->count() == 0) continue;
            if (b.is_flag) {
                cfg.set(b.key, b.flag != b.inverted ? "true" : "false");
            } else if (!b.words.empty()) {
                std::string joined;
                for (const auto& w : b.words) joined += (joined.empty() ? "" : " ") + w;
                cfg.set(b.key, joined);
            } else {
                cfg.set(b.key, b.value);
            }
        }
        return cfg;
    }

private:
    struct Binding {
        std::string key;
        std::string value;
        std::vector<std::string> words;
        bool flag = false;
        bool is_flag = false;
        bool inverted = false;
        CLI::Option* option = nullptr;
    };

    Binding& add(const std::string& key) {
        bindings_.push_back(std::make_unique<Binding>());
        bindings_.back()->key = key;
        return *bindings_.back();
    }

    CLI::App* app_;
    std::string config_path_;
    std::vector<std::unique_ptr<Binding>> bindings_;
};

void dating_flags(Flags& f, bool with_model) {
    f.value("--input", "input", "measurement CSV");
    f.value("--supported-tail", "supported_tail", "use the deepest N samples as supported data");
    f.value("--supported-file", "supported_file", "CSV of direct supported measurements");
    if (with_model) f.value("--model", "model", "plum or crs");
    f.value("--dc", "dc", "section thickness, cm (default 1)");
    f.value("--iters", "iters", "t-walk iterations (default 60000 per parameter)");
    f.value("--seed", "seed", "run seed (default 0)");
    f.value("--al", "al", "detection threshold a_l, Bq/m^2 (default 0.01)");
    f.value("--out", "out", "output directory (default out)");
    f.value("--grid", "grid", "output depths lo:hi:step (default 0:deepest:dc)");
    f.value("--burn-in", "burn_in", "fraction of iterations discarded (default 0.2)");
    f.value("--thin", "thin", "keep every n-th draw (default: parameter count)");
    f.value("--recursion", "recursion", "from_bottom or from_top");
    f.value("--mc", "mc", "CRS Monte Carlo replicates (default 5000)");
    f.flag("--extrapolate", "extrapolate", "CRS: extrapolate the inventory below the core");
    f.config();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"210Pb dating: Bayesian Plum model and classical CRS"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("plum210 ") + PLUM210_VERSION);

    auto* date = app.add_subcommand("date", "date a core with --model plum|crs");
    auto* plum_cmd = app.add_subcommand("plum", "Bayesian chronology (same as date --model plum)");
    auto* crs_cmd = app.add_subcommand("crs", "CRS chronology (same as date --model crs)");
    auto* sim = app.add_subcommand("simulate", "write the synthetic core or a scenario subset");

    Flags date_flags(date), plum_flags(plum_cmd), crs_flags(crs_cmd), sim_flags(sim);
    dating_flags(date_flags, true);
    dating_flags(plum_flags, false);
    dating_flags(crs_flags, false);
    sim_flags.value("--seed", "seed", "run seed (default 0)");
    sim_flags.words("--scenario", "scenario",
                    "full | odd_depths | top_n K | drop_bottom K | skip_range LO HI");
    sim_flags.value("--input", "input", "filter this CSV instead of simulating");
    sim_flags.value("--out", "out", "output directory (default out)");
    sim_flags.flag("--no-noise", "noise", "emit the noise-free expected concentrations", true);
    sim_flags.config();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << nlohmann::json{{"error", {{"kind", "usage"}, {"message", e.what()}}},
                                    {"exit_code", 2}}
                         .dump()
                  << '\n';
        return 2;
    }

    plum::RunConfig cfg;
    try {
        if (date->parsed()) {
            cfg = date_flags.build();
        } else if (plum_cmd->parsed()) {
            cfg = plum_flags.build();
            cfg.model = plum::ModelKind::Plum;
        } else if (crs_cmd->parsed()) {
            cfg = crs_flags.build();
            cfg.model = plum::ModelKind::Crs;
        } else {
            cfg = sim_flags.build();
            return plum::cmd_simulate(cfg, std::cerr);
        }
    } catch (...) {
        return plum::report_failure(std::cerr);
    }
    return cfg.model == plum::ModelKind::Plum ? plum::cmd_plum(cfg, std::cerr)
                                              : plum::cmd_crs(cfg, std::cerr);
}
