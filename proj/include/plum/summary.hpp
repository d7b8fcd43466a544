#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "plum/agedepth.hpp"
#include "plum/inference.hpp"
#include "plum/twalk.hpp"

namespace plum {

/// Posterior draws together with their grid and run metadata. Slopes are
/// derived once per draw on construction.
class PosteriorEnsemble {
public:
    PosteriorEnsemble(SectionGrid grid, SlopeRecursion recursion, std::vector<PlumParameters> draws,
                      std::vector<double> energies, double acceptance_rate = 0.0,
                      nlohmann::json metadata = nlohmann::json::object());

    static PosteriorEnsemble from_chain(const Chain& chain, SectionGrid grid,
                                        SlopeRecursion recursion,
                                        nlohmann::json metadata = nlohmann::json::object());

    const SectionGrid& grid() const { return grid_; }
    std::size_t size() const { return draws_.size(); }
    const std::vector<PlumParameters>& draws() const { return draws_; }
    const std::vector<double>& energies() const { return energies_; }
    double acceptance_rate() const { return acceptance_rate_; }
    const nlohmann::json& metadata() const { return metadata_; }
    nlohmann::json& metadata() { return metadata_; }

    double age_at(std::size_t draw, double depth) const;

    /// Column names of the flattened parameters: phi, p_s, omega, alpha_1..alpha_K.
    std::vector<std::string> parameter_names() const;
    std::vector<double> parameter_trace(std::size_t j) const;

private:
    SectionGrid grid_;
    SlopeRecursion recursion_;
    std::vector<PlumParameters> draws_;
    std::vector<double> energies_;
    double acceptance_rate_;
    nlohmann::json metadata_;
    std::vector<std::vector<double>> cumulative_;
    std::vector<std::vector<double>> slopes_;
};

struct AgeRecord {
    double depth = 0.0;
    double mean = 0.0;
    double lo95 = 0.0;
    double hi95 = 0.0;
};

struct Marginal {
    double mean = 0.0;
    double sd = 0.0;
    double lo95 = 0.0;
    double hi95 = 0.0;
};

struct ChronologySummary {
    std::vector<AgeRecord> records;
    Marginal phi;
    Marginal p_s;
};

/// Posterior mean and equal-tailed 95% band of the age at every depth in
/// `depth_grid`, plus the supply and supported-level marginals.
ChronologySummary summarize(const PosteriorEnsemble& ens, std::span<const double> depth_grid);

struct IatEstimate {
    double iat = 1.0;
    bool degenerate = false;  // zero variance; iat set to the series length
};

/// Integrated autocorrelation time by Geyer's initial positive sequence:
/// 2 * (sum of consecutive autocorrelation pairs while positive) - 1.
IatEstimate integrated_autocorrelation_time(std::span<const double> series);

struct Diagnostics {
    std::vector<std::string> names;
    std::vector<double> iat;
    std::vector<double> ess;
    double acceptance_rate = 0.0;
    std::vector<std::string> warnings;
};

/// Needs at least 100 stored draws.
Diagnostics diagnostics(const PosteriorEnsemble& ens);

/// One row per draw: phi,p_s,omega,alpha_1..alpha_K,energy.
std::string draws_csv(const PosteriorEnsemble& ens);

/// depth,mean,lo95,hi95
std::string chronology_csv(std::span<const AgeRecord> records);

/// Evenly spaced depths lo, lo + step, ... up to hi inclusive.
std::vector<double> depth_grid(double lo, double hi, double step);

}  // namespace plum
