#include "plum/summary.hpp"

#include <cmath>
#include <stdexcept>

#include "plum/stats.hpp"
#include "text_util.hpp"

namespace plum {

namespace {

constexpr std::size_t kMinDiagnosticDraws = 100;

Marginal marginal(std::span<const double> values) {
    const auto s = summarize_sample(values);
    return {s.mean, s.sd, s.lo, s.hi};
}

}  // namespace

PosteriorEnsemble::PosteriorEnsemble(SectionGrid grid, SlopeRecursion recursion,
                                     std::vector<PlumParameters> draws, std::vector<double> energies,
                                     double acceptance_rate, nlohmann::json metadata)
    : grid_(grid),
      recursion_(recursion),
      draws_(std::move(draws)),
      energies_(std::move(energies)),
      acceptance_rate_(acceptance_rate),
      metadata_(std::move(metadata)) {
    if (energies_.size() != draws_.size()) throw std::invalid_argument("one energy per draw required");
    slopes_.reserve(draws_.size());
    cumulative_.reserve(draws_.size());
    for (const auto& d : draws_) {
        if (d.alpha.size() != grid_.sections()) {
            throw std::invalid_argument("draw dimension does not match the grid");
        }
        auto m = slopes_from_innovations(d.alpha, d.omega, recursion_);
        std::vector<double> cum(m.size() + 1);
        prefix_sums(m, cum);
        slopes_.push_back(std::move(m));
        cumulative_.push_back(std::move(cum));
    }
}

PosteriorEnsemble PosteriorEnsemble::from_chain(const Chain& chain, SectionGrid grid,
                                                SlopeRecursion recursion, nlohmann::json metadata) {
    std::vector<PlumParameters> draws;
    draws.reserve(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) draws.push_back(PlumParameters::unflatten(chain.draw(i)));
    return PosteriorEnsemble(grid, recursion, std::move(draws), chain.energies,
                             chain.acceptance_rate, std::move(metadata));
}

double PosteriorEnsemble::age_at(std::size_t draw, double depth) const {
    return plum::age_at(grid_, slopes_.at(draw), cumulative_.at(draw), depth);
}

std::vector<std::string> PosteriorEnsemble::parameter_names() const {
    std::vector<std::string> names{"phi", "p_s", "omega"};
    for (std::size_t j = 1; j <= grid_.sections(); ++j) names.push_back("alpha_" + std::to_string(j));
    return names;
}

std::vector<double> PosteriorEnsemble::parameter_trace(std::size_t j) const {
    std::vector<double> out;
    out.reserve(draws_.size());
    for (const auto& d : draws_) {
        switch (j) {
        case 0: out.push_back(d.phi); break;
        case 1: out.push_back(d.p_s); break;
        case 2: out.push_back(d.omega); break;
        default: out.push_back(d.alpha.at(j - PlumParameters::kFixed));
        }
    }
    return out;
}

ChronologySummary summarize(const PosteriorEnsemble& ens, std::span<const double> depths) {
    if (ens.size() == 0) throw std::invalid_argument("cannot summarise an empty ensemble");
    for (double d : depths) {
        if (!(d >= 0.0 && d <= ens.grid().extent())) {
            throw std::out_of_range("summary depth " + std::to_string(d) + " outside [0, " +
                                    std::to_string(ens.grid().extent()) + "]");
        }
    }
    ChronologySummary out;
    std::vector<double> ages(ens.size());
    for (double d : depths) {
        for (std::size_t i = 0; i < ens.size(); ++i) ages[i] = ens.age_at(i, d);
        const auto s = summarize_sample(ages);
        out.records.push_back({d, s.mean, s.lo, s.hi});
    }
    out.phi = marginal(ens.parameter_trace(0));
    out.p_s = marginal(ens.parameter_trace(1));
    return out;
}

IatEstimate integrated_autocorrelation_time(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("need at least two values for an autocorrelation");
    const double m = mean(x);
    auto autocov = [&](std::size_t lag) {
        double s = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t) s += (x[t] - m) * (x[t + lag] - m);
        return s / static_cast<double>(n);
    };
    const double c0 = autocov(0);
    if (!(c0 > 0.0)) return {static_cast<double>(n), true};

    double sum = 0.0;
    for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
        const double pair = (autocov(2 * k) + autocov(2 * k + 1)) / c0;
        if (!(pair > 0.0)) break;
        sum += pair;
    }
    return {std::max(2.0 * sum - 1.0, 1.0 / static_cast<double>(n)), false};
}

Diagnostics diagnostics(const PosteriorEnsemble& ens) {
    if (ens.size() < kMinDiagnosticDraws) {
        throw std::invalid_argument("diagnostics need at least " +
                                    std::to_string(kMinDiagnosticDraws) + " draws, have " +
                                    std::to_string(ens.size()));
    }
    Diagnostics out;
    out.names = ens.parameter_names();
    out.acceptance_rate = ens.acceptance_rate();
    for (std::size_t j = 0; j < out.names.size(); ++j) {
        const auto est = integrated_autocorrelation_time(ens.parameter_trace(j));
        out.iat.push_back(est.iat);
        out.ess.push_back(static_cast<double>(ens.size()) / est.iat);
        if (est.degenerate) out.warnings.push_back(out.names[j] + " never moved");
    }
    return out;
}

std::string draws_csv(const PosteriorEnsemble& ens) {
    std::string out;
    for (const auto& name : ens.parameter_names()) out += name + ',';
    out += "energy\n";
    for (std::size_t i = 0; i < ens.size(); ++i) {
        for (double v : ens.draws()[i].flatten()) out += detail::format_double(v) + ',';
        out += detail::format_double(ens.energies()[i]) + '\n';
    }
    return out;
}

std::string chronology_csv(std::span<const AgeRecord> records) {
    std::string out = "depth,mean,lo95,hi95\n";
    for (const auto& r : records) {
        out += detail::format_double(r.depth) + ',' + detail::format_double(r.mean) + ',' +
               detail::format_double(r.lo95) + ',' + detail::format_double(r.hi95) + '\n';
    }
    return out;
}

std::vector<double> depth_grid(double lo, double hi, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (!(hi >= lo) || !(lo >= 0.0)) throw std::invalid_argument("grid needs 0 <= lo <= hi");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

}  // namespace plum
