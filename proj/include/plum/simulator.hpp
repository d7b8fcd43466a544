#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plum/core_data.hpp"

namespace plum {

/// Known-truth synthetic core: constant supply, quadratic age-depth curve
/// t(x) = q2 x^2 + q1 x and density rho(x) = b0 - b1 cos(pi x / period).
/// rho is the dry mass per cm of depth in kg/m^2; the emitted density
/// column is the slice's mass in g/cm^2 (rho-bar * thickness / 10).
struct SimulationSpec {
    double phi = 150.0;  // Bq/(m^2 yr)
    double p_s = 20.0;   // Bq/kg
    double age_q2 = 1.0 / 3.0;
    double age_q1 = 0.5;
    double density_b0 = 1.5;
    double density_b1 = 0.05;
    double density_period = 30.0;
    std::vector<double> depths;  // slice bottoms, cm
    double thickness = 1.0;      // cm
    std::vector<double> sigmas;  // Bq/kg, one per depth or a single value for all
    std::uint64_t seed = 0;
    bool add_noise = true;

    /// Thirty 1-cm slices with the stepwise 10 -> 5 Bq/kg error pattern.
    static SimulationSpec defaults();

    double true_age(double x) const { return age_q2 * x * x + age_q1 * x; }
    double density(double x) const;
    double mean_density(double top, double bottom) const;
    double sigma_at(std::size_t i) const;
};

/// Error pattern of the bundled simulated fixture: 10 Bq/kg at 1 cm, then
/// 9, 8, 7, 6 over successive seven-slice blocks, and 5 below 29 cm.
double reference_sigma(double depth);

/// Expected (noise-free) total concentration of slice (top, bottom].
double simulated_concentration(const SimulationSpec& spec, double top, double bottom);

CoreDataset simulate(const SimulationSpec& spec);

struct Scenario {
    enum class Kind { Full, OddDepths, TopN, DropBottom, SkipRange };
    Kind kind = Kind::Full;
    std::size_t count = 0;  // TopN: slices kept; DropBottom: slices removed
    double lo = 0.0;        // SkipRange: depths in [lo, hi] removed
    double hi = 0.0;

    /// Accepts "full", "odd_depths", "top_n K", "drop_bottom K",
    /// "skip_range LO HI"; ':' may replace the spaces.
    static Scenario parse(const std::vector<std::string>& tokens);
    std::string name() const;
};

CoreDataset scenario_filter(const CoreDataset& ds, const Scenario& scenario);

}  // namespace plum
