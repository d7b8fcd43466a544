#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plum/core_data.hpp"

namespace plum {

/// Deterministic constant-rate-of-supply ages for one set of concentrations.
struct CrsPointAges {
    std::vector<double> depths;          // slices that receive an age
    std::vector<double> ages;            // yr before collection
    std::vector<double> dropped_depths;  // non-positive unsupported activity
    std::optional<double> terminal_depth;  // deepest retained slice; no age without extrapolation
    double a0 = 0.0;                     // total unsupported inventory, Bq/kg * g/cm^2
    double tail_inventory = 0.0;         // extrapolated inventory below the deepest slice
    bool extrapolated = false;
};

/// Inventories are per-slice sums of (p_i - supported) * rho_i. Unsampled
/// gaps between two retained slices are filled by exponential interpolation
/// of the inventory per cm. With `extrapolate`, an exponential fitted to the
/// deepest retained slices supplies the inventory below the core and the
/// terminal slice gets an age too.
CrsPointAges crs_point_ages(const CoreDataset& ds, double supported_mean, bool extrapolate = false);

struct CrsRecord {
    double depth = 0.0;
    double age = 0.0;       // zero-noise age
    double age_mean = 0.0;  // Monte Carlo summaries
    double age_sd = 0.0;
    double age_lo95 = 0.0;
    double age_hi95 = 0.0;
    std::size_t replicates = 0;  // replicates in which this slice was dated
};

struct CrsResult {
    std::vector<CrsRecord> records;
    double supported_mean = 0.0;
    double supported_sd = 0.0;
    double a0 = 0.0;
    double supply = 0.0;  // lambda * A(0), Bq/(m^2 yr)
    std::vector<double> dropped_depths;
    std::optional<double> terminal_depth;
    bool extrapolated = false;
    std::size_t n_mc = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

/// CRS chronology with Monte Carlo uncertainty: each replicate redraws every
/// concentration from N(p_i, sigma_i^2) and the supported level from
/// N(mean, sd^2), then recomputes the point ages. Replicate r uses its own
/// generator seeded from (seed, r).
CrsResult crs_ages(const CoreDataset& ds, double supported_mean, double supported_sd,
                   std::size_t n_mc = 5000, std::uint64_t seed = 0, bool extrapolate = false);

}  // namespace plum
