#pragma once

#include <optional>
#include <span>
#include <vector>

#include "plum/agedepth.hpp"
#include "plum/core_data.hpp"
#include "plum/physics.hpp"

namespace plum {

/// Full Bayesian state. Flattened for the sampler as
/// [phi, p_s, omega, alpha_1, ..., alpha_K].
struct PlumParameters {
    double phi = 0.0;    // Bq/(m^2 yr)
    double p_s = 0.0;    // Bq/kg
    double omega = 0.0;  // memory, (0, 1)
    std::vector<double> alpha;  // yr/cm

    static constexpr std::size_t kFixed = 3;

    std::vector<double> flatten() const;
    static PlumParameters unflatten(std::span<const double> x);
};

/// Prior hyperparameters. Gamma priors are given by shape and mean.
struct PriorConfig {
    double phi_shape = 2.0;
    double phi_mean = 50.0;    // Bq/(m^2 yr)
    double ps_shape = 2.0;
    double ps_mean = 20.0;     // Bq/kg
    double omega_a = 4.0;
    double omega_b = 1.714;    // Beta mean 0.7
    double alpha_shape = 1.5;
    double alpha_mean = 10.0;  // yr/cm
    double a_l = 0.01;         // Bq/m^2, minimum resolvable unsupported activity
    SlopeRecursion recursion = SlopeRecursion::FromBottom;

    /// Throws InputError unless every hyperparameter is strictly positive.
    void validate() const;
};

double gamma_log_pdf(double x, double shape, double mean);
double beta_log_pdf(double x, double a, double b);

/// Gaussian log-likelihood of the slice activities and the supported data,
/// constants dropped:
///   - sum_i (y_i - mu_i)^2 / (2 (s_i)^2) - sum_j (y^S_j - p_s)^2 / (2 sigma_j^2)
/// with y_i = F p_i rho_i, s_i = F sigma_i rho_i,
/// mu_i = F p_s rho_i + unsupported_activity(phi, G(x_i - delta_i), G(x_i)),
/// F = kArealActivityFactor.
double log_likelihood(const PlumParameters& params, const CoreDataset& ds, const SectionGrid& grid,
                      SlopeRecursion recursion = SlopeRecursion::FromBottom);

double log_prior(const PlumParameters& params, const PriorConfig& cfg);

/// Range checks plus the chronology limit: the modelled age at `limit_depth`
/// (c_K when not given) may not exceed chronology_limit(phi, a_l).
bool in_support(const PlumParameters& params, const SectionGrid& grid, const PriorConfig& cfg,
                std::optional<double> limit_depth = std::nullopt);

/// Negative log posterior; +infinity outside the support.
double energy(const PlumParameters& params, const CoreDataset& ds, const SectionGrid& grid,
              const PriorConfig& cfg, std::optional<double> limit_depth = std::nullopt);

/// The posterior bound to one dataset, evaluated on flat parameter vectors.
/// Immutable after construction; energy() may be called concurrently.
class PlumModel {
public:
    /// `grid` must cover every chronology slice and may extend below it.
    /// `limit_depth` defaults to the bottom of the deepest chronology slice.
    PlumModel(CoreDataset chronology, SectionGrid grid, PriorConfig prior,
              std::optional<double> limit_depth = std::nullopt);

    std::size_t dimension() const { return PlumParameters::kFixed + grid_.sections(); }
    const SectionGrid& grid() const { return grid_; }
    const PriorConfig& prior() const { return prior_; }
    const CoreDataset& data() const { return data_; }
    double limit_depth() const { return limit_depth_; }

    bool in_support(std::span<const double> x) const;
    double energy(std::span<const double> x) const;

private:
    struct Slice {
        double top, bottom;
        double observed;      // F p_i rho_i
        double inv_two_var;   // 1 / (2 (F sigma_i rho_i)^2)
        double support_coef;  // F rho_i
    };

    double log_likelihood(std::span<const double> x, std::span<const double> slopes,
                          std::span<const double> cumulative) const;

    CoreDataset data_;
    SectionGrid grid_;
    PriorConfig prior_;
    double limit_depth_;
    std::vector<Slice> slices_;
};

}  // namespace plum
