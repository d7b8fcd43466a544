#include "plum/inference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "plum/error.hpp"

namespace plum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Slice {
    double top, bottom, observed, inv_two_var, support_coef;
};

Slice make_slice(const Measurement& m) {
    const double sd = kArealActivityFactor * m.sigma * m.density;
    return {m.depth_top(), m.depth_bottom, kArealActivityFactor * m.total_pb * m.density,
            1.0 / (2.0 * sd * sd), kArealActivityFactor * m.density};
}

template <class Slices>
double likelihood_kernel(double phi, double p_s, const SectionGrid& grid,
                         std::span<const double> slopes, std::span<const double> cumulative,
                         const Slices& slices, const std::vector<SupportedDatum>& supported) {
    const DecayConstants decay;
    const double scale = phi / decay.lambda;
    double total = 0.0;
    for (const auto& s : slices) {
        const double t_top = age_at(grid, slopes, cumulative, s.top);
        const double t_bottom = age_at(grid, slopes, cumulative, s.bottom);
        const double unsupported =
            scale * std::exp(-decay.lambda * t_top) * -std::expm1(-decay.lambda * (t_bottom - t_top));
        const double r = s.observed - (p_s * s.support_coef + unsupported);
        total -= r * r * s.inv_two_var;
    }
    for (const auto& y : supported) {
        const double r = y.value - p_s;
        total -= r * r / (2.0 * y.sigma * y.sigma);
    }
    return total;
}

double prior_kernel(double phi, double p_s, double omega, std::span<const double> alpha,
                    const PriorConfig& cfg) {
    double total = gamma_log_pdf(phi, cfg.phi_shape, cfg.phi_mean) +
                   gamma_log_pdf(p_s, cfg.ps_shape, cfg.ps_mean) +
                   beta_log_pdf(omega, cfg.omega_a, cfg.omega_b);
    // sum of Gamma(a, rate b) log-densities with the constant hoisted
    const double a = cfg.alpha_shape;
    const double b = a / cfg.alpha_mean;
    double sum_log = 0.0;
    double sum = 0.0;
    for (double v : alpha) {
        sum_log += std::log(v);
        sum += v;
    }
    const double k = static_cast<double>(alpha.size());
    total += k * (a * std::log(b) - std::lgamma(a)) + (a - 1.0) * sum_log - b * sum;
    return total;
}

bool ranges_ok(double phi, double p_s, double omega, std::span<const double> alpha) {
    if (!(phi > 0.0) || !(p_s > 0.0) || !std::isfinite(phi) || !std::isfinite(p_s)) return false;
    if (!(omega > 0.0 && omega < 1.0)) return false;
    for (double v : alpha) {
        if (!(v > 0.0) || !std::isfinite(v)) return false;
    }
    return true;
}

// Age ceiling for a given supply, or a negative value when a_l leaves no
// datable interval at all.
double limit_or_negative(double phi, double a_l) {
    const DecayConstants decay;
    const double top = decay.one_year_fraction() * phi;
    if (a_l >= top) return -1.0;
    return std::log(top / a_l) / decay.lambda;
}

bool support_kernel(double phi, double p_s, double omega, std::span<const double> alpha,
                    const SectionGrid& grid, const PriorConfig& cfg, double limit_depth,
                    std::span<const double> slopes, std::span<const double> cumulative) {
    if (!ranges_ok(phi, p_s, omega, alpha)) return false;
    const double t_l = limit_or_negative(phi, cfg.a_l);
    if (t_l < 0.0) return false;
    return age_at(grid, slopes, cumulative, limit_depth) <= t_l;
}

struct Scratch {
    std::vector<double> slopes;
    std::vector<double> cumulative;

    void build(std::span<const double> alpha, double omega, SlopeRecursion recursion) {
        slopes.resize(alpha.size());
        cumulative.resize(alpha.size() + 1);
        slopes_from_innovations(alpha, omega, recursion, slopes);
        prefix_sums(slopes, cumulative);
    }
};

void check_covered(const CoreDataset& ds, const SectionGrid& grid) {
    if (!ds.measurements.empty() && ds.deepest() > grid.extent()) {
        throw std::out_of_range("measurement at " + std::to_string(ds.deepest()) +
                                " cm lies below the grid extent " + std::to_string(grid.extent()));
    }
}

void check_dimension(const PlumParameters& params, const SectionGrid& grid) {
    if (params.alpha.size() != grid.sections()) {
        throw std::invalid_argument("parameter vector has " + std::to_string(params.alpha.size()) +
                                    " innovations for a grid of " +
                                    std::to_string(grid.sections()) + " sections");
    }
}

}  // namespace

std::vector<double> PlumParameters::flatten() const {
    std::vector<double> x{phi, p_s, omega};
    x.insert(x.end(), alpha.begin(), alpha.end());
    return x;
}

PlumParameters PlumParameters::unflatten(std::span<const double> x) {
    if (x.size() <= kFixed) throw std::invalid_argument("flat parameter vector too short");
    return {x[0], x[1], x[2], std::vector<double>(x.begin() + kFixed, x.end())};
}

void PriorConfig::validate() const {
    const std::pair<const char*, double> checks[] = {
        {"phi_shape", phi_shape},     {"phi_mean", phi_mean},     {"ps_shape", ps_shape},
        {"ps_mean", ps_mean},         {"omega_a", omega_a},       {"omega_b", omega_b},
        {"alpha_shape", alpha_shape}, {"alpha_mean", alpha_mean}, {"a_l", a_l}};
    for (const auto& [name, value] : checks) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw InputError(std::string("prior setting ") + name + " must be positive");
        }
    }
}

double gamma_log_pdf(double x, double shape, double mean) {
    if (!(x > 0.0)) return -kInf;
    const double rate = shape / mean;
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double beta_log_pdf(double x, double a, double b) {
    if (!(x > 0.0 && x < 1.0)) return -kInf;
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * std::log(x) +
           (b - 1.0) * std::log1p(-x);
}

double log_likelihood(const PlumParameters& params, const CoreDataset& ds, const SectionGrid& grid,
                      SlopeRecursion recursion) {
    check_dimension(params, grid);
    check_covered(ds, grid);
    std::vector<Slice> slices;
    slices.reserve(ds.measurements.size());
    for (const auto& m : ds.measurements) slices.push_back(make_slice(m));
    Scratch s;
    s.build(params.alpha, params.omega, recursion);
    return likelihood_kernel(params.phi, params.p_s, grid, s.slopes, s.cumulative, slices,
                             ds.supported);
}

double log_prior(const PlumParameters& params, const PriorConfig& cfg) {
    return prior_kernel(params.phi, params.p_s, params.omega, params.alpha, cfg);
}

bool in_support(const PlumParameters& params, const SectionGrid& grid, const PriorConfig& cfg,
                std::optional<double> limit_depth) {
    if (params.alpha.size() != grid.sections()) return false;
    if (!ranges_ok(params.phi, params.p_s, params.omega, params.alpha)) return false;
    Scratch s;
    s.build(params.alpha, params.omega, cfg.recursion);
    return support_kernel(params.phi, params.p_s, params.omega, params.alpha, grid, cfg,
                          limit_depth.value_or(grid.extent()), s.slopes, s.cumulative);
}

double energy(const PlumParameters& params, const CoreDataset& ds, const SectionGrid& grid,
              const PriorConfig& cfg, std::optional<double> limit_depth) {
    if (!in_support(params, grid, cfg, limit_depth)) return kInf;
    check_covered(ds, grid);
    std::vector<Slice> slices;
    for (const auto& m : ds.measurements) slices.push_back(make_slice(m));
    Scratch s;
    s.build(params.alpha, params.omega, cfg.recursion);
    const double ll = likelihood_kernel(params.phi, params.p_s, grid, s.slopes, s.cumulative,
                                        slices, ds.supported);
    return -(ll + log_prior(params, cfg));
}

PlumModel::PlumModel(CoreDataset chronology, SectionGrid grid, PriorConfig prior,
                     std::optional<double> limit_depth)
    : data_(std::move(chronology)), grid_(grid), prior_(prior), limit_depth_(0.0) {
    prior_.validate();
    validate(data_);
    if (data_.supported.empty()) {
        throw InputError("the Bayesian model needs at least one supported-activity datum");
    }
    check_covered(data_, grid_);
    limit_depth_ = limit_depth.value_or(data_.deepest());
    if (!(limit_depth_ > 0.0 && limit_depth_ <= grid_.extent())) {
        throw InputError("chronology limit depth must lie within the modelled range");
    }
    for (const auto& m : data_.measurements) {
        const auto s = make_slice(m);
        slices_.push_back({s.top, s.bottom, s.observed, s.inv_two_var, s.support_coef});
    }
}

bool PlumModel::in_support(std::span<const double> x) const {
    if (x.size() != dimension()) return false;
    const auto alpha = x.subspan(PlumParameters::kFixed);
    if (!ranges_ok(x[0], x[1], x[2], alpha)) return false;
    thread_local Scratch s;
    s.build(alpha, x[2], prior_.recursion);
    return support_kernel(x[0], x[1], x[2], alpha, grid_, prior_, limit_depth_, s.slopes,
                          s.cumulative);
}

double PlumModel::log_likelihood(std::span<const double> x, std::span<const double> slopes,
                                 std::span<const double> cumulative) const {
    return likelihood_kernel(x[0], x[1], grid_, slopes, cumulative, slices_, data_.supported);
}

double PlumModel::energy(std::span<const double> x) const {
    if (x.size() != dimension()) return kInf;
    const auto alpha = x.subspan(PlumParameters::kFixed);
    if (!ranges_ok(x[0], x[1], x[2], alpha)) return kInf;
    thread_local Scratch s;
    s.build(alpha, x[2], prior_.recursion);
    if (!support_kernel(x[0], x[1], x[2], alpha, grid_, prior_, limit_depth_, s.slopes,
                        s.cumulative)) {
        return kInf;
    }
    return -(log_likelihood(x, s.slopes, s.cumulative) +
             prior_kernel(x[0], x[1], x[2], alpha, prior_));
}

}  // namespace plum
