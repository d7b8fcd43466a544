#include "plum/plum_sampler.hpp"

#include <string>

#include "plum/error.hpp"

namespace plum {

namespace {

std::vector<double> draw_from_prior(const PlumModel& model, std::mt19937_64& rng) {
    const auto& p = model.prior();
    auto gamma = [&](double shape, double mean) {
        return std::gamma_distribution<double>(shape, mean / shape)(rng);
    };
    std::vector<double> x(model.dimension());
    x[0] = gamma(p.phi_shape, p.phi_mean);
    x[1] = gamma(p.ps_shape, p.ps_mean);
    const double a = gamma(p.omega_a, p.omega_a);
    const double b = gamma(p.omega_b, p.omega_b);
    x[2] = a / (a + b);
    for (std::size_t j = PlumParameters::kFixed; j < x.size(); ++j) {
        x[j] = gamma(p.alpha_shape, p.alpha_mean);
    }
    return x;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> initial_points(const PlumModel& model,
                                                                   std::mt19937_64& rng,
                                                                   std::size_t max_tries) {
    auto one = [&](const std::vector<double>* other) {
        for (std::size_t t = 0; t < max_tries; ++t) {
            auto x = draw_from_prior(model, rng);
            if (model.in_support(x) && (!other || x != *other)) return x;
        }
        throw InfeasibleError("no prior draw satisfied the support constraints after " +
                              std::to_string(max_tries) +
                              " tries; the detection threshold a_l may be too large");
    };
    auto x0 = one(nullptr);
    auto x1 = one(&x0);
    return {std::move(x0), std::move(x1)};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finaliser over the combined value
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Chain sample_posterior(const PlumModel& model, std::size_t n_iter, std::uint64_t seed,
                       const TwalkOptions& options) {
    std::mt19937_64 init_rng(derive_seed(seed, 1));
    auto [x0, x1] = initial_points(model, init_rng);
    return run_twalk([&model](std::span<const double> x) { return model.energy(x); },
                     [&model](std::span<const double> x) { return model.in_support(x); },
                     std::move(x0), std::move(x1), n_iter, derive_seed(seed, 2), options);
}

}  // namespace plum
