#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "plum/inference.hpp"
#include "plum/twalk.hpp"

namespace plum {

/// Two distinct in-support starting points drawn from the priors. Each is
/// redrawn until PlumModel::in_support accepts it; InfeasibleError after
/// `max_tries` failures (usually a_l too large for the prior on phi).
std::pair<std::vector<double>, std::vector<double>> initial_points(const PlumModel& model,
                                                                   std::mt19937_64& rng,
                                                                   std::size_t max_tries = 100000);

/// Derives an independent sub-seed for stream `stream` from a run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Starting points from derive_seed(seed, 1), t-walk from derive_seed(seed, 2).
Chain sample_posterior(const PlumModel& model, std::size_t n_iter, std::uint64_t seed,
                       const TwalkOptions& options = {});

}  // namespace plum
