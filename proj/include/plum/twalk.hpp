#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace plum {

using EnergyFn = std::function<double(std::span<const double>)>;
using SupportFn = std::function<bool(std::span<const double>)>;

struct TwalkOptions {
    double burn_in_fraction = 0.2;  // leading share of iterations discarded
    std::size_t thin = 0;           // keep every thin-th draw; 0 means the dimension
};

/// Stored output of one t-walk run. Draws are row-major, one row per kept
/// iteration, taken from the primary walker.
struct Chain {
    std::size_t dimension = 0;
    std::vector<double> draws;
    std::vector<double> energies;
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
    std::size_t burn_in = 0;
    std::size_t thin = 1;
    double acceptance_rate = 0.0;
    /// Proposals and acceptances per move: traverse, walk, blow, hop.
    std::array<std::size_t, 4> proposed{};
    std::array<std::size_t, 4> accepted{};

    std::size_t size() const { return energies.size(); }
    std::span<const double> draw(std::size_t i) const {
        return {draws.data() + i * dimension, dimension};
    }
    /// Copy of coordinate `j` across all stored draws.
    std::vector<double> coordinate(std::size_t j) const;
};

/// Runs the t-walk of Christen and Fox (2010) on exp(-energy). The sampler
/// keeps two walkers and picks one of four moves each iteration (traverse
/// and walk 49.18% each, blow and hop 0.82% each), moving about four
/// coordinates at a time. Tuning constants are fixed. Deterministic given
/// the seed. Throws std::invalid_argument for bad starting points and
/// std::runtime_error if the energy returns NaN.
Chain run_twalk(const EnergyFn& energy, const SupportFn& support, std::vector<double> x0,
                std::vector<double> x1, std::size_t n_iter, std::uint64_t seed,
                const TwalkOptions& options = {});

}  // namespace plum
