#include "plum/twalk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace plum {

namespace {

// Published t-walk constants.
constexpr double kWalkScale = 1.5;      // a_w
constexpr double kTraverseScale = 6.0;  // a_t
constexpr double kExpectedMoved = 4.0;  // n_1, coordinates moved on average
constexpr std::array<double, 4> kMoveCdf = {0.4918, 0.9836, 0.9918, 1.0};

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

enum Move { kTraverse = 0, kWalk = 1, kBlow = 2, kHop = 3 };

class Walker {
public:
    Walker(const EnergyFn& energy, const SupportFn& support, std::size_t n, std::uint64_t seed)
        : energy_(energy),
          support_(support),
          n_(n),
          p_move_(std::min<double>(static_cast<double>(n), kExpectedMoved) / static_cast<double>(n)),
          rng_(seed),
          mask_(n),
          proposal_(n) {}

    double eval(std::span<const double> x) {
        if (!support_(x)) return kInf;
        const double u = energy_(x);
        if (std::isnan(u)) {
            std::string where;
            for (std::size_t i = 0; i < x.size() && i < 8; ++i) {
                where += (i ? ", " : "") + std::to_string(x[i]);
            }
            throw std::runtime_error("energy returned NaN at (" + where +
                                     (x.size() > 8 ? ", ..." : "") + ")");
        }
        return u;
    }

    /// One iteration. Moves either `x` or `xp` (chosen at random) and
    /// returns the move used and whether the proposal was accepted.
    std::pair<Move, bool> step(std::vector<double>& x, double& ux, std::vector<double>& xp,
                               double& uxp) {
        const double pick = uniform();
        Move move = kHop;
        for (int m = 0; m < 4; ++m) {
            if (pick < kMoveCdf[m]) {
                move = static_cast<Move>(m);
                break;
            }
        }
        // Move one walker relative to the other; the roles are symmetric.
        if (uniform() < 0.5) return {move, propose(move, xp, uxp, x)};
        return {move, propose(move, x, ux, xp)};
    }

private:
    double uniform() {
        double u;
        do {
            u = unif_(rng_);
        } while (u == 0.0);
        return u;
    }

    std::size_t draw_mask() {
        std::size_t count = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            mask_[i] = uniform() < p_move_;
            count += mask_[i];
        }
        return count;
    }

    double traverse_beta() {
        const double at = kTraverseScale;
        if (uniform() < (at - 1.0) / (2.0 * at)) return std::pow(uniform(), 1.0 / (at + 1.0));
        return std::pow(uniform(), 1.0 / (1.0 - at));
    }

    double walk_step() {
        const double u = uniform();
        const double aw = kWalkScale;
        return aw / (1.0 + aw) * (aw * u * u + 2.0 * u - 1.0);
    }

    double masked_max_gap(std::span<const double> a, std::span<const double> b) const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (mask_[i]) s = std::max(s, std::abs(a[i] - b[i]));
        }
        return s;
    }

    // -log of a product of N(h_i; centre_i, sigma^2) over the masked coordinates.
    double neg_log_gauss(std::span<const double> h, std::span<const double> centre, double sigma,
                         std::size_t count) const {
        double ss = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (mask_[i]) ss += (h[i] - centre[i]) * (h[i] - centre[i]);
        }
        const double k = static_cast<double>(count);
        return 0.5 * k * kLog2Pi + k * std::log(sigma) + 0.5 * ss / (sigma * sigma);
    }

    bool all_differ(std::span<const double> a, std::span<const double> b) const {
        for (std::size_t i = 0; i < n_; ++i) {
            if (a[i] == b[i]) return false;
        }
        return true;
    }

    bool accept(double log_ratio) { return log_ratio >= 0.0 || std::log(uniform()) < log_ratio; }

    /// Proposes a replacement for `moving` given the fixed walker `other`.
    bool propose(Move move, std::vector<double>& moving, double& u_moving,
                 const std::vector<double>& other) {
        auto& y = proposal_;
        const std::size_t count = draw_mask();
        if (count == 0) return true;  // null move

        double log_correction = 0.0;
        switch (move) {
        case kTraverse: {
            const double beta = traverse_beta();
            for (std::size_t i = 0; i < n_; ++i) {
                y[i] = mask_[i] ? other[i] + beta * (other[i] - moving[i]) : moving[i];
            }
            log_correction = (static_cast<double>(count) - 2.0) * std::log(beta);
            break;
        }
        case kWalk: {
            for (std::size_t i = 0; i < n_; ++i) {
                y[i] = mask_[i] ? moving[i] + (moving[i] - other[i]) * walk_step() : moving[i];
            }
            if (!all_differ(y, other)) return false;
            break;
        }
        case kBlow: {
            const double sigma = masked_max_gap(other, moving);
            if (!(sigma > 0.0)) return false;
            for (std::size_t i = 0; i < n_; ++i) {
                y[i] = mask_[i] ? other[i] + sigma * normal_(rng_) : moving[i];
            }
            if (!all_differ(y, other)) return false;
            const double back_sigma = masked_max_gap(other, y);
            if (!(back_sigma > 0.0)) return false;
            log_correction = neg_log_gauss(y, other, sigma, count) -
                             neg_log_gauss(moving, other, back_sigma, count);
            break;
        }
        case kHop: {
            const double sigma = masked_max_gap(other, moving) / 3.0;
            if (!(sigma > 0.0)) return false;
            for (std::size_t i = 0; i < n_; ++i) {
                y[i] = mask_[i] ? moving[i] + sigma * normal_(rng_) : moving[i];
            }
            if (!all_differ(y, other)) return false;
            const double back_sigma = masked_max_gap(other, y) / 3.0;
            if (!(back_sigma > 0.0)) return false;
            log_correction = neg_log_gauss(y, moving, sigma, count) -
                             neg_log_gauss(moving, y, back_sigma, count);
            break;
        }
        }

        const double u_new = eval(y);
        if (!std::isfinite(u_new)) return false;
        if (!accept(u_moving - u_new + log_correction)) return false;
        std::copy(y.begin(), y.end(), moving.begin());
        u_moving = u_new;
        return true;
    }

    const EnergyFn& energy_;
    const SupportFn& support_;
    std::size_t n_;
    double p_move_;
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::vector<char> mask_;
    std::vector<double> proposal_;
};

}  // namespace

std::vector<double> Chain::coordinate(std::size_t j) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = draws[i * dimension + j];
    return out;
}

Chain run_twalk(const EnergyFn& energy, const SupportFn& support, std::vector<double> x0,
                std::vector<double> x1, std::size_t n_iter, std::uint64_t seed,
                const TwalkOptions& options) {
    const std::size_t n = x0.size();
    if (n == 0 || x1.size() != n) throw std::invalid_argument("starting points must share a dimension");
    if (n_iter == 0) throw std::invalid_argument("need at least one iteration");
    if (x0 == x1) throw std::invalid_argument("starting points must differ in some coordinate");
    if (!(options.burn_in_fraction >= 0.0 && options.burn_in_fraction < 1.0)) {
        throw std::invalid_argument("burn-in fraction must lie in [0, 1)");
    }

    Walker walker(energy, support, n, seed);
    double u0 = walker.eval(x0);
    double u1 = walker.eval(x1);
    if (!std::isfinite(u0) || !std::isfinite(u1)) {
        throw std::invalid_argument("starting points must lie in the support");
    }

    Chain chain;
    chain.dimension = n;
    chain.seed = seed;
    chain.iterations = n_iter;
    chain.burn_in = static_cast<std::size_t>(options.burn_in_fraction * static_cast<double>(n_iter));
    chain.thin = options.thin == 0 ? n : options.thin;
    const std::size_t kept = (n_iter - chain.burn_in + chain.thin - 1) / chain.thin;
    chain.draws.reserve(kept * n);
    chain.energies.reserve(kept);

    std::size_t accepted = 0;
    for (std::size_t it = 0; it < n_iter; ++it) {
        const auto [move, ok] = walker.step(x0, u0, x1, u1);
        ++chain.proposed[move];
        if (ok) {
            ++chain.accepted[move];
            ++accepted;
        }
        if (it >= chain.burn_in && (it - chain.burn_in) % chain.thin == 0) {
            chain.draws.insert(chain.draws.end(), x0.begin(), x0.end());
            chain.energies.push_back(u0);
        }
    }
    chain.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(n_iter);
    return chain;
}

}  // namespace plum
