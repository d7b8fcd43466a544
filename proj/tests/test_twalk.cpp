#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "plum/error.hpp"
#include "plum/plum_sampler.hpp"
#include "plum/stats.hpp"
#include "plum/twalk.hpp"

using namespace plum;

namespace {

double gaussian(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return 0.5 * s;
}

bool everywhere(std::span<const double>) { return true; }

// Two-sample-free KS statistic against U(lo, hi).
double ks_uniform(std::vector<double> v, double lo, double hi) {
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = (v[i] - lo) / (hi - lo);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

}  // namespace

TEST_CASE("five-dimensional standard Gaussian") {
    const std::vector<double> x0(5, 0.5), x1(5, -0.5);
    const auto chain = run_twalk(gaussian, everywhere, x0, x1, 200000, 42, {0.2, 1});
    REQUIRE(chain.size() == 160000);
    for (std::size_t j = 0; j < 5; ++j) {
        const auto c = chain.coordinate(j);
        const double m = mean(c);
        const double sd = sample_sd(c);
        CHECK(std::abs(m) < 0.05);
        CHECK(std::abs(sd * sd - 1.0) < 0.1);
    }
    CHECK(chain.acceptance_rate > 0.05);
    CHECK(chain.acceptance_rate < 0.95);
    std::size_t proposed = 0;
    for (auto p : chain.proposed) proposed += p;
    CHECK(proposed == chain.iterations);
    for (std::size_t m = 0; m < 4; ++m) CHECK(chain.accepted[m] <= chain.proposed[m]);
}

TEST_CASE("same seed, same chain") {
    const std::vector<double> x0(5, 0.5), x1(5, -0.5);
    const auto a = run_twalk(gaussian, everywhere, x0, x1, 20000, 7);
    const auto b = run_twalk(gaussian, everywhere, x0, x1, 20000, 7);
    const auto c = run_twalk(gaussian, everywhere, x0, x1, 20000, 8);
    CHECK(a.draws == b.draws);
    CHECK(a.energies == b.energies);
    CHECK(a.accepted == b.accepted);
    CHECK(a.draws != c.draws);
}

TEST_CASE("burn-in and thinning bookkeeping") {
    const std::vector<double> x0(3, 0.5), x1(3, -0.5);
    const auto chain = run_twalk(gaussian, everywhere, x0, x1, 1000, 1);
    CHECK(chain.burn_in == 200);
    CHECK(chain.thin == 3);
    CHECK(chain.size() == 267);
    CHECK(chain.draws.size() == chain.size() * 3);
    const auto kept_all = run_twalk(gaussian, everywhere, x0, x1, 10, 1, {0.0, 1});
    CHECK(kept_all.size() == 10);
}

TEST_CASE("uniform target on a box") {
    const auto inside = [](std::span<const double> x) {
        return x[0] >= 0.0 && x[0] <= 1.0 && x[1] >= -2.0 && x[1] <= 3.0;
    };
    const auto chain = run_twalk([](std::span<const double>) { return 0.0; }, inside,
                                 {0.2, 0.0}, {0.7, 1.0}, 400000, 3, {0.1, 200});
    // 1% critical value of the one-sample KS statistic
    const double crit = 1.628 / std::sqrt(static_cast<double>(chain.size()));
    CHECK(ks_uniform(chain.coordinate(0), 0.0, 1.0) < crit);
    CHECK(ks_uniform(chain.coordinate(1), -2.0, 3.0) < crit);
    for (std::size_t i = 0; i < chain.size(); ++i) CHECK(inside(chain.draw(i)));
}

TEST_CASE("step double well occupancy follows exp(-dU)") {
    // U = 0 on [-1, 0), 1 on [0, 1]
    const auto u = [](std::span<const double> x) { return x[0] < 0.0 ? 0.0 : 1.0; };
    const auto inside = [](std::span<const double> x) { return x[0] >= -1.0 && x[0] <= 1.0; };
    const auto chain = run_twalk(u, inside, {-0.5}, {0.5}, 2000000, 5, {0.05, 1});
    std::size_t high = 0;
    for (double e : chain.energies) high += e > 0.5;
    const double ratio = static_cast<double>(high) / static_cast<double>(chain.size() - high);
    CHECK(ratio == doctest::Approx(std::exp(-1.0)).epsilon(0.05));
}

TEST_CASE("out-of-support proposals are never stored") {
    const auto inside = [](std::span<const double> x) { return x[0] > 0.0 && x[1] > 0.0; };
    const auto chain = run_twalk(gaussian, inside, {0.5, 0.5}, {1.0, 0.2}, 50000, 9, {0.0, 1});
    for (std::size_t i = 0; i < chain.size(); ++i) {
        CHECK(inside(chain.draw(i)));
        CHECK(std::isfinite(chain.energies[i]));
    }
}

TEST_CASE("t-walk argument checks") {
    CHECK_THROWS_AS(run_twalk(gaussian, everywhere, {1, 2}, {1, 2}, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_twalk(gaussian, everywhere, {1, 2}, {1}, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_twalk(gaussian, everywhere, {1, 2}, {2, 1}, 0, 1), std::invalid_argument);
    const auto positive = [](std::span<const double> x) { return x[0] > 0.0; };
    CHECK_THROWS_AS(run_twalk(gaussian, positive, {-1, 2}, {2, 1}, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_twalk(gaussian, everywhere, {1, 2}, {2, 1}, 10, 1, {1.0, 1}), std::invalid_argument);
    const auto nan_far = [](std::span<const double> x) { return std::abs(x[0]) > 3.0 ? NAN : 0.0; };
    CHECK_THROWS_AS(run_twalk(nan_far, everywhere, {1, 2}, {2, 1}, 100000, 1), std::runtime_error);
}

TEST_CASE("initial points for the Plum posterior") {
    const auto data = split_supported(fixtures::table2(), 3).chronology;
    const PlumModel model(data, SectionGrid(1.0, 27), PriorConfig{});
    std::mt19937_64 rng(12);
    const auto [x0, x1] = initial_points(model, rng);
    CHECK(x0 != x1);
    CHECK(std::isfinite(model.energy(x0)));
    CHECK(std::isfinite(model.energy(x1)));

    std::mt19937_64 again(12);
    const auto [y0, y1] = initial_points(model, again);
    CHECK(x0 == y0);
    CHECK(x1 == y1);

    PriorConfig impossible;
    impossible.a_l = 1e6;
    const PlumModel infeasible(data, SectionGrid(1.0, 27), impossible);
    CHECK_THROWS_AS(initial_points(infeasible, rng, 500), InfeasibleError);
}

TEST_CASE("derived seeds differ per stream") {
    CHECK(derive_seed(0, 1) != derive_seed(0, 2));
    CHECK(derive_seed(1, 1) != derive_seed(0, 1));
    CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}
