#include <doctest.h>

#include <algorithm>
#include <random>

#include "plum/stats.hpp"
#include "plum/summary.hpp"

using namespace plum;

namespace {

PosteriorEnsemble constant_slopes(std::vector<double> slopes, std::size_t k) {
    std::vector<PlumParameters> draws;
    std::vector<double> energies;
    for (double s : slopes) {
        draws.push_back({100, 20, 0.0, std::vector<double>(k, s)});
        energies.push_back(1.0);
    }
    return PosteriorEnsemble(SectionGrid(1.0, k), SlopeRecursion::FromBottom, draws, energies);
}

std::vector<double> ar1(double rho, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0, 1);
    std::vector<double> x(n);
    x[0] = z(rng);
    for (std::size_t i = 1; i < n; ++i) x[i] = rho * x[i - 1] + std::sqrt(1 - rho * rho) * z(rng);
    return x;
}

}  // namespace

TEST_CASE("quantiles interpolate between order statistics") {
    const std::vector<double> v{10, 30};
    CHECK(quantile(v, 0.025) == doctest::Approx(10.5));
    CHECK(quantile(v, 0.975) == doctest::Approx(29.5));
    const std::vector<double> w{4, 1, 3, 2, 5};
    CHECK(quantile(w, 0.0) == 1);
    CHECK(quantile(w, 1.0) == 5);
    CHECK(quantile(w, 0.5) == 3);
    CHECK(quantile(w, 0.1) == doctest::Approx(1.4));
    CHECK(mean(w) == 3);
    CHECK(sample_sd(w) == doctest::Approx(std::sqrt(2.5)));
    CHECK(sample_sd(std::vector<double>{1}) == 0);
    const auto s = summarize_sample(w);
    CHECK(s.lo == doctest::Approx(1.1));
    CHECK(s.hi == doctest::Approx(4.9));
}

TEST_CASE("summaries of degenerate and two-draw ensembles") {
    SUBCASE("identical draws") {
        const auto ens = constant_slopes({2.5, 2.5, 2.5}, 10);
        const auto s = summarize(ens, depth_grid(0, 10, 0.5));
        for (const auto& r : s.records) {
            CHECK(r.lo95 == r.mean);
            CHECK(r.hi95 == r.mean);
        }
        CHECK(s.phi.lo95 == s.phi.hi95);
    }
    SUBCASE("slopes 1 and 3") {
        const auto ens = constant_slopes({1.0, 3.0}, 12);
        const std::vector<double> depths{0.0, 10.0};
        const auto s = summarize(ens, depths);
        CHECK(s.records[0].mean == 0);
        CHECK(s.records[0].lo95 == 0);
        CHECK(s.records[0].hi95 == 0);
        CHECK(s.records[1].mean == doctest::Approx(20));
        CHECK(s.records[1].lo95 == doctest::Approx(10.5));
        CHECK(s.records[1].hi95 == doctest::Approx(29.5));
    }
    SUBCASE("errors") {
        const auto ens = constant_slopes({1.0, 3.0}, 12);
        CHECK_THROWS_AS(summarize(ens, std::vector<double>{12.5}), std::out_of_range);
        const PosteriorEnsemble empty(SectionGrid(1.0, 2), SlopeRecursion::FromBottom, {}, {});
        CHECK_THROWS_AS(summarize(empty, std::vector<double>{1.0}), std::invalid_argument);
    }
}

TEST_CASE("summary is order-invariant and the mean curve is monotone") {
    std::mt19937_64 rng(3);
    std::gamma_distribution<double> g(1.5, 10.0 / 1.5);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::vector<PlumParameters> draws;
    std::vector<double> energies;
    for (int i = 0; i < 300; ++i) {
        PlumParameters p{100.0 + i, 20, u(rng), {}};
        for (int j = 0; j < 8; ++j) p.alpha.push_back(g(rng));
        draws.push_back(p);
        energies.push_back(i);
    }
    const auto depths = depth_grid(0, 8, 0.25);
    const PosteriorEnsemble a(SectionGrid(1.0, 8), SlopeRecursion::FromBottom, draws, energies);
    std::shuffle(draws.begin(), draws.end(), rng);
    const PosteriorEnsemble b(SectionGrid(1.0, 8), SlopeRecursion::FromBottom, draws, energies);
    const auto sa = summarize(a, depths), sb = summarize(b, depths);
    for (std::size_t i = 0; i < depths.size(); ++i) {
        CHECK(sa.records[i].mean == doctest::Approx(sb.records[i].mean).epsilon(1e-12));
        CHECK(sa.records[i].lo95 == sb.records[i].lo95);
        CHECK(sa.records[i].hi95 == sb.records[i].hi95);
        CHECK(sa.records[i].lo95 <= sa.records[i].mean);
        CHECK(sa.records[i].mean <= sa.records[i].hi95);
        if (i > 0) CHECK(sa.records[i].mean > sa.records[i - 1].mean);
    }
    CHECK(sa.phi.mean == doctest::Approx(249.5));
}

TEST_CASE("integrated autocorrelation time") {
    SUBCASE("white noise") {
        const auto x = ar1(0.0, 50000, 1);
        CHECK(integrated_autocorrelation_time(x).iat == doctest::Approx(1.0).epsilon(0.2));
    }
    SUBCASE("AR(1) with coefficient 0.9") {
        const auto x = ar1(0.9, 200000, 2);
        CHECK(integrated_autocorrelation_time(x).iat == doctest::Approx(19.0).epsilon(0.25));
    }
    SUBCASE("constant chain") {
        const std::vector<double> x(500, 3.0);
        const auto est = integrated_autocorrelation_time(x);
        CHECK(est.degenerate);
        CHECK(est.iat == 500);
    }
    SUBCASE("too short") { CHECK_THROWS(integrated_autocorrelation_time(std::vector<double>{1.0})); }
}

TEST_CASE("diagnostics over an ensemble") {
    const auto few = constant_slopes(std::vector<double>(50, 2.0), 4);
    CHECK_THROWS_AS(diagnostics(few), std::invalid_argument);
    const auto many = constant_slopes(std::vector<double>(200, 2.0), 4);
    const auto d = diagnostics(many);
    CHECK(d.names.size() == 7);
    CHECK(d.names[0] == "phi");
    CHECK(d.names[3] == "alpha_1");
    CHECK(d.ess[0] == doctest::Approx(1.0));
    CHECK_FALSE(d.warnings.empty());
}

TEST_CASE("CSV serialisation") {
    const auto ens = constant_slopes({1.0, 3.0}, 2);
    const auto draws = draws_csv(ens);
    CHECK(draws.rfind("phi,p_s,omega,alpha_1,alpha_2,energy\n", 0) == 0);
    CHECK(draws.find("100,20,0,1,1,1\n") != std::string::npos);
    const std::vector<AgeRecord> recs{{1, 2, 1.5, 2.5}};
    CHECK(chronology_csv(recs) == "depth,mean,lo95,hi95\n1,2,1.5,2.5\n");
}

TEST_CASE("depth grids") {
    CHECK(depth_grid(0, 2, 0.5) == std::vector<double>{0, 0.5, 1, 1.5, 2});
    CHECK(depth_grid(0, 0.3, 0.1).size() == 4);
    CHECK(depth_grid(1, 1, 1) == std::vector<double>{1});
    CHECK_THROWS(depth_grid(0, 1, 0));
    CHECK_THROWS(depth_grid(2, 1, 1));
}
