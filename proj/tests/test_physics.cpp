#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "plum/error.hpp"
#include "plum/physics.hpp"

using namespace plum;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50);
}

}  // namespace

TEST_CASE("decay constants") {
    const DecayConstants d;
    CHECK(d.lambda == 0.03114);
    CHECK(d.one_year_fraction() == doctest::Approx(0.9845903662).epsilon(1e-10));
    CHECK(d.one_year_fraction() == doctest::Approx(0.98459).epsilon(1e-5));
    CHECK(std::log(2.0) / d.lambda == doctest::Approx(22.259061675014298));
}

TEST_CASE("unsupported activity examples") {
    CHECK(unsupported_activity(150, 0, 0.8333) == doctest::Approx(123.38719175295728).epsilon(1e-13));
    CHECK(unsupported_activity(150, 5, 5) == 0.0);
    CHECK(unsupported_activity(150, 0, 1e6) == doctest::Approx(4816.955684007707).epsilon(1e-13));
    CHECK(unsupported_activity(150, 0, INFINITY) == doctest::Approx(4816.955684007707).epsilon(1e-13));
    CHECK(unsupported_activity(1, 3, 4) > 0.0);
}

TEST_CASE("unsupported activity rejects bad arguments") {
    CHECK_THROWS_AS(unsupported_activity(150, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(unsupported_activity(0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(unsupported_activity(-5, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(unsupported_activity(150, -1, 1), std::invalid_argument);
}

TEST_CASE("unsupported activity: additivity, linearity and quadrature on random intervals") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> age(0.0, 400.0);
    std::uniform_real_distribution<double> supply(1.0, 500.0);
    const DecayConstants d;
    for (int i = 0; i < 1000; ++i) {
        double a = age(rng), b = age(rng), c = age(rng);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        const double phi = supply(rng);
        const double whole = unsupported_activity(phi, a, c);
        CHECK(whole == doctest::Approx(unsupported_activity(phi, a, b) + unsupported_activity(phi, b, c))
                           .epsilon(1e-10));
        const double k = supply(rng) / 50.0;
        CHECK(unsupported_activity(k * phi, a, c) ==
              doctest::Approx(k * whole).epsilon(1e-12));
        const double quad =
            integrate([&](double t) { return phi * std::exp(-d.lambda * t); }, a, c, 1e-12 * (1.0 + whole));
        CHECK(whole == doctest::Approx(quad).epsilon(1e-8));
    }
}

TEST_CASE("supported activity") {
    CHECK(supported_activity(20, 0.145) == doctest::Approx(2.90));
    CHECK(supported_activity(0, 0.2) == 0.0);
    CHECK(supported_activity(8.8475, 0.045) == doctest::Approx(0.3981).epsilon(1e-4));
    CHECK_THROWS_AS(supported_activity(-1, 0.2), std::invalid_argument);
}

TEST_CASE("chronology limit") {
    CHECK(chronology_limit(50, 0.1) == doctest::Approx(199.07124284668268).epsilon(1e-12));
    CHECK(std::abs(chronology_limit(50, 0.1) - 199.06) < 0.5);
    CHECK(chronology_limit(150, 0.1) == doctest::Approx(234.351).epsilon(1e-5));
    const double at_boundary = DecayConstants{}.one_year_fraction() * 50.0;
    CHECK_THROWS_AS(chronology_limit(50, at_boundary), InfeasibleError);
    CHECK_THROWS_AS(chronology_limit(50, 2 * at_boundary), InfeasibleError);
    CHECK_THROWS_AS(chronology_limit(0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(chronology_limit(50, 0), std::invalid_argument);
    // the approximate form is within half a year
    CHECK(std::abs(chronology_limit(50, 0.1) - std::log(50 / 0.1) / 0.03114) < 0.5);
}

TEST_CASE("chronology limit is monotone in supply and threshold") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> phi(1.0, 400.0), al(1e-4, 0.5);
    for (int i = 0; i < 1000; ++i) {
        const double p = phi(rng), a = al(rng);
        CHECK(chronology_limit(p * 1.01, a) > chronology_limit(p, a));
        CHECK(chronology_limit(p, a * 1.01) < chronology_limit(p, a));
    }
}
