#include "drank/assessment.hpp"
#include "drank/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace drank;
using namespace drank::assessment;
using powerlaw::PowerLawFit;

namespace {

bool rel_close(double a, double b, double tol)
{
    return std::fabs(a - b) <= tol * std::fabs(b);
}

const PowerLawFit kUsChem = PowerLawFit::from_parameters(376.42, 0.8522);
const PowerLawFit kEuChem = PowerLawFit::from_parameters(272.83, 1.0689);
const PowerLawFit kUsPhys = PowerLawFit::from_parameters(330.94, 0.8859);
const PowerLawFit kEuPhys = PowerLawFit::from_parameters(301.23, 1.0217);

} // namespace

TEST_CASE("rank-1 percentile")
{
    CHECK(std::fabs(rank1_percentile(17501) - 0.005714) <= 1e-6);
    CHECK(rank1_percentile(100) == 1.0);
    CHECK(rank1_percentile(1) == 100.0);
    CHECK_THROWS_AS(rank1_percentile(0), DomainError);
    CHECK_THROWS_AS(rank1_percentile(-3), DomainError);
    for (std::int64_t n : {1, 3, 7, 17501, 123456789}) {
        CHECK(std::fabs(rank1_percentile(n) * static_cast<double>(n) - 100.0) <= 1e-12 * 100.0);
    }
}

TEST_CASE("likelihood of the most cited paper")
{
    const double x = rank1_percentile(17501);
    CHECK(rel_close(likelihood_at(PowerLawFit::from_parameters(7.84, 0.99), x).value, 0.0472, 0.005));
    CHECK(rel_close(likelihood_at(PowerLawFit::from_parameters(2.12, 1.26), x).value, 0.00316, 0.005));
    // Brazil.
    CHECK(rel_close(likelihood_at(PowerLawFit::from_parameters(2.73, 1.74), x).value, 3.41e-4, 0.01));
    CHECK(likelihood_at(kUsChem, 1.0).value == 376.42);
    CHECK_THROWS_AS(likelihood_at(kUsChem, 0.0), DomainError);

    const auto ranged = powerlaw::fit_loglog(
        PercentileCurve({{100, 200}, {10, 20}, {1, 2}}), powerlaw::FitRange(100, 1));
    CHECK(likelihood_at(ranged, x).extrapolated);
    CHECK_FALSE(likelihood_at(ranged, 5).extrapolated);
}

TEST_CASE("Nobel-level percentile")
{
    CHECK(std::fabs(nobel_percentile(kUsChem, kNobelPerYearChemistry) - 0.001061) <= 1e-5);
    CHECK(std::fabs(nobel_percentile(kUsPhys, kNobelPerYearPhysics) - 0.001272) <= 1e-5);
    CHECK(nobel_percentile(PowerLawFit::from_parameters(1, 1), 1) == 1.0);
    CHECK_THROWS_AS(nobel_percentile(kUsChem, 0), DomainError);
}

TEST_CASE("performance ratio")
{
    const auto chem = performance_ratio(kUsChem, kEuChem, 0.00101);
    CHECK(rel_close(chem.ratio, 6.16, 0.01));
    CHECK(chem.percentile == 0.00101);
    CHECK(chem.ratio == doctest::Approx(chem.actor_value / chem.reference_value).epsilon(1e-15));
    CHECK(rel_close(performance_ratio(kUsPhys, kEuPhys, 0.00127).ratio, 2.72, 0.01));
    CHECK(performance_ratio(kUsPhys, kUsPhys, 0.37).ratio == 1.0);
    CHECK_THROWS_AS(performance_ratio(kUsPhys, kEuPhys, 0.0), DomainError);
}

TEST_CASE("log ratio is affine in log x")
{
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> lx(-6, 2);
    const double at_one = performance_ratio(kUsChem, kEuChem, 1.0).ratio;
    CHECK(rel_close(at_one, 376.42 / 272.83, 1e-15));
    for (int i = 0; i < 1000; ++i) {
        const double x = std::pow(10.0, lx(rng));
        const double expected = std::log(376.42 / 272.83) + (0.8522 - 1.0689) * std::log(x);
        REQUIRE(std::fabs(std::log(performance_ratio(kUsChem, kEuChem, x).ratio) - expected) <= 1e-12);
    }
}

TEST_CASE("Nobel percentile and likelihood round trip")
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> a_d(0.1, 1e5);
    std::uniform_real_distribution<double> alpha_d(0.4, 1.8);
    std::uniform_real_distribution<double> c_d(0.01, 50);
    for (int i = 0; i < 1000; ++i) {
        const auto f = PowerLawFit::from_parameters(a_d(rng), alpha_d(rng));
        const double c = c_d(rng);
        REQUIRE(rel_close(likelihood_at(f, nobel_percentile(f, c)).value, c, 1e-9));
    }
}

TEST_CASE("crossing of two power laws")
{
    const auto circles = PowerLawFit::from_parameters(1.27, 1.295);
    const auto squares = PowerLawFit::from_parameters(1.0, 1.0);
    const double xc = crossing_percentile(circles, squares);
    CHECK(rel_close(xc, std::pow(1 / 1.27, 1 / 0.295), 1e-12));
    CHECK(std::fabs(xc - 0.44) <= 0.01);
    CHECK(crossing_percentile(squares, circles) == doctest::Approx(xc).epsilon(1e-12));
    for (double f : {1.01, 2.0, 50.0}) {
        CHECK(powerlaw::evaluate(circles, xc * f).value > powerlaw::evaluate(squares, xc * f).value);
        CHECK(powerlaw::evaluate(circles, xc / f).value < powerlaw::evaluate(squares, xc / f).value);
    }
    CHECK_THROWS_AS(crossing_percentile(squares, PowerLawFit::from_parameters(2, 1)), DomainError);
}
