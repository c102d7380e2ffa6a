#include <catch_amalgamated.hpp>

#include <cmath>

#include "debtcrit/asymptotics.hpp"
#include "debtcrit/errors.hpp"
#include "debtcrit/parastat.hpp"
#include "debtcrit/quadrature.hpp"

using namespace debtcrit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("constant integrand") {
    CHECK_THAT(integrate([](double) { return 1.0; }, 0.0, 1.0), WithinAbs(1.0, 1e-15));
}

TEST_CASE("reciprocal over many decades") {
    for (double k : {10.0, 1e4, 1e8}) {
        CHECK_THAT(integrate([](double x) { return 1.0 / x; }, 1.0, k), WithinRel(std::log(k), 1e-10));
    }
}

TEST_CASE("reversed and empty ranges") {
    auto sq = [](double x) { return x * x; };
    CHECK_THAT(integrate(sq, 2.0, 0.0), WithinRel(-8.0 / 3.0, 1e-13));
    CHECK(integrate(sq, 1.0, 1.0) == 0.0);
}

TEST_CASE("peaked integrand") {
    auto gauss = [](double x) { return std::exp(-1e4 * (x - 0.3) * (x - 0.3)); };
    CHECK_THAT(integrate(gauss, 0.0, 1.0), WithinRel(std::sqrt(M_PI / 1e4), 1e-10));
}

TEST_CASE("Euler-Maclaurin corrections approach the sum") {
    auto f = [](double x) { return 1.0 / (x * x); };
    double exact = 0.0;
    for (int j = 5; j <= 50; ++j) exact += 1.0 / (j * j);
    const double e0 = std::abs(euler_maclaurin_integral(f, 5, 50, 0) - exact);
    const double e1 = std::abs(euler_maclaurin_integral(f, 5, 50, 1) - exact);
    const double e2 = std::abs(euler_maclaurin_integral(f, 5, 50, 2) - exact);
    CHECK(e1 < e0);
    CHECK(e2 < e1);
    CHECK(e2 < 1e-4);
    CHECK_THROWS_AS(euler_maclaurin_integral(f, 5, 50, 3), Error);
}

TEST_CASE("reduced sigma integral tracks the direct sum") {
    const ParastatParams p{0.1, 1.0, 100};
    SolveConfig cfg;
    cfg.tol = 1e-13;
    const auto s = solve_sigma(p, cfg);
    const double B = s.frozen ? 1.0 : p.B(s.sigma);
    const double sum = reduced_sigma_sum(p.b, p.kappa, p.k, B);
    const double e0 = std::abs(reduced_sigma_integral(p.b, p.kappa, p.k, B, 0) - sum);
    const double e2 = std::abs(reduced_sigma_integral(p.b, p.kappa, p.k, B, 2) - sum);
    CHECK(e2 < e0);
    CHECK(e2 < 1e-3 * sum);
}
