#include <cmath>
#include <numbers>

#include "common.hpp"
#include "doctest.h"
#include "lhit/edge.hpp"
#include "lhit/errors.hpp"
#include "lhit/halfline.hpp"
#include "lhit/potential_kernel.hpp"

using namespace lhit;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("edge_functions") {

TEST_CASE("renewal solve: residual, monotonicity, tail limits") {
    WalkLaw law = make_simple_walk();
    auto nu = edge::compute_nu(law, 400, 1e-6);
    CHECK(nu.residual < 1e-6);
    CHECK(nu.sigma2 == doctest::Approx(0.5));
    double prev = -1e300;
    for (long long j = -400; j <= 400; ++j) {
        double v = nu.at(j);
        CHECK(v > 0.0);
        CHECK(v > prev);
        prev = v;
    }
    for (long long y = 50; y <= 200; y += 25) {
        CHECK(nu.at(-y) * std::sqrt(static_cast<double>(y)) > 0.8);
        CHECK(nu.at(-y) * std::sqrt(static_cast<double>(y)) < 1.2);
        double up = nu.at(y) * nu.sigma2 /
                    (2.0 * std::sqrt(static_cast<double>(y)));
        CHECK(up > 0.8);
        CHECK(up < 1.2);
    }
    CHECK_THROWS_AS(nu.at(401), DomainError);
    CHECK_THROWS_AS(edge::compute_nu(law, 20, 1e-6), WindowTooSmall);
}

TEST_CASE("mu equals nu for the symmetric walk, duality in general") {
    WalkLaw law = make_simple_walk();
    auto nu = edge::compute_nu(law, 120, 1e-6);
    auto mu = edge::compute_mu(law, 120, 1e-6);
    for (long long j = -120; j <= 120; ++j)
        CHECK(mu.at(j) == doctest::Approx(nu.at(j)).epsilon(1e-12));

    WalkLaw skew = lhit_test::asym_law();
    auto mu_skew = edge::compute_mu(skew, 120, 1e-5);
    auto nu_rev = edge::compute_nu(reversed(skew), 120, 1e-5);
    for (long long j : {-60LL, -5LL, 0LL, 5LL, 60LL})
        CHECK(mu_skew.at(j) == doctest::Approx(nu_rev.at(j)).epsilon(1e-12));
}

TEST_CASE("mu against the (thmA0) half-line comparison") {
    WalkLaw law = make_simple_walk();
    auto mu = edge::compute_mu(law, 400, 1e-6);
    pk::PotentialKernel kernel(law);
    halfline::HalfLineSolver coarse(kernel, 256), fine(kernel, 512);
    const long long x = 64;
    for (long long s : {2LL, 5LL, 10LL}) {
        const double H = 2.0 * fine.minus({x, 0}).at(-s) -
                         coarse.minus({x, 0}).at(-s);
        const double pred = std::sqrt(static_cast<double>(x)) * mu.at(-s) /
                            (kPi * static_cast<double>(x + s));
        CHECK(H / pred > 0.8);
        CHECK(H / pred < 1.2);
    }
}

TEST_CASE("overstep law window and deficit") {
    auto over = edge::axis_overstep_law(make_simple_walk(), 500);
    double sum = 0.0;
    for (auto& [s, p] : over.table) {
        CHECK(p >= 0.0);
        sum += p;
    }
    CHECK(sum + over.deficit >= 1.0 - 1e-2);
    CHECK(over.table.at(1) >= 0.25);
    CHECK_THROWS_AS(edge::axis_overstep_law(make_simple_walk(), 1 << 20),
                    WindowTooSmall);
}

TEST_CASE("corollary 1 probe brackets") {
    WalkLaw law = make_simple_walk();
    auto rep = edge::corollary1_probe(law, {8});
    for (auto& r : rep.rows) {
        CHECK(r.ratio > 0.7);
        CHECK(r.ratio < 1.3);
        CHECK(r.lhs > 0.0);
        CHECK(r.rhs > 0.0);
    }
}

}  // TEST_SUITE
