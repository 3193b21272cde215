#include <cmath>
#include <numbers>

#include "common.hpp"
#include "doctest.h"
#include "lhit/axis.hpp"
#include "lhit/errors.hpp"
#include "lhit/halfline.hpp"
#include "lhit/mc.hpp"
#include "lhit/potential_kernel.hpp"

using namespace lhit;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("halfline") {

TEST_CASE("mass conservation and tail model") {
    WalkLaw law = make_simple_walk();
    auto h = halfline::hit_halfline(law, -1, {9, 0});
    CHECK(h.window_mass() + h.tail_bound == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(h.tail_bound <=
          h.fitted_c / std::sqrt(static_cast<double>(h.D)) + 1e-12);
    for (auto& [s, p] : h.table) {
        CHECK(s < 0);
        CHECK(p >= 0.0);
    }
}

TEST_CASE("(B-1) envelope at x=9, s=-4") {
    WalkLaw law = make_simple_walk();
    auto h = halfline::hit_halfline(law, -1, {9, 0}, 512);
    const double pred = std::sqrt(9.0) / (kPi * 13.0 * std::sqrt(4.0));
    const double band = 5.0 * (0.25 + 1.0 / 9.0);
    CHECK(h.at(-4) / pred > 1.0 - band);
    CHECK(h.at(-4) / pred < 1.0 + band);
}

TEST_CASE("positive half-line via the flipped law") {
    WalkLaw law = lhit_test::asym_law();
    auto plus = halfline::hit_halfline(law, +1, {-6, 2}, 128);
    auto minus =
        halfline::hit_halfline(horizontally_flipped(law), -1, {6, 2}, 128);
    REQUIRE(plus.table.size() == minus.table.size());
    for (auto& [s, p] : plus.table) {
        CHECK(s > 0);
        CHECK(p == doctest::Approx(minus.at(-s)).epsilon(1e-12));
    }
}

TEST_CASE("on-target start uses the after-time-0 convention") {
    WalkLaw law = make_simple_walk();
    auto h = halfline::hit_halfline(law, -1, {-3, 0}, 128);
    CHECK(h.window_mass() + h.tail_bound == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(h.at(-3) > 0.1);  // the returning one-step mass dominates the site
}

TEST_CASE("budget cap") {
    WalkLaw law = make_simple_walk();
    CHECK_THROWS_AS(halfline::hit_halfline(law, -1, {4, 0}, 5000),
                    BudgetInfeasible);
}

TEST_CASE("agreement with Monte Carlo for an asymmetric law") {
    WalkLaw law = lhit_test::asym_law();
    auto exact = halfline::hit_halfline(law, -1, {5, 0}, 256);
    axis::AxisSystem sys(law);
    mc::McConfig cfg;
    cfg.samples = 200000;
    cfg.seed = 21;
    auto est = mc::hit_halfline_mc(sys, {5, 0}, 10, cfg);
    for (long long s = -10; s <= -1; ++s) {
        double se = est.stderrs->at(s);
        CHECK(std::abs(est.at(s) - exact.at(s)) <= 5.0 * se + 1e-4);
    }
}

TEST_CASE("depth extrapolation cleans the window contamination") {
    WalkLaw law = make_simple_walk();
    pk::PotentialKernel kernel(law);
    halfline::HalfLineSolver coarse(kernel, 256), fine(kernel, 512);
    // truncation contamination ~ 1/D: halving it brings the two depths
    // together much closer than either is to the coarse value
    const long long k = 32;
    double hc = coarse.minus({k, 0}).at(-k);
    double hf = fine.minus({k, 0}).at(-k);
    double rich = 2.0 * hf - hc;
    CHECK(std::abs(hf - rich) < std::abs(hc - hf) + 1e-12);
    const double pred = 1.0 / (kPi * 2.0 * k);
    CHECK(std::abs(rich / pred - 1.0) < std::abs(hc / pred - 1.0));
}

}  // TEST_SUITE
