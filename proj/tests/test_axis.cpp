#include <cmath>
#include <numbers>

#include "common.hpp"
#include "doctest.h"
#include "lhit/axis.hpp"
#include "lhit/mc.hpp"

using namespace lhit;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("axis") {

TEST_CASE("overstep law of the simple walk") {
    axis::AxisSystem sys(make_simple_walk());
    CHECK(sys.exact());
    CHECK(sys.table_deficit() < 1e-9);
    CHECK(sys.overstep_at(1) >= 0.25);  // direct axis step alone gives 1/4
    CHECK(sys.overstep_at(-1) >= 0.25);
    double sum = 0.0;
    for (long long s = -sys.half_window() + 1; s < sys.half_window(); ++s)
        sum += sys.overstep_at(s);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    for (long long s : {1LL, 5LL, 40LL})
        CHECK(sys.overstep_at(s) ==
              doctest::Approx(sys.overstep_at(-s)).epsilon(1e-10));
    // (5.00) tail law s^2 H_0(s) -> sigma^2/pi
    const double tail = 100.0 * 100.0 * sys.overstep_at(100) * kPi / 0.5;
    CHECK(tail > 0.85);
    CHECK(tail < 1.15);
}

TEST_CASE("axis hitting from height m and the reflection asymptotic") {
    WalkLaw law = make_simple_walk();
    axis::AxisSystem sys(law);
    auto h = axis::hit_axis(sys, {0, 1}, 400);
    CHECK(h.total_mass() + h.deficit == doctest::Approx(1.0).epsilon(1e-6));
    double prev_dev = 1e9;
    for (long long k : {10LL, 20LL, 40LL, 80LL}) {
        auto hk = axis::hit_axis(sys, {0, k}, 4000);
        const double ratio =
            hk.at(k) * kPi * (double(k * k) + double(k * k)) / double(k);
        CHECK(std::abs(ratio - 1.0) < 0.5);
        if (k > 10) CHECK(std::abs(ratio - 1.0) < prev_dev + 1e-12);
        prev_dev = std::abs(ratio - 1.0);
    }
}

TEST_CASE("strip fallback for a non-skip-free law") {
    WalkLaw law = lhit_test::tall_law();
    CHECK(!law.vertically_skip_free());
    axis::AxisSystem sys(law);
    CHECK(!sys.exact());
    // strip escape decays like 1/height; the default height leaves ~4e-3
    CHECK(sys.table_deficit() < 0.01);
    double sum = 0.0;
    for (long long s = -2000; s <= 2000; ++s) sum += sys.overstep_at(s);
    CHECK(sum + sys.table_deficit() >= 1.0 - 1e-3);
    CHECK(sum <= 1.0 + 1e-9);
}

}  // TEST_SUITE
