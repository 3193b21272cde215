#include <cmath>
#include <numbers>
#include <random>

#include "common.hpp"
#include "doctest.h"
#include "lhit/potential_kernel.hpp"

using namespace lhit;

namespace {

double harmonicity_residual(const pk::PotentialKernel& a, const WalkLaw& law,
                            long long x, long long y) {
    double s = 0.0;
    for (std::size_t i = 0; i < law.support.size(); ++i)
        s += law.probs[i] *
             a(x + law.support[i].x, y + law.support[i].y);
    double expect = (x == 0 && y == 0) ? 1.0 : 0.0;
    return std::abs(s - a(x, y) - expect);
}

}  // namespace

TEST_SUITE("potential_kernel") {

TEST_CASE("simple walk classical values vs the recursion oracle") {
    pk::PotentialKernel a(make_simple_walk());
    auto rec = pk::simple_walk_recursion(6);
    CHECK(rec[1][0] == doctest::Approx(1.0));
    CHECK(rec[1][1] == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-12));
    CHECK(a(1, 0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(a(1, 1) == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-8));
    for (int x = 0; x <= 5; ++x)
        for (int y = 0; y <= x; ++y)
            CHECK(a(x, y) == doctest::Approx(rec[x][y]).epsilon(1e-7));
    CHECK(a(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("harmonicity at random points") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<long long> u(-40, 40);
    for (const WalkLaw& law : {make_simple_walk(), lhit_test::asym_law()}) {
        pk::PotentialKernel a(law);
        for (int i = 0; i < 50; ++i)
            CHECK(harmonicity_residual(a, law, u(rng), u(rng)) < 1e-6);
        CHECK(harmonicity_residual(a, law, 0, 0) < 1e-6);
    }
}

TEST_CASE("table interface and positivity") {
    std::vector<LatticePoint> pts;
    for (long long x = -4; x <= 4; ++x)
        for (long long y = -4; y <= 4; ++y) pts.push_back({x, y});
    auto table = pk::potential_kernel(make_simple_walk(), pts);
    for (auto& [p, v] : table.values) {
        if (p == std::pair<long long, long long>{0, 0})
            CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
        else
            CHECK(v > 0.0);
    }
    CHECK(table.accuracy < 1e-8);
    // lattice symmetry of the simple walk
    pk::PotentialKernel a(make_simple_walk());
    CHECK(a(3, 2) == doctest::Approx(a(-3, 2)).epsilon(1e-10));
    CHECK(a(3, 2) == doctest::Approx(a(2, 3)).epsilon(1e-10));
    CHECK(a(3, 2) == doctest::Approx(a(-2, -3)).epsilon(1e-10));
}

}  // TEST_SUITE
