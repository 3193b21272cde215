#include <cmath>
#include <random>

#include "common.hpp"
#include "doctest.h"
#include "lhit/hitting.hpp"
#include "lhit/potential_kernel.hpp"

using namespace lhit;

TEST_SUITE("lattice_oracle") {

TEST_CASE("single-site target takes all mass") {
    WalkLaw law = make_simple_walk();
    pk::PotentialKernel kernel(law);
    for (LatticePoint x : {LatticePoint{3, 0}, {0, 5}, {-2, -7}}) {
        auto h = hit_finite_set(kernel, {{0, 0}}, x);
        CHECK(h.at(0) == doctest::Approx(1.0).epsilon(1e-10));
        auto hs = hit_segment(law, kernel, {1}, x);
        CHECK(hs.at(0) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("mass conservation over random configurations") {
    WalkLaw law = lhit_test::asym_law();
    pk::PotentialKernel kernel(law);
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long long> u(-12, 12);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<LatticePoint> A;
        for (int i = 0; i < 4 + trial % 4; ++i) A.push_back({u(rng), u(rng)});
        std::sort(A.begin(), A.end(), [](auto a, auto b) {
            return std::pair{a.x, a.y} < std::pair{b.x, b.y};
        });
        A.erase(std::unique(A.begin(), A.end()), A.end());
        LatticePoint x{u(rng) + 30, u(rng)};
        FiniteSetSolver solver(kernel, A);
        auto h = solver.hit_from(x);
        CHECK(h.sum() == doctest::Approx(1.0).epsilon(1e-9));
        for (int i = 0; i < h.size(); ++i) CHECK(h(i) >= -1e-12);
    }
}

TEST_CASE("lattice symmetry of the simple walk") {
    WalkLaw law = make_simple_walk();
    pk::PotentialKernel kernel(law);
    continuum::SegmentSpec seg{4};
    FiniteSetSolver solver(kernel, segment_sites(seg));
    for (long long x : {5LL, 7LL, 12LL}) {
        auto hp = solver.hit_from({x, 0});
        auto hm = solver.hit_from({-x, 0});
        for (long long s = -3; s <= 3; ++s)
            CHECK(hp(s + 3) == doctest::Approx(hm(-s + 3)).epsilon(1e-12));
    }
}

TEST_CASE("potential-kernel vs truncated-solve backends") {
    WalkLaw law = make_simple_walk();
    pk::PotentialKernel kernel(law);
    continuum::SegmentSpec seg{5};
    auto exact = hit_segment(law, kernel, seg, {10, 0});
    auto box = hit_segment_box(law, seg, {10, 0}, 600);
    CHECK(box.deficit > 0.0);
    for (long long s = -4; s <= 4; ++s)
        CHECK(std::abs(exact.at(s) - box.at(s)) <= 2.0 * box.deficit);
    // deficit decreases with box size
    auto small = hit_segment_box(law, seg, {10, 0}, 200);
    CHECK(box.deficit < small.deficit);
}

TEST_CASE("harmonic measure is the far-start limit") {
    WalkLaw law = make_simple_walk();
    pk::PotentialKernel kernel(law);
    continuum::SegmentSpec seg{5};
    FiniteSetSolver solver(kernel, segment_sites(seg));
    auto far = solver.hit_from({10000, 0});
    const auto& hm = solver.harmonic_measure();
    double sum = 0.0;
    for (int i = 0; i < hm.size(); ++i) {
        CHECK(hm(i) > 0.0);
        CHECK(std::abs(far(i) - hm(i)) <= 1e-2);
        sum += hm(i);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("on-segment starts follow the after-time-0 convention") {
    for (const WalkLaw& law : {make_simple_walk(), lhit_test::asym_law()}) {
        pk::PotentialKernel kernel(law);
        continuum::SegmentSpec seg{3};
        FiniteSetSolver solver(kernel, segment_sites(seg));
        auto h = hit_segment(law, kernel, seg, {0, 0});
        CHECK(h.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
        // one explicit convolution step against the solver
        std::map<long long, double> expect;
        for (std::size_t i = 0; i < law.support.size(); ++i) {
            LatticePoint z{law.support[i].x, law.support[i].y};
            if (z.y == 0 && std::llabs(z.x) <= 2) {
                expect[z.x] += law.probs[i];
                continue;
            }
            auto row = solver.hit_from(z);
            for (long long s = -2; s <= 2; ++s)
                expect[s] += law.probs[i] * row(s + 2);
        }
        for (long long s = -2; s <= 2; ++s)
            CHECK(h.at(s) == doctest::Approx(expect[s]).epsilon(1e-10));
    }
}

}  // TEST_SUITE
