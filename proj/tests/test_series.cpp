#include <cmath>

#include "common.hpp"
#include "doctest.h"
#include "lhit/continuum.hpp"
#include "lhit/hitting.hpp"
#include "lhit/potential_kernel.hpp"
#include "lhit/series_ops.hpp"

using namespace lhit;

TEST_SUITE("series_ops") {

TEST_CASE("Q table structure and continuum shadow") {
    WalkLaw law = make_simple_walk();
    continuum::SegmentSpec seg{5};
    series::SegmentOperators ops(law, seg, 30);
    const auto& Q = ops.Q();
    CHECK(Q.kind == "Q");
    for (long long x = Q.x_lo; x <= Q.x_hi; ++x) {
        double row = 0.0;
        for (long long y = Q.y_lo; y <= Q.y_hi; ++y) {
            double v = Q.at(x, y);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            row += v;
        }
        CHECK(row <= 1.0 + Q.trunc_err);
    }
    // empirical (II) bracket on a mid-range grid
    for (long long x = seg.n + 3; x <= 6 * seg.n; x += 4) {
        for (long long y = seg.n + 3; y <= 6 * seg.n; y += 4) {
            double q = continuum::q_continuum_closed(
                seg.n_star(), static_cast<double>(x), static_cast<double>(y));
            double r = Q.at(x, y) / q;
            CHECK(r > 1.0 / 5);
            CHECK(r < 5.0);
        }
    }
}

TEST_CASE("Lambda series: domination and (IV)/(VI) envelopes") {
    WalkLaw law = make_simple_walk();
    continuum::SegmentSpec seg{5};
    series::SegmentOperators ops(law, seg, 30);
    const auto& Q = ops.Q();
    const auto& L = ops.lambda();
    double C = 0.0;
    for (long long x = L.x_lo; x <= L.x_hi; ++x) {
        double row = 0.0;
        for (long long y = L.y_lo; y <= L.y_hi; ++y) {
            CHECK(L.at(x, y) >= Q.at(x, y) - 1e-15);
            row += L.at(x, y);
        }
        C = std::max(C, row * std::sqrt(static_cast<double>(x) /
                                        (x - seg.n_star())));
    }
    CHECK(C <= 10.0);  // fitted (IV) constant
    // (VI): prefix sums against C sqrt((x-n_*)/x) N/n
    for (long long N : {1LL, 2LL, 5LL, 10LL}) {
        for (long long x = L.x_lo + 2; x <= L.x_hi; x += 7) {
            double pref = 0.0;
            for (long long y = seg.n; y <= seg.n + N && y <= L.y_hi; ++y)
                pref += L.at(x, y);
            double env = C *
                         std::sqrt((x - seg.n_star()) / static_cast<double>(x)) *
                         static_cast<double>(N) / seg.n;
            CHECK(pref <= env + 1e-9);
        }
    }
}

TEST_CASE("p_n decay across n") {
    WalkLaw law = make_simple_walk();
    double fitted = 0.0;
    double prev = 1e9;
    for (int n : {4, 8, 16}) {
        series::SegmentOperators ops(law, {n}, 4 * n);
        const auto& Q = ops.Q();
        double pn = 0.0;
        for (long long x = Q.x_lo; x <= Q.x_hi; ++x)
            for (long long y = std::max(Q.y_lo, static_cast<long long>(n));
                 y <= Q.y_hi; ++y)
                pn = std::max(pn, Q.at(x, y));
        CHECK(pn < prev);
        prev = pn;
        fitted = std::max(fitted, pn * std::sqrt(static_cast<double>(n)));
    }
    CHECK(fitted < 3.0);
}

TEST_CASE("reconstruction identity (QQQ)") {
    struct Case {
        WalkLaw law;
        int n;
        long long x;
    };
    for (const Case& c : {Case{make_simple_walk(), 2, 4},
                          Case{lhit_test::asym_law(), 3, 6}}) {
        pk::PotentialKernel kernel(c.law);
        continuum::SegmentSpec seg{c.n};
        auto rec = series::reconstruct_segment_hit(c.law, seg, c.x);
        auto oracle = hit_segment(c.law, kernel, seg, {c.x, 0});
        const double tol = std::max(2.0 * rec.deficit, 1e-3);
        for (long long s = -c.n + 1; s <= c.n - 1; ++s)
            CHECK(std::abs(rec.at(s) - oracle.at(s)) <= tol);
    }
    // n = 1 degenerate target
    auto one = series::reconstruct_segment_hit(make_simple_walk(), {1}, 3);
    CHECK(one.at(0) == doctest::Approx(1.0).epsilon(1e-6));
    // mirrored start goes through the reflected law
    auto left = series::reconstruct_segment_hit(make_simple_walk(), {2}, -4);
    auto right = series::reconstruct_segment_hit(make_simple_walk(), {2}, 4);
    for (long long s = -1; s <= 1; ++s)
        CHECK(left.at(s) == doctest::Approx(right.at(-s)).epsilon(1e-12));
}

TEST_CASE("resolvent identity (La-la) and the eta magnitude") {
    WalkLaw law = make_simple_walk();
    auto rep = series::eta_resolvent_check(law, {4}, 6, 16);
    CHECK(rep.ok());
    CHECK(rep.sup_residual <= 3.0 * rep.budget);
    CHECK(rep.budget < 1e-3);
    CHECK(rep.sup_eta > 0.0);
}

TEST_CASE("bound probes report stable two-sided constants") {
    WalkLaw law = make_simple_walk();
    for (const char* which : {"I", "lemma31"}) {
        auto rep = series::bound_probe(which, law, {5});
        CHECK(rep.inf_ratio > 1.0 / 50);
        CHECK(rep.sup_ratio < 50.0);
    }
}

}  // TEST_SUITE
