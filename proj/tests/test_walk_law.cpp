#include <cmath>

#include "common.hpp"
#include "doctest.h"
#include "lhit/errors.hpp"
#include "lhit/walk_law.hpp"

using namespace lhit;

TEST_SUITE("walk_model") {

TEST_CASE("simple walk moments") {
    WalkLaw law = make_simple_walk();
    CHECK(law.support.size() == 4);
    for (double p : law.probs) CHECK(p == doctest::Approx(0.25));
    auto mom = validate(law);
    CHECK(mom.mean[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(mom.mean[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(mom.sigma2 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mom.covariance[0][0] == doctest::Approx(0.5));
    CHECK(mom.covariance[0][1] == doctest::Approx(0.0));
    CHECK(law.is_simple());
    CHECK(law.vertically_skip_free());
}

TEST_CASE("rejections name the violated assumption") {
    WalkLaw axis_only;
    axis_only.support = {{1, 0}, {-1, 0}};
    axis_only.probs = {0.5, 0.5};
    CHECK_THROWS_AS(validate(axis_only), NotIrreducible);

    WalkLaw drift;
    drift.support = {{1, 0}, {0, 1}, {0, -1}};
    drift.probs = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    CHECK_THROWS_AS(validate(drift), NotZeroMean);

    WalkLaw bad;
    bad.support = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    bad.probs = {0.5, 0.5, 0.25, -0.25};
    CHECK_THROWS_AS(validate(bad), BadProbabilities);

    WalkLaw short_sum = make_simple_walk();
    short_sum.probs[0] = 0.2;
    CHECK_THROWS_AS(validate(short_sum), BadProbabilities);
}

TEST_CASE("hand moment sum for a skewed accepted law") {
    WalkLaw law;
    law.support = {{2, 0}, {-1, 0}, {0, 1}, {0, -1}};
    law.probs = {0.2, 0.4, 0.2, 0.2};
    auto mom = validate(law);
    CHECK(mom.mean[0] == doctest::Approx(0.0).epsilon(1e-14));
    // E[dx^2] = 4/5 + 2/5, E[dy^2] = 2/5, E[dx dy] = 0
    CHECK(mom.covariance[0][0] == doctest::Approx(1.2));
    CHECK(mom.covariance[1][1] == doctest::Approx(0.4));
    CHECK(mom.covariance[0][1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(mom.sigma2 == doctest::Approx(std::sqrt(0.48)));
}

TEST_CASE("reversal and reflections preserve the moment report") {
    for (const WalkLaw& law :
         {lhit_test::asym_law(), lhit_test::tall_law()}) {
        auto a = validate(law);
        auto b = validate(reversed(law));
        CHECK(a.sigma2 == doctest::Approx(b.sigma2).epsilon(1e-13));
        CHECK(a.covariance[0][0] == doctest::Approx(b.covariance[0][0]));
        CHECK(a.covariance[1][1] == doctest::Approx(b.covariance[1][1]));
        CHECK(validate(horizontally_flipped(law)).sigma2 ==
              doctest::Approx(a.sigma2).epsilon(1e-13));
        CHECK(validate(vertically_flipped(law)).sigma2 ==
              doctest::Approx(a.sigma2).epsilon(1e-13));
    }
}

TEST_CASE("law file round trip") {
    auto path = lhit_test::write_law_file("/tmp/lhit_test_law.txt",
                                          lhit_test::asym_law());
    WalkLaw law = load_walk_law(path);
    CHECK(law.support.size() == 4);
    auto mom = validate(law);
    CHECK(mom.sigma2 == doctest::Approx(std::sqrt(std::sqrt(0.5) *
                                                  std::sqrt(0.5))));
    CHECK(load_walk_law("srw").is_simple());
}

}  // TEST_SUITE
