#pragma once

#include <map>
#include <memory>

#include "lhit/hitting.hpp"
#include "lhit/walk_law.hpp"

namespace lhit::halfline {

// First-visit distribution of a half-line of the integer axis, truncated at
// distance D. Sites carry their true axis coordinates (negative for sign -1,
// positive for sign +1). tail_bound is the mass attributed beyond the window;
// table sum + tail_bound = 1 exactly (the solve conserves mass).
struct HalfLineDistribution {
    int sign = -1;  // -1: target {-1,-2,...}; +1: target {1,2,...}
    LatticePoint start;
    std::map<long long, double> table;
    double tail_bound = 0.0;
    long long D = 0;
    // tail_bound ~ fitted_c / sqrt(D) (the H^- tail decays like |s|^{-3/2})
    double fitted_c = 0.0;

    double at(long long s) const;
    double window_mass() const;
};

// Exact finite-set solve on the first 2D sites of the negative half-line;
// the reported window is [-D, -1] and the outer half of the solve absorbs
// the tail, so window entries are clean of truncation up to the (already
// |s|^{-3/2}-small) mass that first lands beyond -2D. One factorization
// serves every start.
class HalfLineSolver {
public:
    HalfLineSolver(const pk::PotentialKernel& kernel, long long D);

    long long D() const { return D_; }
    // H^-_x restricted to [-D, -1]; start anywhere off the half-line.
    HalfLineDistribution minus(const LatticePoint& x) const;
    // Raw window values as a vector v[j] = H^-_x(-1-j), j = 0..2D-1
    // (the full solve depth, for operator assembly).
    Eigen::VectorXd minus_row(const LatticePoint& x) const;

private:
    long long D_;
    std::unique_ptr<FiniteSetSolver> solver_;
};

// H^{sign}_start truncated at distance D (default 0 picks max(64, 4|x|)
// capped at 2048). Starts on the target follow the first-visit-after-time-0
// convention through one convolution step.
HalfLineDistribution hit_halfline(const WalkLaw& law, int sign,
                                  const LatticePoint& start, long long D = 0);

}  // namespace lhit::halfline
