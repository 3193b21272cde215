#pragma once

#include <map>

#include "lhit/axis.hpp"
#include "lhit/continuum.hpp"
#include "lhit/series_ops.hpp"
#include "lhit/walk_law.hpp"

namespace lhit::edge {

// First axis-revisit displacement law H_0 on [-W, W] with the window
// deficit (nonzero only for the strip-truncated transform path).
struct OverstepLaw {
    std::map<long long, double> table;
    double deficit = 0.0;
};

OverstepLaw axis_overstep_law(const WalkLaw& law, long long window);

// Boundary function mu or nu on [-M, M], solved from the renewal relation
//   sum_{k>=0} H_0(-j+k) nu(k) = nu(j)
// with the k > M far field pinned to the asymptotic tail 2 sqrt(k)/sigma2.
// residual is the sup renewal defect over |j| <= M/2 (it absorbs the H_0
// window deficit); tail_fit is the mean of nu(-y) sqrt(y) over the outer
// half-window, whose distance from 1 measures the normalization quality.
struct EdgeFunctionTable {
    std::string kind;  // mu | nu
    long long M = 0;
    std::map<long long, double> values;
    double residual = 0.0;
    double sigma2 = 0.0;
    double tail_fit = 0.0;

    double at(long long j) const;
};

EdgeFunctionTable compute_nu(const WalkLaw& law, long long M, double tol);
// mu of the law = nu of the reversed law.
EdgeFunctionTable compute_mu(const WalkLaw& law, long long M, double tol);

// pi * hm_{I(n)}(s) against mu(-n+s) nu(-n-s) per segment site.
series::ProbeReport corollary1_probe(const WalkLaw& law,
                                     const continuum::SegmentSpec& seg,
                                     long long M = 2000);

}  // namespace lhit::edge
