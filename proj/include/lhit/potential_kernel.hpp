#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "lhit/walk_law.hpp"

namespace lhit::pk {

struct PotentialKernelTable {
    std::map<std::pair<long long, long long>, double> values;
    double accuracy = 0.0;  // worst estimated quadrature error
    std::string law_name;
};

// Potential kernel a(z) = sum_n (P_0[S_n=0] - P_z[S_n=0]) of a validated
// zero-mean finite-support law. The 2-D Fourier representation is reduced to
// a single integral: for each horizontal frequency the vertical integral is
// a contour integral of a rational function, summed over the roots of the
// vertical symbol inside the unit circle.
class PotentialKernel {
public:
    explicit PotentialKernel(const WalkLaw& law);
    ~PotentialKernel();

    // a(x1, x2); cached, safe to call concurrently.
    double operator()(long long x1, long long x2) const;
    double operator()(const LatticePoint& p) const { return (*this)(p.x, p.y); }

    const WalkLaw& law() const { return law_; }
    double accuracy() const;

private:
    double eval(long long x1, long long x2) const;

    WalkLaw law_;
    int min_dy_ = 0, max_dy_ = 0;
    // lazily built evaluator of the vertically flipped law for x2 < 0
    mutable std::unique_ptr<PotentialKernel> flipped_;
    mutable std::once_flag flip_once_;
    mutable std::mutex mu_;
    mutable std::unordered_map<long long, double> cache_;
    mutable double worst_err_ = 0.0;
};

// Spec-level convenience: evaluate a(.) on a point set.
PotentialKernelTable potential_kernel(const WalkLaw& law,
                                      const std::vector<LatticePoint>& points);

// Exact McCrea-Whipple style recursion for the simple walk on the first
// octant, seeded by a(0,0)=0, a(1,0)=1 and the closed-form diagonal.
// Returns A[x][y] for 0 <= y <= x <= size. Test oracle for the quadrature.
std::vector<std::vector<double>> simple_walk_recursion(int size);

}  // namespace lhit::pk
