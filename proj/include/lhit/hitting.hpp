#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lhit/continuum.hpp"
#include "lhit/potential_kernel.hpp"
#include "lhit/walk_law.hpp"

namespace lhit {

enum class Method { potential_kernel, truncated_solve, monte_carlo };

std::string method_name(Method m);

// Hitting distribution over sites of an axis-based target (segment, axis
// window, half-line); sites are first coordinates on the real axis.
struct HittingDistribution {
    std::string target;
    LatticePoint start;
    std::map<long long, double> table;
    double deficit = 0.0;
    Method method = Method::potential_kernel;
    std::optional<std::map<long long, double>> stderrs;

    double total_mass() const;
    double at(long long s) const;
};

// Exact hitting distributions of a finite set by the boundary representation
//   H_A(x,y) = h(y) + sum_z a(x-z) c_z(y),  sum_z c_z(y) = 0,
// where the charge system is pinned by H_A(w,y) = delta_{wy} on A. One
// factorization serves every start; h is the harmonic measure from infinity.
class FiniteSetSolver {
public:
    FiniteSetSolver(const pk::PotentialKernel& kernel,
                    std::vector<LatticePoint> sites);

    const std::vector<LatticePoint>& sites() const { return sites_; }
    // H_A(x, .) for a start x (not necessarily off A; the value is the
    // harmonic extension, i.e. the hit law of a walk currently off A).
    Eigen::VectorXd hit_from(const LatticePoint& x) const;
    const Eigen::VectorXd& harmonic_measure() const { return hm_; }
    double residual() const { return residual_; }

private:
    const pk::PotentialKernel& kernel_;
    std::vector<LatticePoint> sites_;
    Eigen::MatrixXd coeff_;  // (N+1) x N: charges over sites, last row h
    Eigen::VectorXd hm_;
    double residual_ = 0.0;
};

// Spec-level wrapper around FiniteSetSolver for a one-off computation.
HittingDistribution hit_finite_set(const pk::PotentialKernel& kernel,
                                   const std::vector<LatticePoint>& A,
                                   const LatticePoint& x);

// H^{I(n)}_x for any lattice start. Starts on segment sites follow the
// first-visit-after-time-0 convention through one explicit convolution step.
HittingDistribution hit_segment(const WalkLaw& law,
                                const pk::PotentialKernel& kernel,
                                const continuum::SegmentSpec& seg,
                                const LatticePoint& x);

// Same via an absorbing solve truncated to the box [-L,L]^2; walkers leaving
// the box are reported as deficit.
HittingDistribution hit_segment_box(const WalkLaw& law,
                                    const continuum::SegmentSpec& seg,
                                    const LatticePoint& x, int box_radius);

std::vector<LatticePoint> segment_sites(const continuum::SegmentSpec& seg);

}  // namespace lhit
