#pragma once

#include <complex>
#include <vector>

#include "lhit/hitting.hpp"
#include "lhit/walk_law.hpp"

namespace lhit::axis {

// First-passage distributions onto the real axis, via the horizontal Fourier
// transform. For vertically skip-free laws (|dy| <= 1) the transform of the
// one-level descent is the root of a quadratic in closed form and the tables
// are exact up to FFT aliasing; otherwise the vertical first-passage system
// is solved on a truncated strip per frequency, with the escape mass at
// theta = 0 reported as deficit.
class AxisSystem {
public:
    explicit AxisSystem(const WalkLaw& law, int log2_grid = 17,
                        int strip_height = 256);

    const WalkLaw& law() const { return law_; }
    bool exact() const { return exact_; }
    long long half_window() const { return grid_ / 2; }
    double table_deficit() const { return deficit_; }

    // H_0: law of the next axis site from an axis start (one-step
    // convention), indexed s -> tab[s + grid/2].
    const std::vector<double>& overstep() const { return h0_; }
    double overstep_at(long long s) const;

    // horizontal offset accumulated while first reaching the next row down
    // (from above) / up (from below); exact tables for skip-free laws
    const std::vector<double>& descent_offset() const { return desc_; }
    const std::vector<double>& ascent_offset() const { return asc_; }

    // law of the first axis visit from z (z.y == 0 reduces to shifted H_0),
    // same indexing as overstep()
    std::vector<double> first_axis_law(const LatticePoint& z) const;

private:
    std::vector<double> invert(const std::vector<std::complex<double>>& F)
        const;
    std::vector<std::complex<double>> solve_ladder(double theta) const;

    WalkLaw law_;
    int grid_;
    bool exact_;
    double deficit_ = 0.0;
    // per-frequency transforms of one-level descent/ascent (skip-free) or of
    // the full height ladder (strip fallback)
    std::vector<std::complex<double>> rho_desc_, rho_asc_;
    int strip_ = 0;
    std::vector<double> h0_, desc_, asc_;
};

// Distribution of the first axis visit restricted to [-W, W]; tail mass
// outside the window (plus any strip escape) is the deficit.
HittingDistribution hit_axis(const WalkLaw& law, const LatticePoint& z,
                             long long W);
HittingDistribution hit_axis(const AxisSystem& sys, const LatticePoint& z,
                             long long W);

}  // namespace lhit::axis
