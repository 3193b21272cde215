#pragma once

#include <array>
#include <string>
#include <vector>

namespace lhit {

struct LatticePoint {
    long long x = 0;
    long long y = 0;
    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

// Finite-support increment law on Z^2. Immutable after construction.
struct WalkLaw {
    std::vector<LatticePoint> support;
    std::vector<double> probs;
    std::string name;

    std::size_t size() const { return support.size(); }
    bool is_simple() const;
    int max_dy() const;
    int min_dy() const;
    // true when |dy| <= 1 for every increment (first passages of horizontal
    // lines are then level-by-level)
    bool vertically_skip_free() const;
};

struct MomentReport {
    std::array<double, 2> mean{};
    std::array<std::array<double, 2>, 2> covariance{};  // Q = (sigma_ij)
    double sigma2 = 0.0;  // sqrt(det Q)
    double first_coord_log_moment = 0.0;  // E[|S1^(1)|^2 log|S1^(1)|]
};

// Symmetric simple random walk: support {(+-1,0),(0,+-1)}, prob 1/4 each.
WalkLaw make_simple_walk();

// Checks probabilities, zero mean and irreducibility; throws
// BadProbabilities / NotZeroMean / NotIrreducible. Returns the moment data.
MomentReport validate(const WalkLaw& law);

// Law of -S_1 (time reversal of the walk seen on the lattice).
WalkLaw reversed(const WalkLaw& law);

// dy -> -dy (reflection across the real axis).
WalkLaw vertically_flipped(const WalkLaw& law);

// dx -> -dx.
WalkLaw horizontally_flipped(const WalkLaw& law);

// Reads a law from a text file of records "dx dy p" (blank lines and
// '#' comments ignored). "srw" loads the simple walk.
WalkLaw load_walk_law(const std::string& path_or_srw);

}  // namespace lhit
