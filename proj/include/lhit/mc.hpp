#pragma once

#include <cstdint>
#include <vector>

#include "lhit/axis.hpp"
#include "lhit/hitting.hpp"
#include "lhit/walk_law.hpp"

namespace lhit::mc {

struct McConfig {
    long long samples = 1000000;
    std::uint64_t seed = 0;
    long long step_cap = 100000000;
    int chunk = 0;  // worker count; 0 = hardware concurrency
    // induced-chain sampler only. The far bucket trades an O(n/far_radius)
    // bias (folded into the reported standard errors) against walker
    // lifetime, which grows linearly with the radius for the Cauchy-tailed
    // induced chain.
    long long far_radius = 2000;   // |x| beyond which the walker is handed
                                   // to the harmonic-measure bucket
    long long hm_samples = 50000;  // size of the far-field restart pass
};

// xoshiro256++ with a splitmix64-seeded state; every walker owns a stream
// derived from (seed, walker index), so results are independent of how
// walkers are partitioned into chunks.
struct Rng {
    std::uint64_t s[4];
    Rng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next();
    double uniform();  // [0,1)
};

class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& weights);
    std::size_t sample(Rng& rng) const;
    double total() const { return total_; }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
    double total_ = 0.0;
};

// Exact-resummation Monte Carlo: the walk observed on its axis visits is a
// 1-D chain with increment law H_0; one induced step per draw. Requires a
// vertically skip-free law (the AxisSystem must be exact).
HittingDistribution hit_segment_mc(const axis::AxisSystem& sys,
                                   const continuum::SegmentSpec& seg,
                                   const LatticePoint& x, const McConfig& cfg);

// Dispatches to the induced sampler when possible, else plain stepping.
HittingDistribution hit_segment_mc(const WalkLaw& law,
                                   const continuum::SegmentSpec& seg,
                                   const LatticePoint& x, const McConfig& cfg);

// Literal capped 2-D stepping (fallback for |dy| > 1 laws; also an
// independent oracle for the induced sampler). Censored mass -> deficit.
HittingDistribution hit_segment_mc_plain(const WalkLaw& law,
                                         const continuum::SegmentSpec& seg,
                                         const LatticePoint& x,
                                         const McConfig& cfg);

// Induced-chain sampler for the negative half-line: table over [-D, -1],
// mass at sites < -D and far-field escapes reported as deficit.
HittingDistribution hit_halfline_mc(const axis::AxisSystem& sys,
                                    const LatticePoint& x, long long D,
                                    const McConfig& cfg);

}  // namespace lhit::mc
