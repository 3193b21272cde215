#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lhit/continuum.hpp"
#include "lhit/halfline.hpp"
#include "lhit/hitting.hpp"
#include "lhit/walk_law.hpp"

namespace lhit::series {

// Dense table of one of the segment operators. Rows are starts
// x in [x_lo, x_hi], columns targets y in [y_lo, y_hi]. trunc_err is a
// per-entry truncation estimate; row_tail bounds the row mass living
// beyond y_hi (needed when tables are composed).
struct OperatorTable {
    std::string kind;  // Q | Q_I | K_I | Lambda
    int n = 0;
    long long x_lo = 0, x_hi = 0;
    long long y_lo = 0, y_hi = 0;
    Eigen::MatrixXd entries;
    double trunc_err = 0.0;
    double row_tail = 0.0;

    double at(long long x, long long y) const;
};

// Shared factorizations behind the operator family of one segment: the
// two half-line solves feeding Q(x,y) = sum_{s<=-n} H^-_{x-n}(s-n)
// H^+_{s+n}(y+n), the indicator restrictions Q_I, K_I, and the Neumann
// series Lambda. D is the exterior extent: x, y run over [n, n+D].
class SegmentOperators {
public:
    SegmentOperators(const WalkLaw& law, const continuum::SegmentSpec& seg,
                     long long D);

    long long D() const { return D_; }
    const continuum::SegmentSpec& seg() const { return seg_; }
    const OperatorTable& Q() const { return q_; }
    OperatorTable Q_I() const;
    OperatorTable K_I() const;
    const OperatorTable& lambda() const;  // built on first use
    // per-row mass of Q beyond y_hi (walks returning right of the table)
    const Eigen::VectorXd& row_far() const { return row_far_; }

private:
    continuum::SegmentSpec seg_;
    long long D_ = 0;
    long long Ds_ = 0;       // inner summation depth over s
    long long wm_ = 0;       // minus-solver window
    Eigen::MatrixXd rm_;     // (D+1) x 2*wm_: H^-_{x-n} at sites -(j+1)
    Eigen::VectorXd row_far_;
    OperatorTable q_;
    double ki_trunc_ = 0.0;
    mutable std::optional<OperatorTable> lambda_;
};

OperatorTable build_Q(const WalkLaw& law, const continuum::SegmentSpec& seg,
                      long long D);

// Lambda = sum_k Q^k on the block y in [n, n+D], summed by doubling until
// the increment sup-norm drops below 1e-10 or k exceeds kmax.
OperatorTable lambda_series(const OperatorTable& Qtab, int kmax = 4096);

// H^{I(n)}_x(s) through the decomposition (1 + Lambda)(Q_I + K_I); the
// deficit field carries the accumulated truncation estimate. Starts left
// of the segment go through the reflected law.
HittingDistribution reconstruct_segment_hit(const WalkLaw& law,
                                            const continuum::SegmentSpec& seg,
                                            long long x);

struct EtaReport {
    double sup_residual = 0.0;
    double budget = 0.0;
    double quad_term = 0.0;   // lambda quadrature, by step halving
    double cell_term = 0.0;   // unit-cell midpoint-vs-average of q
    double trunc_term = 0.0;  // table truncations
    int grid_points = 0;
    double sup_eta = 0.0;        // max |eta| over the checked block
    double sup_eta_over_q = 0.0; /* max |eta|/q over the checked block */
    bool ok() const { return sup_residual <= 3.0 * budget; }
};

// Checks Lambda - lambda = (1 + Lambda) eta (1 + lambda) with lambda built
// from the continuum kernel on a refined quadrature grid and eta = Q - q
// under the unit-cell extension; the residual is evaluated at integer
// pairs x, y in [x_lo, x_hi]. D = 0 picks 16n.
EtaReport eta_resolvent_check(const WalkLaw& law,
                              const continuum::SegmentSpec& seg, long long x_lo,
                              long long x_hi, long long D = 0);

struct ProbeRow {
    double x = 0.0;
    double y_or_s = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct ProbeReport {
    std::string probe;
    int n = 0;
    std::vector<ProbeRow> rows;
    double sup_ratio = 0.0;
    double inf_ratio = 0.0;
};

// Empirical two-sided/one-sided constants of the relations (I), (I'),
// (II), (III), (IV), (V), (VI) and the Q-sum lemma behind (V)
// ("lemma31"). Boundary layers x - n < 2, n - |s| < 2 are excluded.
ProbeReport bound_probe(const std::string& which, const WalkLaw& law,
                        const continuum::SegmentSpec& seg, long long D = 0);

}  // namespace lhit::series
