#include "lhit/series_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lhit/errors.hpp"
#include "lhit/potential_kernel.hpp"
#include "lhit/quadrature.hpp"

namespace lhit::series {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long long kMaxWindow = 2048;  // half-line solver cap

long long inner_depth(int n, long long D) {
    long long ds = std::max<long long>(4 * (n + D), 512);
    return std::min(ds, kMaxWindow - 2 * n);
}

// lambda(x, y) at integer pairs x, y in [n, n+D], built from the continuum
// kernel q by a midpoint Neumann solve on a refined grid of spacing h over
// u in (n_star, n + D + 1/2].
Eigen::MatrixXd lambda_continuum(double n_star, int n, long long D, double h) {
    const long long nint = D + 1;
    const long long mf = std::llround((D + 1) / h);
    Eigen::MatrixXd qf(mf, mf);
    Eigen::VectorXd uf(mf);
    for (long long j = 0; j < mf; ++j)
        uf(j) = n_star + h * (static_cast<double>(j) + 0.5);
    for (long long i = 0; i < mf; ++i)
        for (long long j = 0; j < mf; ++j)
            qf(i, j) = continuum::q_continuum_closed(n_star, uf(i), uf(j));
    Eigen::MatrixXd qc(mf, nint);   // q(u_j, y)
    Eigen::MatrixXd qxf(nint, mf);  // q(x, u_j)
    Eigen::MatrixXd qi(nint, nint);
    for (long long m = 0; m < nint; ++m) {
        double y = static_cast<double>(n + m);
        for (long long j = 0; j < mf; ++j) {
            qc(j, m) = continuum::q_continuum_closed(n_star, uf(j), y);
            qxf(m, j) = continuum::q_continuum_closed(n_star, y, uf(j));
        }
        for (long long i = 0; i < nint; ++i)
            qi(i, m) = continuum::q_continuum_closed(
                n_star, static_cast<double>(n + i), y);
    }
    Eigen::MatrixXd sys =
        Eigen::MatrixXd::Identity(mf, mf) - h * qf;
    // lambda_f(., y) solves (I - h q_f) X = q(., y)
    Eigen::MatrixXd lf = sys.partialPivLu().solve(qc);
    return qi + h * qxf * lf;
}

}  // namespace

double OperatorTable::at(long long x, long long y) const {
    if (x < x_lo || x > x_hi || y < y_lo || y > y_hi)
        throw DomainError("operator table index out of range");
    return entries(static_cast<Eigen::Index>(x - x_lo),
                   static_cast<Eigen::Index>(y - y_lo));
}

SegmentOperators::SegmentOperators(const WalkLaw& law,
                                   const continuum::SegmentSpec& seg,
                                   long long D)
    : seg_(seg), D_(D) {
    const int n = seg.n;
    if (D < 1) throw DomainError("operator extent must be positive");
    Ds_ = inner_depth(n, D);
    if (Ds_ < 2 * n)
        throw BudgetInfeasible("segment too wide for the half-line cap");
    wm_ = 2 * n + Ds_;
    const long long wp =
        std::min(kMaxWindow, std::max<long long>(4 * (2 * n + D), 256));
    if (wp < 2 * n + D)
        throw BudgetInfeasible("operator extent beyond the half-line cap");

    pk::PotentialKernel kernel(law);
    halfline::HalfLineSolver minus(kernel, wm_);
    rm_.resize(D_ + 1, 2 * wm_);
    for (long long i = 0; i <= D_; ++i)
        rm_.row(i) = minus.minus_row({i, 0}).transpose();

    WalkLaw flipped = horizontally_flipped(law);
    flipped.name = law.name + "-hflip";
    pk::PotentialKernel kernel_f(flipped);
    halfline::HalfLineSolver plus(kernel_f, wp);
    Eigen::MatrixXd rp(Ds_ + 1, 2 * wp);
    for (long long t = 0; t <= Ds_; ++t)
        rp.row(t) = plus.minus_row({t, 0}).transpose();

    // Q = Mm * Mp over the inner sites s = -n - t, t = 0..Ds
    Eigen::MatrixXd mm(D_ + 1, Ds_ + 1);
    for (long long i = 0; i <= D_; ++i)
        for (long long t = 0; t <= Ds_; ++t)
            mm(i, t) = rm_(i, 2 * n + t - 1);
    const long long ycols = 2 * n + D_;  // y in [-n+1, n+D]
    q_.kind = "Q";
    q_.n = n;
    q_.x_lo = n;
    q_.x_hi = n + D_;
    q_.y_lo = -n + 1;
    q_.y_hi = n + D_;
    q_.entries = mm * rp.leftCols(ycols);

    // truncation model: the dropped s-mass T(i) feeds back through entries
    // no larger than the farthest H^+ row; beyond-window leakage of the
    // half-line solves re-enters with a first-passage profile ~ 1/(pi
    // sqrt(window)).
    double tmax = 0.0;
    for (long long i = 0; i <= D_; ++i)
        tmax = std::max(tmax, rm_.row(i).segment(wm_, wm_).sum());
    const double far_plus = rp.row(Ds_).head(ycols).maxCoeff();
    const double leak = 1.0 / (kPi * std::sqrt(static_cast<double>(wm_)));
    q_.trunc_err = tmax * (far_plus + leak);
    ki_trunc_ = tmax * leak;
    row_far_.resize(D_ + 1);
    for (long long i = 0; i <= D_; ++i) {
        double full = mm.row(i).sum();
        double within = q_.entries.row(i).sum();
        double dropped = rm_.row(i).segment(wm_, wm_).sum();
        row_far_(i) = std::max(0.0, full - within + dropped);
    }
    q_.row_tail = row_far_.maxCoeff();
}

OperatorTable SegmentOperators::Q_I() const {
    OperatorTable t;
    t.kind = "Q_I";
    t.n = seg_.n;
    t.x_lo = q_.x_lo;
    t.x_hi = q_.x_hi;
    t.y_lo = -seg_.n + 1;
    t.y_hi = seg_.n - 1;
    t.entries = q_.entries.leftCols(2 * seg_.n - 1);
    t.trunc_err = q_.trunc_err;
    return t;
}

OperatorTable SegmentOperators::K_I() const {
    const int n = seg_.n;
    OperatorTable t;
    t.kind = "K_I";
    t.n = n;
    t.x_lo = q_.x_lo;
    t.x_hi = q_.x_hi;
    t.y_lo = -n + 1;
    t.y_hi = n - 1;
    t.entries.resize(D_ + 1, 2 * n - 1);
    for (long long i = 0; i <= D_; ++i)
        for (long long s = -n + 1; s <= n - 1; ++s)
            t.entries(i, s + n - 1) = rm_(i, n - s - 1);
    t.trunc_err = ki_trunc_;
    return t;
}

const OperatorTable& SegmentOperators::lambda() const {
    if (!lambda_) lambda_ = lambda_series(q_);
    return *lambda_;
}

OperatorTable build_Q(const WalkLaw& law, const continuum::SegmentSpec& seg,
                      long long D) {
    return SegmentOperators(law, seg, D).Q();
}

OperatorTable lambda_series(const OperatorTable& Qtab, int kmax) {
    if (Qtab.kind != "Q") throw DomainError("lambda_series expects a Q table");
    const int n = Qtab.n;
    const long long D = Qtab.x_hi - Qtab.x_lo;
    const Eigen::Index off = static_cast<Eigen::Index>(n - Qtab.y_lo);
    Eigen::MatrixXd S = Qtab.entries.middleCols(off, D + 1);
    const double pbar = S.rowwise().sum().maxCoeff();
    if (pbar >= 1.0)
        throw SeriesNotConverged("truncated Q is not sub-stochastic");
    Eigen::MatrixXd lam = S, p = S;
    long long k = 1;
    while (k < kmax) {
        Eigen::MatrixXd inc = p * lam;
        lam += inc;
        k *= 2;
        if (inc.cwiseAbs().maxCoeff() < 1e-10) break;
        p = p * p;
    }
    OperatorTable t;
    t.kind = "Lambda";
    t.n = n;
    t.x_lo = t.y_lo = n;
    t.x_hi = t.y_hi = n + D;
    t.entries = std::move(lam);
    const double colmax = S.maxCoeff();
    const double geom = colmax * std::pow(pbar, static_cast<double>(k)) /
                        (1.0 - pbar);
    t.trunc_err = geom + Qtab.row_tail * colmax / (1.0 - pbar) +
                  Qtab.trunc_err / ((1.0 - pbar) * (1.0 - pbar));
    t.row_tail = Qtab.row_tail / (1.0 - pbar);
    return t;
}

HittingDistribution reconstruct_segment_hit(const WalkLaw& law,
                                            const continuum::SegmentSpec& seg,
                                            long long x) {
    const int n = seg.n;
    if (x <= -n) {
        WalkLaw flipped = horizontally_flipped(law);
        flipped.name = law.name + "-hflip";
        auto mirrored = reconstruct_segment_hit(flipped, seg, -x);
        HittingDistribution out = mirrored;
        out.start = {x, 0};
        out.table.clear();
        for (const auto& [s, p] : mirrored.table) out.table[-s] = p;
        return out;
    }
    if (x < n)
        throw DomainError("the segment decomposition needs an exterior start");
    const long long D = std::max<long long>({64, 16 * n, 2 * (x - n) + 8});
    SegmentOperators ops(law, seg, D);
    OperatorTable qi = ops.Q_I(), ki = ops.K_I();
    Eigen::MatrixXd t = qi.entries + ki.entries;  // rows y, cols s

    // The identity H = (Q_I + K_I) + Q H iterated over returns y >= n. Mass
    // returning beyond n+D still hits the segment eventually; close the
    // system by giving it the far profile hm(s), itself obtained by 1/y
    // extrapolation of the solved rows and iterated to consistency.
    const Eigen::Index off = static_cast<Eigen::Index>(n - ops.Q().y_lo);
    Eigen::MatrixXd S = ops.Q().entries.middleCols(off, D + 1);
    const Eigen::VectorXd& r = ops.row_far();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(
        Eigen::MatrixXd::Identity(D + 1, D + 1) - S);
    // first pass: far mass behaves like the farthest computed row
    Eigen::MatrixXd s0 = S;
    s0.col(D) += r;
    Eigen::MatrixXd h = Eigen::PartialPivLU<Eigen::MatrixXd>(
                            Eigen::MatrixXd::Identity(D + 1, D + 1) - s0)
                            .solve(t);
    const double y1 = static_cast<double>(n + D / 2);
    const double y2 = static_cast<double>(n + D);
    double delta = 0.0;
    for (int pass = 0; pass < 3; ++pass) {
        Eigen::RowVectorXd hm =
            (y2 * h.row(D) - y1 * h.row(D / 2)) / (y2 - y1);
        hm = hm.cwiseMax(0.0);
        Eigen::MatrixXd h2 = lu.solve(t + r * hm);
        delta = (h2 - h).cwiseAbs().maxCoeff();
        h = std::move(h2);
    }

    HittingDistribution out;
    out.target = "segment(" + std::to_string(n) + ")";
    out.start = {x, 0};
    out.method = Method::potential_kernel;
    Eigen::Index row = static_cast<Eigen::Index>(x - n);
    for (long long s = -n + 1; s <= n - 1; ++s)
        out.table[s] = h(row, static_cast<Eigen::Index>(s + n - 1));
    const double lrow = lu.solve(Eigen::VectorXd::Ones(D + 1))(row);
    const double far_scale = 2.0 * n / static_cast<double>(n + D);
    out.deficit = (qi.trunc_err + ki.trunc_err) * lrow + 2.0 * delta +
                  r.maxCoeff() * h.row(D).maxCoeff() * far_scale * far_scale;
    return out;
}

EtaReport eta_resolvent_check(const WalkLaw& law,
                              const continuum::SegmentSpec& seg, long long x_lo,
                              long long x_hi, long long D) {
    const int n = seg.n;
    const double ns = seg.n_star();
    if (D == 0) D = 16 * n;
    if (x_lo < n || x_hi > n + D || x_lo > x_hi)
        throw DomainError("eta check grid outside [n, n+D]");
    SegmentOperators ops(law, seg, D);
    const OperatorTable& lamt = ops.lambda();
    const Eigen::Index off =
        static_cast<Eigen::Index>(n - ops.Q().y_lo);
    Eigen::MatrixXd S = ops.Q().entries.middleCols(off, D + 1);

    Eigen::MatrixXd lam_h = lambda_continuum(ns, n, D, 0.25);
    Eigen::MatrixXd lam = lambda_continuum(ns, n, D, 0.125);
    EtaReport rep;
    rep.quad_term = (4.0 / 3.0) * (lam_h - lam).cwiseAbs().maxCoeff();

    Eigen::MatrixXd qd(D + 1, D + 1);
    for (long long i = 0; i <= D; ++i)
        for (long long j = 0; j <= D; ++j)
            qd(i, j) = continuum::q_continuum_closed(
                ns, static_cast<double>(n + i), static_cast<double>(n + j));
    Eigen::MatrixXd eta = S - qd;
    rep.sup_eta = eta.cwiseAbs().maxCoeff();
    rep.sup_eta_over_q = (eta.cwiseAbs().array() / qd.array()).maxCoeff();

    const Eigen::MatrixXd& L = lamt.entries;
    Eigen::MatrixXd lhs = L - lam;
    Eigen::MatrixXd rhs = eta + L * eta + eta * lam + L * eta * lam;
    Eigen::Index g0 = static_cast<Eigen::Index>(x_lo - n);
    Eigen::Index gn = static_cast<Eigen::Index>(x_hi - x_lo + 1);
    rep.sup_residual =
        (lhs - rhs).block(g0, g0, gn, gn).cwiseAbs().maxCoeff();
    rep.grid_points = static_cast<int>(gn * gn);

    // unit-cell midpoint-vs-average second-difference terms
    Eigen::MatrixXd cq(D + 1, D + 1), cl(D + 1, D + 1);
    for (long long i = 0; i <= D; ++i) {
        long long ip = std::min(D - 1, std::max<long long>(1, i));
        for (long long j = 0; j <= D; ++j) {
            double d2 = qd(ip + 1, j) - 2.0 * qd(ip, j) + qd(ip - 1, j);
            cq(i, j) = std::abs(d2) / 24.0;
            double e2 = lam(ip + 1, j) - 2.0 * lam(ip, j) + lam(ip - 1, j);
            cl(i, j) = std::abs(e2) / 24.0;
        }
    }
    Eigen::MatrixXd cell = cq + L * cq + cq * lam + L * cq * lam +
                           eta.cwiseAbs() * cl + L * eta.cwiseAbs() * cl;
    rep.cell_term = cell.block(g0, g0, gn, gn).maxCoeff();

    // Both sides are built from the same truncated tables, so the
    // y-truncation cancels between them; what remains is the lambda
    // quadrature, the unit-cell midpoint-vs-average mismatch, and the
    // Neumann stopping tail of Lambda.
    const double lr = 1.0 + lam.rowwise().sum().maxCoeff();
    const double Lr = 1.0 + L.rowwise().sum().maxCoeff();
    const double pbar = S.rowwise().sum().maxCoeff();
    rep.trunc_term = 1e-10 * (1.0 + S.maxCoeff() / (1.0 - pbar));
    rep.budget = rep.quad_term * Lr * lr + rep.cell_term + rep.trunc_term;
    return rep;
}

ProbeReport bound_probe(const std::string& which, const WalkLaw& law,
                        const continuum::SegmentSpec& seg, long long D) {
    const int n = seg.n;
    const double ns = seg.n_star();
    if (D == 0) D = 8 * n;
    ProbeReport rep;
    rep.probe = which;
    rep.n = n;
    auto push = [&](double x, double ys, double lhs, double rhs) {
        ProbeRow r{x, ys, lhs, rhs, rhs != 0.0 ? lhs / rhs : 0.0};
        rep.rows.push_back(r);
    };
    const long long xstep = std::max<long long>(1, D / 16);

    if (which == "I" || which == "Iprime") {
        for (long long x = n + 2; x <= n + D; x += xstep) {
            if (which == "I") {
                for (long long y = -n + 2; y <= n + D; y += xstep) {
                    double lhs = continuum::q_continuum_closed(ns, x, y);
                    double lg =
                        x == y ? 1.0 / (x + 2.0 * n)
                               : std::log((x + 2.0 * n) / (y + 2.0 * n)) /
                                     static_cast<double>(x - y);
                    double rhs = std::sqrt((x - ns) / (ns + y)) * std::abs(lg);
                    push(x, y, lhs, rhs);
                }
            } else {
                for (long long s = -n + 2; s <= n - 2; ++s) {
                    double lhs = continuum::q_continuum_closed(ns, x, s);
                    double rhs = std::sqrt((x - ns) / (ns + s)) *
                                 (1.0 + std::log(x / ns)) / x;
                    push(x, s, lhs, rhs);
                }
            }
        }
    } else if (which == "II" || which == "IV" || which == "V" ||
               which == "VI" || which == "lemma31" || which == "III") {
        SegmentOperators ops(law, seg, D);
        const Eigen::Index off =
            static_cast<Eigen::Index>(n - ops.Q().y_lo);
        if (which == "II") {
            for (long long x = n + 2; x <= n + D; x += xstep)
                for (long long y = -n + 2; y <= n + D; y += xstep) {
                    double q = continuum::q_continuum_closed(ns, x, y);
                    double lhs = std::abs(ops.Q().at(x, y) - q) / q;
                    double rhs = 1.0 / std::sqrt(std::min(x - ns, y + ns));
                    push(x, y, lhs, rhs);
                }
        } else if (which == "IV") {
            const OperatorTable& lam = ops.lambda();
            for (long long x = n; x <= n + D; x += xstep) {
                double lhs =
                    lam.entries.row(static_cast<Eigen::Index>(x - n)).sum();
                push(x, 0, lhs, std::sqrt((x - ns) / x));
            }
        } else if (which == "V" || which == "lemma31") {
            const Eigen::MatrixXd& M =
                which == "V" ? ops.lambda().entries
                             : static_cast<const Eigen::MatrixXd&>(
                                   ops.Q().entries);
            for (long long x = n + 1; x <= n + D; x += xstep)
                for (long long s :
                     {static_cast<long long>(-n + 2),
                      static_cast<long long>(-n / 2), 0LL,
                      static_cast<long long>(n / 2),
                      static_cast<long long>(n - 2)}) {
                    if (s <= -n + 1 || s >= n - 1) continue;
                    double lhs = 0.0;
                    for (long long y = n; y <= n + D; ++y) {
                        double v = which == "V"
                                       ? M(x - n, y - n)
                                       : M(x - n, y - ops.Q().y_lo);
                        lhs += v / static_cast<double>(y - s);
                    }
                    double rhs =
                        which == "V"
                            ? std::sqrt((x - ns) / x) *
                                  std::log(3.0 * n / (n - s)) / n
                            : std::sqrt(x - ns) / (x * std::sqrt(1.0 * n)) *
                                  (1.0 + std::log(1.0 * x / n)) *
                                  std::log(3.0 * n / (n - s));
                    push(x, s, lhs, rhs);
                }
        } else if (which == "VI") {
            const OperatorTable& lam = ops.lambda();
            for (long long x = n; x <= n + D; x += xstep)
                for (long long N : {1LL, 2LL, 5LL, 10LL}) {
                    double lhs = 0.0;
                    for (long long y = n; y <= std::min(n + N, n + D); ++y)
                        lhs += lam.at(x, y);
                    push(x, N, lhs,
                         std::sqrt((x - ns) / x) * static_cast<double>(N) / n);
                }
        } else {  // III
            Eigen::MatrixXd qd(D + 1, D + 1);
            for (long long i = 0; i <= D; ++i)
                for (long long j = 0; j <= D; ++j)
                    qd(i, j) = continuum::q_continuum_closed(
                        ns, static_cast<double>(n + i),
                        static_cast<double>(n + j));
            Eigen::MatrixXd S = ops.Q().entries.middleCols(off, D + 1);
            Eigen::MatrixXd eta = (S - qd).cwiseAbs();
            Eigen::MatrixXd lam = lambda_continuum(ns, n, D, 0.25);
            Eigen::MatrixXd tc(D + 1, 2 * n - 1);
            for (long long i = 0; i <= D; ++i)
                for (long long s = -n + 1; s <= n - 1; ++s) {
                    double y = static_cast<double>(n + i);
                    tc(i, s + n - 1) =
                        continuum::q_continuum_closed(ns, y, s) +
                        std::sqrt(y - ns) /
                            (kPi * (y - s) * std::sqrt(ns - s));
                }
            Eigen::MatrixXd res = eta * (tc + lam * tc);
            for (long long x = n; x <= n + D; x += xstep)
                for (long long s = -n + 2; s <= n - 2; ++s) {
                    double lg = std::log(x / ns);
                    double rhs = (1.0 + lg * lg) /
                                 (std::sqrt(1.0 * x) *
                                  std::sqrt(ns * ns - 1.0 * s * s));
                    push(x, s, res(x - n, s + n - 1), rhs);
                }
        }
    } else {
        throw DomainError("unknown probe: " + which);
    }

    rep.sup_ratio = 0.0;
    rep.inf_ratio = std::numeric_limits<double>::infinity();
    for (const auto& r : rep.rows) {
        rep.sup_ratio = std::max(rep.sup_ratio, r.ratio);
        rep.inf_ratio = std::min(rep.inf_ratio, r.ratio);
    }
    return rep;
}

}  // namespace lhit::series
