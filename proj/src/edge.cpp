#include "lhit/edge.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "lhit/errors.hpp"
#include "lhit/hitting.hpp"
#include "lhit/potential_kernel.hpp"
#include "lhit/quadrature.hpp"

namespace lhit::edge {

namespace {

constexpr double kPi = std::numbers::pi;

// sum_{k > W} H_0(k - j) g(k) continued with the tail law
// H_0(m) ~ sigma2 / (pi m^2) and g(k) = 2 sqrt(k)/sigma2, i.e.
// (2/pi) int_W^inf sqrt(t) (t - j)^{-2} dt, which is elementary (t = v^2).
double far_tail(double j, double W) {
    const double v0 = std::sqrt(W + 0.5);
    double integral;
    if (j > 0.0) {
        const double r = std::sqrt(j);
        integral = v0 / (v0 * v0 - j) +
                   std::log((v0 + r) / (v0 - r)) / (2.0 * r);
    } else if (j < 0.0) {
        const double r = std::sqrt(-j);
        integral = (kPi / 2.0 - std::atan(v0 / r)) / r + v0 / (v0 * v0 - j);
    } else {
        integral = 2.0 / v0;
    }
    return (2.0 / kPi) * integral;
}

}  // namespace

OverstepLaw axis_overstep_law(const WalkLaw& law, long long window) {
    axis::AxisSystem sys(law);
    if (window >= sys.half_window())
        throw WindowTooSmall("overstep window exceeds the transform grid");
    OverstepLaw out;
    double sum = 0.0;
    for (long long s = -window; s <= window; ++s) {
        double p = std::max(0.0, sys.overstep_at(s));
        out.table[s] = p;
        sum += p;
    }
    out.deficit = std::max(0.0, 1.0 - sum) + sys.table_deficit();
    return out;
}

double EdgeFunctionTable::at(long long j) const {
    auto it = values.find(j);
    if (it == values.end())
        throw DomainError("edge table index outside the window");
    return it->second;
}

EdgeFunctionTable compute_nu(const WalkLaw& law, long long M, double tol) {
    if (M < 50) throw WindowTooSmall("edge window too small to fit the tail");
    axis::AxisSystem sys(law);
    const long long wk = 8 * M;
    if (wk + M >= sys.half_window())
        throw WindowTooSmall("edge window exceeds the transform grid");
    const double sigma2 = validate(law).sigma2;
    auto g = [&](double k) { return 2.0 * std::sqrt(k) / sigma2; };

    const Eigen::Index m1 = static_cast<Eigen::Index>(M + 1);
    Eigen::MatrixXd sysm(m1, m1);
    Eigen::VectorXd b(m1);
    for (long long j = 0; j <= M; ++j) {
        for (long long k = 0; k <= M; ++k)
            sysm(j, k) = (j == k ? 1.0 : 0.0) - sys.overstep_at(k - j);
        double s = 0.0;
        for (long long k = M + 1; k <= wk; ++k)
            s += sys.overstep_at(k - j) * g(static_cast<double>(k));
        b(j) = s + far_tail(static_cast<double>(j), static_cast<double>(wk));
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sysm);
    Eigen::VectorXd nup = lu.solve(b);
    const double lures = (sysm * nup - b).cwiseAbs().maxCoeff();

    EdgeFunctionTable out;
    out.kind = "nu";
    out.M = M;
    out.sigma2 = sigma2;
    for (long long j = 0; j <= M; ++j) out.values[j] = nup(j);
    for (long long j = -M; j <= -1; ++j) {
        double s = 0.0;
        for (long long k = 0; k <= M; ++k)
            s += sys.overstep_at(k - j) * nup(k);
        for (long long k = M + 1; k <= wk; ++k)
            s += sys.overstep_at(k - j) * g(static_cast<double>(k));
        out.values[j] =
            s + far_tail(static_cast<double>(j), static_cast<double>(wk));
    }
    out.residual = lures + sys.table_deficit();
    double fit = 0.0;
    long long cnt = 0;
    for (long long y = M / 2; y <= M; ++y, ++cnt)
        fit += out.values[-y] * std::sqrt(static_cast<double>(y));
    out.tail_fit = fit / static_cast<double>(cnt);
    if (out.residual > tol)
        throw NotConverged("edge renewal residual above tolerance");
    return out;
}

EdgeFunctionTable compute_mu(const WalkLaw& law, long long M, double tol) {
    EdgeFunctionTable t = compute_nu(reversed(law), M, tol);
    t.kind = "mu";
    return t;
}

series::ProbeReport corollary1_probe(const WalkLaw& law,
                                     const continuum::SegmentSpec& seg,
                                     long long M) {
    const int n = seg.n;
    auto nu = compute_nu(law, M, 1e-6);
    auto mu = compute_mu(law, M, 1e-6);
    pk::PotentialKernel kernel(law);
    FiniteSetSolver solver(kernel, segment_sites(seg));
    const Eigen::VectorXd& hm = solver.harmonic_measure();

    series::ProbeReport rep;
    rep.probe = "cor1";
    rep.n = n;
    rep.sup_ratio = 0.0;
    rep.inf_ratio = std::numeric_limits<double>::infinity();
    for (long long s = -n + 1; s <= n - 1; ++s) {
        double lhs = kPi * hm(static_cast<Eigen::Index>(s + n - 1));
        double rhs = mu.at(-n + s) * nu.at(-n - s);
        series::ProbeRow r{static_cast<double>(n), static_cast<double>(s),
                           lhs, rhs, lhs / rhs};
        rep.rows.push_back(r);
        rep.sup_ratio = std::max(rep.sup_ratio, r.ratio);
        rep.inf_ratio = std::min(rep.inf_ratio, r.ratio);
    }
    return rep;
}

}  // namespace lhit::edge
