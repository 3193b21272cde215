#include "lhit/hitting.hpp"

#include <Eigen/SparseLU>
#include <Eigen/SparseCore>
#include <cmath>

#include "lhit/errors.hpp"

namespace lhit {

std::string method_name(Method m) {
    switch (m) {
        case Method::potential_kernel: return "potential-kernel";
        case Method::truncated_solve: return "truncated-solve";
        case Method::monte_carlo: return "monte-carlo";
    }
    return "?";
}

double HittingDistribution::total_mass() const {
    double s = 0.0;
    for (const auto& [k, v] : table) s += v;
    return s;
}

double HittingDistribution::at(long long s) const {
    auto it = table.find(s);
    return it == table.end() ? 0.0 : it->second;
}

FiniteSetSolver::FiniteSetSolver(const pk::PotentialKernel& kernel,
                                 std::vector<LatticePoint> sites)
    : kernel_(kernel), sites_(std::move(sites)) {
    const auto N = static_cast<Eigen::Index>(sites_.size());
    if (N == 0) throw DomainError("hit_finite_set: empty target set");
    Eigen::MatrixXd M(N + 1, N + 1);
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = 0; j < N; ++j)
            M(i, j) = kernel_(sites_[i].x - sites_[j].x,
                              sites_[i].y - sites_[j].y);
        M(i, N) = 1.0;
        M(N, i) = 1.0;
    }
    M(N, N) = 0.0;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N + 1, N);
    B.topRows(N).setIdentity();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    coeff_ = lu.solve(B);
    residual_ = (M * coeff_ - B).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual_) || residual_ > 1e-6) {
        // cheap condition estimate from the LU factors' diagonal spread
        const auto& U = lu.matrixLU();
        double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i <= N; ++i) {
            double d = std::abs(U(i, i));
            dmax = std::max(dmax, d);
            dmin = std::min(dmin, d);
        }
        throw SingularSystem("finite-set system residual " +
                             std::to_string(residual_) +
                             ", diag ratio " + std::to_string(dmax / dmin));
    }
    hm_ = coeff_.row(N).transpose();
}

Eigen::VectorXd FiniteSetSolver::hit_from(const LatticePoint& x) const {
    const auto N = static_cast<Eigen::Index>(sites_.size());
    Eigen::VectorXd v(N + 1);
    for (Eigen::Index j = 0; j < N; ++j)
        v(j) = kernel_(x.x - sites_[j].x, x.y - sites_[j].y);
    v(N) = 1.0;
    return coeff_.transpose() * v;
}

namespace {

// clip the -1e-15-size negatives the linear algebra can leave behind
double clip(double p) { return (p < 0.0 && p > -1e-9) ? 0.0 : p; }

HittingDistribution from_vector(const std::vector<LatticePoint>& sites,
                                const Eigen::VectorXd& probs,
                                std::string target, LatticePoint start,
                                Method method) {
    HittingDistribution out;
    out.target = std::move(target);
    out.start = start;
    out.method = method;
    double sum = 0.0;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        double p = clip(probs(static_cast<Eigen::Index>(i)));
        out.table[sites[i].x] = p;
        sum += p;
    }
    out.deficit = std::abs(1.0 - sum);
    return out;
}

}  // namespace

HittingDistribution hit_finite_set(const pk::PotentialKernel& kernel,
                                   const std::vector<LatticePoint>& A,
                                   const LatticePoint& x) {
    for (const auto& w : A)
        if (w.y != 0)
            throw DomainError(
                "hit_finite_set wrapper keys sites by the first coordinate; "
                "use FiniteSetSolver directly for off-axis sets");
    FiniteSetSolver solver(kernel, A);
    return from_vector(A, solver.hit_from(x), "finite-set", x,
                       Method::potential_kernel);
}

std::vector<LatticePoint> segment_sites(const continuum::SegmentSpec& seg) {
    std::vector<LatticePoint> sites;
    sites.reserve(seg.num_sites());
    for (long long s = -seg.n + 1; s <= seg.n - 1; ++s)
        sites.push_back({s, 0});
    return sites;
}

HittingDistribution hit_segment(const WalkLaw& law,
                                const pk::PotentialKernel& kernel,
                                const continuum::SegmentSpec& seg,
                                const LatticePoint& x) {
    auto sites = segment_sites(seg);
    FiniteSetSolver solver(kernel, sites);
    const auto N = static_cast<Eigen::Index>(sites.size());
    auto on_segment = [&](const LatticePoint& p) {
        return p.y == 0 && std::llabs(p.x) <= seg.n - 1;
    };
    Eigen::VectorXd probs;
    if (on_segment(x)) {
        // first visit after time 0: one explicit step of the law
        probs = Eigen::VectorXd::Zero(N);
        for (std::size_t i = 0; i < law.support.size(); ++i) {
            LatticePoint p{x.x + law.support[i].x, x.y + law.support[i].y};
            if (on_segment(p))
                probs(p.x + seg.n - 1) += law.probs[i];
            else
                probs += law.probs[i] * solver.hit_from(p);
        }
    } else {
        probs = solver.hit_from(x);
    }
    return from_vector(sites, probs, "segment(" + std::to_string(seg.n) + ")",
                       x, Method::potential_kernel);
}

HittingDistribution hit_segment_box(const WalkLaw& law,
                                    const continuum::SegmentSpec& seg,
                                    const LatticePoint& x, int box_radius) {
    const long long L = box_radius;
    if (std::llabs(x.x) >= L || std::llabs(x.y) >= L)
        throw DomainError("hit_segment_box: start outside the box");
    auto on_segment = [&](long long i, long long j) {
        return j == 0 && std::llabs(i) <= seg.n - 1;
    };
    if (on_segment(x.x, x.y))
        throw DomainError("hit_segment_box: start on the segment "
                          "(use hit_segment for the one-step convention)");
    const long long W = 2 * L + 1;
    auto id = [&](long long i, long long j) {
        return static_cast<int>((i + L) * W + (j + L));
    };
    auto in_box = [&](long long i, long long j) {
        return std::llabs(i) <= L && std::llabs(j) <= L;
    };
    const int dim = static_cast<int>(W * W);
    // expected visits m before absorption: (I - P^T) m = delta_x; segment
    // sites are kept in the state space as zero rows/cols via the identity
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(dim) * (law.size() + 1));
    for (long long i = -L; i <= L; ++i)
        for (long long j = -L; j <= L; ++j) {
            trips.emplace_back(id(i, j), id(i, j), 1.0);
            if (on_segment(i, j)) continue;
            for (std::size_t k = 0; k < law.size(); ++k) {
                long long vi = i + law.support[k].x;
                long long vj = j + law.support[k].y;
                if (in_box(vi, vj) && !on_segment(vi, vj))
                    trips.emplace_back(id(vi, vj), id(i, j), -law.probs[k]);
            }
        }
    Eigen::SparseMatrix<double> A(dim, dim);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
    b(id(x.x, x.y)) = 1.0;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
    solver.compute(A);
    if (solver.info() != Eigen::Success)
        throw SingularSystem("box solve factorization failed");
    Eigen::VectorXd m = solver.solve(b);
    if (solver.info() != Eigen::Success)
        throw SingularSystem("box solve did not converge");

    HittingDistribution out;
    out.target = "segment(" + std::to_string(seg.n) + ")";
    out.start = x;
    out.method = Method::truncated_solve;
    for (long long s = -seg.n + 1; s <= seg.n - 1; ++s) out.table[s] = 0.0;
    double sum = 0.0;
    for (long long i = -L; i <= L; ++i)
        for (long long j = -L; j <= L; ++j) {
            if (on_segment(i, j)) continue;
            double mv = m(id(i, j));
            if (mv == 0.0) continue;
            for (std::size_t k = 0; k < law.size(); ++k) {
                long long vi = i + law.support[k].x;
                long long vj = j + law.support[k].y;
                if (on_segment(vi, vj)) {
                    double p = mv * law.probs[k];
                    out.table[vi] += p;
                    sum += p;
                }
            }
        }
    for (auto& [s, p] : out.table) p = clip(p);
    out.deficit = std::max(0.0, 1.0 - sum);  // mass that left the box
    return out;
}

}  // namespace lhit
