#include "lhit/halfline.hpp"

#include <algorithm>
#include <cmath>

#include "lhit/errors.hpp"

namespace lhit::halfline {

namespace {

constexpr long long kMaxDepth = 2048;  // dense solve capped at (2D)^2 = 4096^2

long long default_depth(const LatticePoint& start) {
    long long d = std::max<long long>(64, 4 * std::llabs(start.x));
    return std::min(d, kMaxDepth);
}

}  // namespace

double HalfLineDistribution::at(long long s) const {
    auto it = table.find(s);
    return it == table.end() ? 0.0 : it->second;
}

double HalfLineDistribution::window_mass() const {
    double m = 0.0;
    for (const auto& [s, p] : table) m += p;
    return m;
}

HalfLineSolver::HalfLineSolver(const pk::PotentialKernel& kernel, long long D)
    : D_(D) {
    if (D < 1) throw DomainError("half-line depth must be positive");
    if (D > kMaxDepth)
        throw BudgetInfeasible("half-line depth beyond the dense-solve cap");
    std::vector<LatticePoint> sites;
    sites.reserve(static_cast<std::size_t>(2 * D));
    for (long long s = -1; s >= -2 * D; --s) sites.push_back({s, 0});
    solver_ = std::make_unique<FiniteSetSolver>(kernel, std::move(sites));
}

Eigen::VectorXd HalfLineSolver::minus_row(const LatticePoint& x) const {
    return solver_->hit_from(x);
}

HalfLineDistribution HalfLineSolver::minus(const LatticePoint& x) const {
    Eigen::VectorXd v = solver_->hit_from(x);
    HalfLineDistribution out;
    out.sign = -1;
    out.start = x;
    out.D = D_;
    double win = 0.0;
    for (long long s = -1; s >= -D_; --s) {
        double p = std::max(0.0, v(static_cast<Eigen::Index>(-s - 1)));
        out.table[s] = p;
        win += p;
    }
    out.tail_bound = std::max(0.0, 1.0 - win);
    out.fitted_c = out.tail_bound * std::sqrt(static_cast<double>(D_));
    return out;
}

HalfLineDistribution hit_halfline(const WalkLaw& law, int sign,
                                  const LatticePoint& start, long long D) {
    if (sign != 1 && sign != -1) throw DomainError("half-line sign");
    if (D == 0) D = default_depth(start);
    if (sign == 1) {
        WalkLaw flipped = horizontally_flipped(law);
        flipped.name = law.name + "-hflip";
        auto m = hit_halfline(flipped, -1, {-start.x, start.y}, D);
        HalfLineDistribution out;
        out.sign = 1;
        out.start = start;
        out.D = m.D;
        out.tail_bound = m.tail_bound;
        out.fitted_c = m.fitted_c;
        for (const auto& [s, p] : m.table) out.table[-s] = p;
        return out;
    }
    pk::PotentialKernel kernel(law);
    HalfLineSolver hs(kernel, D);
    const bool on_target = start.y == 0 && start.x <= -1;
    if (!on_target) return hs.minus(start);
    // first visit after time 0: one explicit step, then the exterior law
    HalfLineDistribution out;
    out.sign = -1;
    out.start = start;
    out.D = D;
    for (long long s = -1; s >= -D; --s) out.table[s] = 0.0;
    double win = 0.0;
    for (std::size_t i = 0; i < law.support.size(); ++i) {
        LatticePoint z{start.x + law.support[i].x, start.y + law.support[i].y};
        const double p = law.probs[i];
        if (z.y == 0 && z.x <= -1) {
            if (z.x >= -D) {
                out.table[z.x] += p;
                win += p;
            }
            continue;
        }
        auto sub = hs.minus(z);
        for (const auto& [s, q] : sub.table) out.table[s] += p * q;
        win += p * sub.window_mass();
    }
    out.tail_bound = std::max(0.0, 1.0 - win);
    out.fitted_c = out.tail_bound * std::sqrt(static_cast<double>(D));
    return out;
}

}  // namespace lhit::halfline
