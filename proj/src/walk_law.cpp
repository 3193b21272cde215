#include "lhit/walk_law.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "lhit/errors.hpp"

namespace lhit {

namespace {
constexpr double kTol = 1e-12;
}

bool WalkLaw::is_simple() const {
    if (support.size() != 4) return false;
    std::set<std::pair<long long, long long>> pts;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (std::abs(probs[i] - 0.25) > kTol) return false;
        pts.insert({support[i].x, support[i].y});
    }
    return pts == std::set<std::pair<long long, long long>>{
                      {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
}

int WalkLaw::max_dy() const {
    long long m = 0;
    for (const auto& p : support) m = std::max(m, p.y);
    return static_cast<int>(m);
}

int WalkLaw::min_dy() const {
    long long m = 0;
    for (const auto& p : support) m = std::min(m, p.y);
    return static_cast<int>(m);
}

bool WalkLaw::vertically_skip_free() const {
    return max_dy() <= 1 && min_dy() >= -1;
}

WalkLaw make_simple_walk() {
    WalkLaw law;
    law.support = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    law.probs = {0.25, 0.25, 0.25, 0.25};
    law.name = "srw";
    return law;
}

namespace {

// Breadth-first closure of sums of up to `depth` support vectors; the law is
// irreducible on Z^2 iff the closure, as a subgroup generator set, yields all
// of Z^2. We test that both (1,0) and (0,1) are reachable as differences of
// reachable points, which for a zero-mean aperiodic-or-not walk reduces to
// reaching lattice points whose differences generate Z^2.
bool generates_z2(const WalkLaw& law, int depth) {
    std::set<std::pair<long long, long long>> reached;
    reached.insert({0, 0});
    std::vector<LatticePoint> frontier{{0, 0}};
    const long long bound = 512;
    for (int k = 0; k < depth && !frontier.empty(); ++k) {
        std::vector<LatticePoint> next;
        for (const auto& p : frontier) {
            for (const auto& e : law.support) {
                LatticePoint q{p.x + e.x, p.y + e.y};
                if (std::abs(q.x) > bound || std::abs(q.y) > bound) continue;
                if (reached.insert({q.x, q.y}).second) next.push_back(q);
            }
        }
        frontier = std::move(next);
        // The reachable set of an irreducible recurrent walk contains (1,0)
        // and (0,1) eventually; stop as soon as both appear.
        if (reached.count({1, 0}) && reached.count({0, 1})) return true;
    }
    return reached.count({1, 0}) && reached.count({0, 1});
}

}  // namespace

MomentReport validate(const WalkLaw& law) {
    if (law.support.empty() || law.support.size() != law.probs.size())
        throw BadProbabilities("support/probability size mismatch");
    std::set<std::pair<long long, long long>> seen;
    double sum = 0.0;
    for (std::size_t i = 0; i < law.support.size(); ++i) {
        if (!(law.probs[i] > 0.0))
            throw BadProbabilities("probabilities must be positive");
        if (!seen.insert({law.support[i].x, law.support[i].y}).second)
            throw BadProbabilities("duplicate support point");
        sum += law.probs[i];
    }
    if (std::abs(sum - 1.0) > kTol)
        throw BadProbabilities("probabilities do not sum to 1");

    MomentReport rep;
    for (std::size_t i = 0; i < law.support.size(); ++i) {
        rep.mean[0] += law.probs[i] * static_cast<double>(law.support[i].x);
        rep.mean[1] += law.probs[i] * static_cast<double>(law.support[i].y);
    }
    if (std::abs(rep.mean[0]) > kTol || std::abs(rep.mean[1]) > kTol)
        throw NotZeroMean("mean increment is not (0,0)");
    for (std::size_t i = 0; i < law.support.size(); ++i) {
        double dx = static_cast<double>(law.support[i].x);
        double dy = static_cast<double>(law.support[i].y);
        rep.covariance[0][0] += law.probs[i] * dx * dx;
        rep.covariance[0][1] += law.probs[i] * dx * dy;
        rep.covariance[1][1] += law.probs[i] * dy * dy;
        double a = std::abs(dx);
        if (a > 0.0) rep.first_coord_log_moment += law.probs[i] * a * a * std::log(a);
    }
    rep.covariance[1][0] = rep.covariance[0][1];
    double det = rep.covariance[0][0] * rep.covariance[1][1] -
                 rep.covariance[0][1] * rep.covariance[0][1];
    if (!(det > 0.0) || !(rep.covariance[0][0] > 0.0))
        throw NotIrreducible("covariance is not positive definite");
    rep.sigma2 = std::sqrt(det);

    if (!generates_z2(law, 64))
        throw NotIrreducible("support does not generate Z^2");
    return rep;
}

WalkLaw reversed(const WalkLaw& law) {
    WalkLaw out = law;
    for (auto& p : out.support) {
        p.x = -p.x;
        p.y = -p.y;
    }
    out.name = law.name + ":reversed";
    return out;
}

WalkLaw vertically_flipped(const WalkLaw& law) {
    WalkLaw out = law;
    for (auto& p : out.support) p.y = -p.y;
    out.name = law.name + ":vflip";
    return out;
}

WalkLaw horizontally_flipped(const WalkLaw& law) {
    WalkLaw out = law;
    for (auto& p : out.support) p.x = -p.x;
    out.name = law.name + ":hflip";
    return out;
}

WalkLaw load_walk_law(const std::string& path_or_srw) {
    if (path_or_srw == "srw") return make_simple_walk();
    std::ifstream in(path_or_srw);
    if (!in) throw ConfigError("cannot open walk file: " + path_or_srw);
    WalkLaw law;
    law.name = path_or_srw;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long dx, dy;
        double p;
        if (ls >> dx >> dy >> p) {
            law.support.push_back({dx, dy});
            law.probs.push_back(p);
        }
    }
    if (law.support.empty())
        throw ConfigError("no increment records in " + path_or_srw);
    return law;
}

}  // namespace lhit
