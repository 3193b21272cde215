#include "lhit/mc.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "lhit/errors.hpp"

namespace lhit::mc {

namespace {

std::uint64_t splitmix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t st = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    for (auto& w : s) w = splitmix(st);
}

std::uint64_t Rng::next() {
    std::uint64_t r = rotl(s[0] + s[3], 23) + s[0];
    std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return r;
}

double Rng::uniform() { return (next() >> 11) * 0x1.0p-53; }

AliasTable::AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw DomainError("alias table needs weights");
    for (double w : weights) {
        if (w < 0.0) throw DomainError("alias table weight < 0");
        total_ += w;
    }
    if (!(total_ > 0.0)) throw DomainError("alias table weights all zero");
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i)
        scaled[i] = weights[i] * static_cast<double>(n) / total_;
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i)
        (scaled[i] < 1.0 ? small : large).push_back(
            static_cast<std::uint32_t>(i));
    while (!small.empty() && !large.empty()) {
        std::uint32_t s = small.back(), l = large.back();
        small.pop_back();
        large.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (std::uint32_t i : large) prob_[i] = 1.0;
    for (std::uint32_t i : small) prob_[i] = 1.0;
}

std::size_t AliasTable::sample(Rng& rng) const {
    std::uint64_t r = rng.next();
    std::size_t i = static_cast<std::size_t>(
        (static_cast<unsigned __int128>(r) * prob_.size()) >> 64);
    double u = (rng.next() >> 11) * 0x1.0p-53;
    return u < prob_[i] ? i : alias_[i];
}

namespace {

struct InducedTables {
    long long half = 0;
    AliasTable h0, desc, asc;

    static std::vector<double> clipped(const std::vector<double>& v) {
        std::vector<double> w(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            w[i] = std::max(0.0, v[i]);
        return w;
    }

    explicit InducedTables(const axis::AxisSystem& sys)
        : half(sys.half_window()),
          h0(clipped(sys.overstep())),
          desc(clipped(sys.descent_offset())),
          asc(clipped(sys.ascent_offset())) {}

    long long jump(const AliasTable& t, Rng& rng) const {
        return static_cast<long long>(t.sample(rng)) - half;
    }
};

struct Accum {
    std::vector<long long> sites;  // indexed per target
    long long far_plus = 0, far_minus = 0, censored = 0, tail = 0;

    void merge(const Accum& o) {
        for (std::size_t i = 0; i < sites.size(); ++i) sites[i] += o.sites[i];
        far_plus += o.far_plus;
        far_minus += o.far_minus;
        censored += o.censored;
        tail += o.tail;
    }
};

// absorb(x) returns the site index, or -1 when not absorbed
template <class Absorb>
void walk_induced(const InducedTables& tab, const LatticePoint& start,
                  long long far_radius, long long cap, Rng& rng,
                  const Absorb& absorb, Accum& acc) {
    long long x = start.x;
    if (start.y != 0) {
        const AliasTable& t = start.y > 0 ? tab.desc : tab.asc;
        for (long long k = std::llabs(start.y); k > 0; --k)
            x += tab.jump(t, rng);
        long long site = absorb(x);
        if (site >= 0) {
            ++acc.sites[static_cast<std::size_t>(site)];
            return;
        }
    }
    for (long long step = 0; step < cap; ++step) {
        if (x > far_radius) {
            ++acc.far_plus;
            return;
        }
        if (x < -far_radius) {
            ++acc.far_minus;
            return;
        }
        x += tab.jump(tab.h0, rng);
        long long site = absorb(x);
        if (site >= 0) {
            ++acc.sites[static_cast<std::size_t>(site)];
            return;
        }
    }
    ++acc.censored;
}

template <class Absorb>
Accum run_induced(const InducedTables& tab, std::size_t num_sites,
                  const LatticePoint& start, long long far_radius,
                  long long cap, std::uint64_t seed, std::uint64_t stream_base,
                  long long samples, int workers, const Absorb& absorb) {
    if (workers <= 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<int>(
        std::min<long long>(workers, std::max<long long>(1, samples)));
    std::vector<std::future<Accum>> futs;
    long long per = (samples + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        long long lo = w * per, hi = std::min(samples, lo + per);
        if (lo >= hi) break;
        futs.push_back(std::async(std::launch::async, [&, lo, hi] {
            Accum a;
            a.sites.assign(num_sites, 0);
            for (long long i = lo; i < hi; ++i) {
                Rng rng(seed, stream_base + static_cast<std::uint64_t>(i));
                walk_induced(tab, start, far_radius, cap, rng, absorb, a);
            }
            return a;
        }));
    }
    Accum total;
    total.sites.assign(num_sites, 0);
    for (auto& f : futs) total.merge(f.get());
    return total;
}

constexpr std::uint64_t kHmPlusBase = 1ULL << 62;
constexpr std::uint64_t kHmMinusBase = (1ULL << 62) + (1ULL << 61);

}  // namespace

HittingDistribution hit_segment_mc(const axis::AxisSystem& sys,
                                   const continuum::SegmentSpec& seg,
                                   const LatticePoint& x,
                                   const McConfig& cfg) {
    if (!sys.exact())
        throw WrongWalk("induced sampler needs a vertically skip-free law");
    long long R = std::min(cfg.far_radius, sys.half_window() - 1000);
    if (R < 8 * seg.n + std::llabs(x.x))
        throw DomainError("far_radius too small for this start");
    InducedTables tab(sys);
    const std::size_t ns = static_cast<std::size_t>(seg.num_sites());
    auto absorb = [&](long long p) -> long long {
        return std::llabs(p) <= seg.n - 1 ? p + seg.n - 1 : -1;
    };
    Accum main = run_induced(tab, ns, x, R, cfg.step_cap, cfg.seed, 0,
                             cfg.samples, cfg.chunk, absorb);

    // far-field continuation: restart passes from +-R with a 4R horizon,
    // closed self-consistently (the walker may cross to the other far side;
    // walkers beyond the horizon are approximated by the same bucket, an
    // error of the same O(n/R) order as the bucket itself)
    Accum hp = run_induced(tab, ns, {R, 0}, 4 * R, cfg.step_cap, cfg.seed,
                           kHmPlusBase, cfg.hm_samples, cfg.chunk, absorb);
    Accum hmn = run_induced(tab, ns, {-R, 0}, 4 * R, cfg.step_cap, cfg.seed,
                            kHmMinusBase, cfg.hm_samples, cfg.chunk, absorb);
    const double K = static_cast<double>(cfg.hm_samples);
    // (I - f) hm = d with f the 2x2 far-crossing matrix
    double fpp = hp.far_plus / K, fpm = hp.far_minus / K;
    double fmp = hmn.far_plus / K, fmm = hmn.far_minus / K;
    double det = (1.0 - fpp) * (1.0 - fmm) - fpm * fmp;
    if (!(det > 1e-6)) throw NotConverged("far-field system degenerate");

    const double N = static_cast<double>(cfg.samples);
    double wp = main.far_plus / N, wm = main.far_minus / N;
    double infl_p = 1.0 / (1.0 - fpp - fpm), infl_m = 1.0 / (1.0 - fmp - fmm);

    HittingDistribution out;
    out.target = "segment(" + std::to_string(seg.n) + ")";
    out.start = x;
    out.method = Method::monte_carlo;
    out.stderrs.emplace();
    double bias_scale =
        2.0 * static_cast<double>(seg.n + std::llabs(x.x) + std::llabs(x.y)) /
        static_cast<double>(R);
    for (long long s = -seg.n + 1; s <= seg.n - 1; ++s) {
        auto i = static_cast<std::size_t>(s + seg.n - 1);
        double dp = hp.sites[i] / K, dm = hmn.sites[i] / K;
        double hmP = ((1.0 - fmm) * dp + fpm * dm) / det;
        double hmM = (fmp * dp + (1.0 - fpp) * dm) / det;
        double pd = main.sites[i] / N;
        double p = pd + wp * hmP + wm * hmM;
        double var = pd * (1.0 - pd) / N +
                     wp * wp * hmP * (1.0 - hmP) / K * infl_p * infl_p +
                     wm * wm * hmM * (1.0 - hmM) / K * infl_m * infl_m;
        double bias = bias_scale * p;
        out.table[s] = p;
        (*out.stderrs)[s] = std::sqrt(var + bias * bias);
    }
    out.deficit = main.censored / N +
                  (wp + wm) * (hp.censored + hmn.censored) / (2.0 * K);
    return out;
}

HittingDistribution hit_segment_mc(const WalkLaw& law,
                                   const continuum::SegmentSpec& seg,
                                   const LatticePoint& x,
                                   const McConfig& cfg) {
    if (law.vertically_skip_free()) {
        axis::AxisSystem sys(law);
        return hit_segment_mc(sys, seg, x, cfg);
    }
    return hit_segment_mc_plain(law, seg, x, cfg);
}

HittingDistribution hit_segment_mc_plain(const WalkLaw& law,
                                         const continuum::SegmentSpec& seg,
                                         const LatticePoint& x,
                                         const McConfig& cfg) {
    AliasTable steps(law.probs);
    const std::size_t ns = static_cast<std::size_t>(seg.num_sites());
    int workers = cfg.chunk > 0
                      ? cfg.chunk
                      : static_cast<int>(
                            std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::future<Accum>> futs;
    long long per = (cfg.samples + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        long long lo = w * per, hi = std::min(cfg.samples, lo + per);
        if (lo >= hi) break;
        futs.push_back(std::async(std::launch::async, [&, lo, hi] {
            Accum a;
            a.sites.assign(ns, 0);
            for (long long i = lo; i < hi; ++i) {
                Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
                long long px = x.x, py = x.y;
                bool done = false;
                for (long long t = 0; t < cfg.step_cap; ++t) {
                    std::size_t k = steps.sample(rng);
                    px += law.support[k].x;
                    py += law.support[k].y;
                    if (py == 0 && std::llabs(px) <= seg.n - 1) {
                        ++a.sites[static_cast<std::size_t>(px + seg.n - 1)];
                        done = true;
                        break;
                    }
                }
                if (!done) ++a.censored;
            }
            return a;
        }));
    }
    Accum total;
    total.sites.assign(ns, 0);
    for (auto& f : futs) total.merge(f.get());

    HittingDistribution out;
    out.target = "segment(" + std::to_string(seg.n) + ")";
    out.start = x;
    out.method = Method::monte_carlo;
    out.stderrs.emplace();
    const double N = static_cast<double>(cfg.samples);
    for (long long s = -seg.n + 1; s <= seg.n - 1; ++s) {
        double p = total.sites[static_cast<std::size_t>(s + seg.n - 1)] / N;
        out.table[s] = p;
        (*out.stderrs)[s] = std::sqrt(p * (1.0 - p) / N);
    }
    out.deficit = total.censored / N;
    return out;
}

HittingDistribution hit_halfline_mc(const axis::AxisSystem& sys,
                                    const LatticePoint& x, long long D,
                                    const McConfig& cfg) {
    if (!sys.exact())
        throw WrongWalk("induced sampler needs a vertically skip-free law");
    long long R = std::min(cfg.far_radius, sys.half_window() - 1000);
    InducedTables tab(sys);
    const std::size_t ns = static_cast<std::size_t>(D);
    // site index 0..D-1 for s = -1..-D; deeper hits land in the tail bucket
    Accum acc;
    {
        auto absorb = [&](long long p) -> long long {
            return p <= -1 ? std::min<long long>(-p - 1, D) : -1;
        };
        acc = run_induced(tab, ns + 1, x, R, cfg.step_cap, cfg.seed, 0,
                          cfg.samples, cfg.chunk, absorb);
        acc.tail = acc.sites[ns];
    }
    HittingDistribution out;
    out.target = "halfline-";
    out.start = x;
    out.method = Method::monte_carlo;
    out.stderrs.emplace();
    const double N = static_cast<double>(cfg.samples);
    const double far_frac = (acc.far_plus + acc.far_minus) / N;
    const double Rd = static_cast<double>(R);
    for (long long s = -1; s >= -D; --s) {
        double p = acc.sites[static_cast<std::size_t>(-s - 1)] / N;
        out.table[s] = p;
        // far escapes would have come back with roughly the continuum
        // density from R; count that as bias alongside the binomial error
        double bias = far_frac * std::sqrt(Rd) /
                      (3.14159265358979324 * (Rd - s) *
                       std::sqrt(static_cast<double>(-s)));
        (*out.stderrs)[s] =
            std::sqrt(p * (1.0 - p) / N + bias * bias) + bias;
    }
    // tail sites, far escapes and censored walks all live outside the window
    out.deficit =
        (acc.tail + acc.far_plus + acc.far_minus + acc.censored) / N;
    return out;
}

}  // namespace lhit::mc
