#include "lhit/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lhit/continuum.hpp"
#include "lhit/edge.hpp"
#include "lhit/errors.hpp"
#include "lhit/halfline.hpp"
#include "lhit/hitting.hpp"
#include "lhit/potential_kernel.hpp"

namespace lhit::lab {

namespace {

constexpr double kPi = std::numbers::pi;

long long clampll(long long v, long long lo, long long hi) {
    return std::max(lo, std::min(hi, v));
}

std::vector<long long> scaled_sites(const std::vector<double>& ratios, int n,
                                    long long lo, long long hi,
                                    bool keep_nonneg, bool keep_nonpos) {
    std::set<long long> out;
    for (double r : ratios) {
        if (keep_nonneg && r < 0.0) continue;
        if (keep_nonpos && r > 0.0) continue;
        out.insert(clampll(std::llround(r * n), lo, hi));
    }
    return {out.begin(), out.end()};
}

double mean_dev(const std::vector<RatioRow>& rows, int n) {
    double s = 0.0;
    int c = 0;
    for (const auto& r : rows)
        if (r.n == n) s += std::abs(r.ratio - 1.0), ++c;
    return c ? s / c : 0.0;
}

void finalize(RatioReport& rep) {
    rep.max_dev = 0.0;
    for (const auto& r : rep.rows)
        rep.max_dev = std::max(rep.max_dev, std::abs(r.ratio - 1.0));
}

bool shrinks(const RatioReport& rep, const std::vector<int>& ns) {
    if (ns.size() < 2) return true;
    return mean_dev(rep.rows, ns.back()) < mean_dev(rep.rows, ns.front());
}

struct EdgeTables {
    edge::EdgeFunctionTable nu, mu;
};

EdgeTables edge_tables(const WalkLaw& law, const ExperimentConfig& cfg) {
    long long span = 8;
    for (int n : cfg.ns)
        for (double r : cfg.x_over_n)
            span = std::max<long long>(
                span, std::llround((std::abs(r) + 1.0) * n) + 2);
    const long long M = std::max<long long>(80, span);
    return {edge::compute_nu(law, M, 1e-6), edge::compute_mu(law, M, 1e-6)};
}

// H^{I(n)}_x(s) for an axis start (exterior or interior, the latter under
// the first-visit-after-time-0 convention).
struct SegmentOracle {
    const WalkLaw& law;
    pk::PotentialKernel kernel;
    continuum::SegmentSpec seg;
    std::unique_ptr<FiniteSetSolver> solver;

    SegmentOracle(const WalkLaw& l, int n)
        : law(l), kernel(l), seg{n} {
        solver = std::make_unique<FiniteSetSolver>(kernel, segment_sites(seg));
    }

    double at(long long x, long long s) const {
        if (std::llabs(x) <= seg.n - 1) {
            auto h = hit_segment(law, kernel, seg, {x, 0});
            return h.at(s);
        }
        return solver->hit_from({x, 0})(
            static_cast<Eigen::Index>(s + seg.n - 1));
    }
};

RatioReport claim_thm1(const ExperimentConfig& cfg, const WalkLaw& law) {
    RatioReport rep{"thm1", {}, 0, 0, ""};
    for (int n : cfg.ns) {
        SegmentOracle oracle(law, n);
        const double ns = oracle.seg.n_star();
        for (double rx : cfg.x_over_n) {
            const long long x = std::llround(rx * n);
            if (std::llabs(x) < n) continue;
            for (long long s :
                 scaled_sites(cfg.s_over_n, n, -n + 1, n - 1, false, false)) {
                const double H = oracle.at(x, s);
                const double h = continuum::h_segment_exterior(
                    ns, static_cast<double>(x), static_cast<double>(s));
                const double env =
                    1.0 / std::sqrt(std::min(std::llabs(x) - ns,
                                             n - std::llabs(s) - 0.0));
                rep.rows.push_back({"thm1", n, static_cast<double>(x), 0.0,
                                    static_cast<double>(s), H, h, H / h, env});
            }
        }
    }
    finalize(rep);
    for (const auto& r : rep.rows)
        rep.fitted_constant = std::max(rep.fitted_constant,
                                       std::abs(r.ratio - 1.0) / r.envelope);
    const bool ok =
        rep.fitted_constant <= cfg.tol("thm1_c", 3.0) && shrinks(rep, cfg.ns);
    rep.verdict = ok ? "pass" : "fail";
    return rep;
}

RatioReport claim_thm2(const ExperimentConfig& cfg, const WalkLaw& law,
                       bool part_i) {
    RatioReport rep{part_i ? "thm2i" : "thm2ii", {}, 0, 0, ""};
    const double sigma2 = validate(law).sigma2;
    auto tabs = edge_tables(law, cfg);
    for (int n : cfg.ns) {
        SegmentOracle oracle(law, n);
        auto svals = part_i
                         ? scaled_sites(cfg.s_over_n, n, 0, n - 1, true, false)
                         : scaled_sites(cfg.s_over_n, n, -n + 1, 0, false, true);
        if (part_i) svals.push_back(n - 1);
        std::set<long long> sset(svals.begin(), svals.end());
        std::set<long long> xset{n};
        for (double rx : cfg.x_over_n)
            if (rx >= 1.0) xset.insert(std::llround(rx * n));
        for (long long x : xset) {
            for (long long s : sset) {
                const double H = oracle.at(x, s);
                const double F =
                    part_i ? sigma2 / (2.0 * kPi) * tabs.nu.at(x - n) *
                                 tabs.mu.at(-n + s) / (x - s) *
                                 std::sqrt(double(x + n) / double(n + s))
                           : sigma2 / (2.0 * kPi) * tabs.nu.at(x - n) *
                                 tabs.nu.at(-n - s) / (x - s) *
                                 std::sqrt(double(x + n) / double(n - s));
                rep.rows.push_back({rep.claim, n, static_cast<double>(x), 0.0,
                                    static_cast<double>(s), H, F, H / F, 1.0});
            }
        }
    }
    finalize(rep);
    rep.fitted_constant = rep.max_dev;
    const bool ok = rep.max_dev <= cfg.tol("thm2_bracket", 0.4) &&
                    shrinks(rep, cfg.ns);
    rep.verdict = ok ? "pass" : "fail";
    return rep;
}

RatioReport claim_thm4i(const ExperimentConfig& cfg, const WalkLaw& law) {
    RatioReport rep{"thm4i", {}, 0, 0, ""};
    const double sigma2 = validate(law).sigma2;
    double gated = 0.0;
    for (int n : cfg.ns) {
        SegmentOracle oracle(law, n);
        auto sites =
            scaled_sites(cfg.s_over_n, n, -n + 1, n - 1, false, false);
        for (long long x : sites) {
            for (long long s : sites) {
                if (x == s) continue;
                const double H = oracle.at(x, s);
                const double F =
                    sigma2 *
                    continuum::h_segment_interior(oracle.seg.n_star(),
                                                  static_cast<double>(x),
                                                  static_cast<double>(s));
                rep.rows.push_back({"thm4i", n, static_cast<double>(x), 0.0,
                                    static_cast<double>(s), H, F, H / F, 1.0});
                const long long sep = std::min({n - std::llabs(x),
                                                n - std::llabs(s),
                                                std::llabs(x - s)});
                if (sep >= std::max(2, n / 4))
                    gated = std::max(gated, std::abs(H / F - 1.0));
            }
        }
    }
    finalize(rep);
    rep.fitted_constant = gated;
    const bool ok =
        gated <= cfg.tol("thm4i_bracket", 0.3) && shrinks(rep, cfg.ns);
    rep.verdict = ok ? "pass" : "fail";
    return rep;
}

RatioReport claim_thm4ii(const ExperimentConfig& cfg, const WalkLaw& law,
                         bool primed) {
    RatioReport rep{primed ? "thm4ii'" : "thm4ii", {}, 0, 0, ""};
    const double sigma2 = validate(law).sigma2;
    auto tabs = edge_tables(law, cfg);
    for (int n : cfg.ns) {
        SegmentOracle oracle(law, n);
        const std::vector<long long> near{n - 1, n - 2};
        auto far = primed
                       ? scaled_sites(cfg.s_over_n, n, 0, n - 1, true, false)
                       : scaled_sites(cfg.s_over_n, n, -n + 1, 0, false, true);
        for (long long e : near) {
            for (long long f : far) {
                // (ii): x = e near n, s = f <= 0; (ii'): s = f' near n,
                // x = e' near -n — realized by negating the (ii) geometry.
                const long long x = primed ? -e : e;
                const long long s = f;
                const double gap = static_cast<double>(std::llabs(x - s));
                const double F =
                    primed ? sigma2 / kPi * tabs.mu.at(-n + s) *
                                 tabs.mu.at(-n - x) * std::sqrt(double(n)) /
                                 (std::sqrt(2.0) * std::pow(gap, 1.5))
                           : sigma2 / kPi * tabs.nu.at(-n + x) *
                                 tabs.nu.at(-n - s) * std::sqrt(double(n)) /
                                 (std::sqrt(2.0) * std::pow(gap, 1.5));
                const double H = oracle.at(x, s);
                const double env = primed ? double(n + x) / double(n + s)
                                          : double(n - x) / double(n - s);
                rep.rows.push_back({rep.claim, n, static_cast<double>(x), 0.0,
                                    static_cast<double>(s), H, F, H / F, env});
            }
        }
    }
    finalize(rep);
    for (const auto& r : rep.rows)
        rep.fitted_constant = std::max(rep.fitted_constant,
                                       std::abs(r.ratio - 1.0) / r.envelope);
    const bool ok = rep.fitted_constant <= cfg.tol("thm4ii_c", 10.0) &&
                    shrinks(rep, cfg.ns);
    rep.verdict = ok ? "pass" : "fail";
    return rep;
}

RatioReport claim_thm5(const ExperimentConfig& cfg, const WalkLaw& law,
                       bool part_II2) {
    RatioReport rep{part_II2 ? "thmII2" : "thm5", {}, 0, 0, ""};
    auto tabs = edge_tables(law, cfg);
    for (int n : cfg.ns) {
        SegmentOracle oracle(law, n);
        const double ns = oracle.seg.n_star();
        auto svals =
            part_II2 ? scaled_sites(cfg.s_over_n, n, -n + 1, -1, false, true)
                     : scaled_sites(cfg.s_over_n, n, 0, n - 1, true, false);
        for (double rx : cfg.x_over_n) {
            if (rx < 1.0) continue;
            const long long x = std::llround(rx * n);
            for (long long s : svals) {
                const double H = oracle.at(x, s);
                const double h = continuum::h_segment_exterior(
                    ns, static_cast<double>(x), static_cast<double>(s));
                const double F = part_II2
                                     ? std::sqrt(ns + s) * tabs.nu.at(-n - s) * h
                                     : std::sqrt(ns - s) * tabs.mu.at(-n + s) * h;
                const double env =
                    part_II2
                        ? std::sqrt((s + ns) / n) * std::log(double(n)) +
                              std::sqrt(double(x) / (n * (x - ns)))
                        : std::log(double(n)) / n + 1.0 / double(x - s);
                rep.rows.push_back({rep.claim, n, static_cast<double>(x), 0.0,
                                    static_cast<double>(s), H, F, H / F, env});
            }
        }
    }
    finalize(rep);
    if (part_II2) {
        for (const auto& r : rep.rows)
            rep.fitted_constant = std::max(
                rep.fitted_constant, std::abs(r.ratio - 1.0) / r.envelope);
        rep.verdict =
            rep.fitted_constant <= cfg.tol("thmII2_c", 10.0) ? "pass" : "fail";
    } else {
        for (const auto& r : rep.rows)
            rep.fitted_constant =
                std::max(rep.fitted_constant,
                         std::abs(r.discrete - r.continuum) / r.envelope);
        rep.verdict =
            rep.fitted_constant <= cfg.tol("thm5_c", 10.0) ? "pass" : "fail";
    }
    return rep;
}

RatioReport claim_prop1(const ExperimentConfig& cfg, const WalkLaw& law) {
    if (!law.is_simple())
        throw WrongWalk("Proposition 1.5 is stated for the simple walk only");
    RatioReport rep{"prop1", {}, 0, 0, ""};
    pk::PotentialKernel kernel(law);
    // (B-1) along (x, s) = (k, -k); the finite-window solve leaks an O(1/D)
    // contamination into each entry, removed by the depth extrapolation
    // 2 H_{2D} - H_D before the rate fit.
    halfline::HalfLineSolver coarse(kernel, 512), fine(kernel, 1024);
    std::vector<double> lk, ld;
    for (long long k = 4; k <= 64; k *= 2) {
        const double H = 2.0 * fine.minus({k, 0}).at(-k) -
                         coarse.minus({k, 0}).at(-k);
        const double F = 1.0 / (kPi * 2.0 * k) *
                         std::sqrt(double(k) / double(k));
        const double env = 2.0 / double(k);
        rep.rows.push_back({"prop1", 0, static_cast<double>(k), 0.0,
                            static_cast<double>(-k), H, F, H / F, env});
        lk.push_back(std::log(double(k)));
        ld.push_back(std::log(std::abs(H / F - 1.0)));
    }
    double mk = 0, md = 0;
    for (std::size_t i = 0; i < lk.size(); ++i) mk += lk[i], md += ld[i];
    mk /= lk.size(), md /= ld.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lk.size(); ++i) {
        num += (lk[i] - mk) * (ld[i] - md);
        den += (lk[i] - mk) * (lk[i] - mk);
    }
    const double exponent = -num / den;
    rep.fitted_constant = exponent;
    // (B-2) at n = 8, s = 0, x = n + k.
    const int n = 8;
    SegmentOracle oracle(law, n);
    double b2 = 0.0;
    for (long long k = 2; k <= 64; k *= 2) {
        const long long x = n + k;
        const double H = oracle.at(x, 0);
        const double h = continuum::h_segment_exterior(
            oracle.seg.n_star(), static_cast<double>(x), 0.0);
        const double env =
            1.0 / std::min(x - oracle.seg.n_star(), double(n));
        rep.rows.push_back({"prop1", n, static_cast<double>(x), 0.0, 0.0, H,
                            h, H / h, env});
        b2 = std::max(b2, std::abs(H / h - 1.0) / env);
    }
    finalize(rep);
    const bool ok = exponent >= cfg.tol("prop1_exp_lo", 0.7) &&
                    exponent <= cfg.tol("prop1_exp_hi", 1.3) &&
                    b2 <= cfg.tol("prop1_b2_c", 5.0);
    rep.verdict = ok ? "pass" : "fail";
    return rep;
}

RatioReport claim_cor1(const ExperimentConfig& cfg, const WalkLaw& law) {
    RatioReport rep{"cor1", {}, 0, 0, ""};
    for (int n : cfg.ns) {
        auto probe = edge::corollary1_probe(law, {n});
        for (const auto& r : probe.rows)
            rep.rows.push_back({"cor1", n, 0.0, 0.0, r.y_or_s, r.lhs, r.rhs,
                                r.ratio, 1.0});
    }
    finalize(rep);
    rep.fitted_constant = rep.max_dev;
    // The nu scale carries a flat O(1/sqrt(M)) far-field pinning offset that
    // does not move with n, so the trend is judged on the worst (corner)
    // deviation, which does shrink.
    auto worst = [&](int n) {
        double w = 0.0;
        for (const auto& r : rep.rows)
            if (r.n == n) w = std::max(w, std::abs(r.ratio - 1.0));
        return w;
    };
    const bool trend = cfg.ns.size() < 2 ||
                       worst(cfg.ns.back()) < worst(cfg.ns.front());
    const bool ok = rep.max_dev <= cfg.tol("cor1_bracket", 0.3) && trend;
    rep.verdict = ok ? "pass" : "fail";
    return rep;
}

RatioReport claim_cor2(const ExperimentConfig& cfg, const WalkLaw& law) {
    RatioReport rep{"cor2", {}, 0, 0, ""};
    double C = 1.0;
    for (int n : cfg.ns) {
        SegmentOracle oracle(law, n);
        for (double rx : cfg.x_over_n) {
            const long long x = std::llround(rx * n);
            if (std::llabs(x) < n) continue;
            for (long long s :
                 scaled_sites(cfg.s_over_n, n, -n + 1, n - 1, false, false)) {
                const double H = oracle.at(x, s);
                const double h = continuum::h_segment_exterior(
                    oracle.seg.n_star(), static_cast<double>(x),
                    static_cast<double>(s));
                rep.rows.push_back({"cor2", n, static_cast<double>(x), 0.0,
                                    static_cast<double>(s), H, h, H / h, 1.0});
                C = std::max({C, H / h, h / H});
            }
        }
    }
    finalize(rep);
    rep.fitted_constant = C;
    rep.verdict = C <= cfg.tol("cor2_C", 30.0) ? "pass" : "fail";
    return rep;
}

RatioReport claim_cor3(const ExperimentConfig& cfg, const WalkLaw& law) {
    RatioReport rep{"cor3", {}, 0, 0, ""};
    double C = 1.0;
    for (int n : cfg.ns) {
        SegmentOracle oracle(law, n);
        auto sites =
            scaled_sites(cfg.s_over_n, n, -n + 1, n - 1, false, false);
        for (long long x : sites) {
            for (long long s : sites) {
                if (x == s) continue;
                const double H = oracle.at(x, s);
                const double h = continuum::h_segment_interior(
                    oracle.seg.n_star(), static_cast<double>(x),
                    static_cast<double>(s));
                rep.rows.push_back({"cor3", n, static_cast<double>(x), 0.0,
                                    static_cast<double>(s), H, h, H / h, 1.0});
                C = std::max({C, H / h, h / H});
            }
        }
        // opposite corners: n * H stays in a bounded band
        for (auto [x, s] : {std::pair<long long, long long>{-n + 1, n - 1},
                            {n - 1, -n + 1}}) {
            const double H = oracle.at(x, s);
            const double r = n * H;
            rep.rows.push_back({"cor3", n, static_cast<double>(x), 0.0,
                                static_cast<double>(s), H, 1.0 / n, r, 1.0});
            C = std::max({C, r, 1.0 / r});
        }
    }
    finalize(rep);
    rep.fitted_constant = C;
    rep.verdict = C <= cfg.tol("cor3_C", 30.0) ? "pass" : "fail";
    return rep;
}

}  // namespace

double ExperimentConfig::tol(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        if (j.contains("walk")) cfg.walk = j.at("walk").get<std::string>();
        if (j.contains("claims"))
            cfg.claims = j.at("claims").get<std::vector<std::string>>();
        if (j.contains("grids")) {
            const auto& g = j.at("grids");
            if (g.contains("n")) cfg.ns = g.at("n").get<std::vector<int>>();
            if (g.contains("x_over_n"))
                cfg.x_over_n = g.at("x_over_n").get<std::vector<double>>();
            if (g.contains("s_over_n"))
                cfg.s_over_n = g.at("s_over_n").get<std::vector<double>>();
        }
        if (j.contains("seeds") && j.at("seeds").contains("mc"))
            cfg.seed = j.at("seeds").at("mc").get<std::uint64_t>();
        if (j.contains("tolerances"))
            for (auto& [k, v] : j.at("tolerances").items())
                cfg.tolerances[k] = v.get<double>();
        if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    for (const auto& c : cfg.claims)
        if (std::find(kClaims.begin(), kClaims.end(), c) == kClaims.end())
            throw ConfigError("unknown claim in config: " + c);
    for (int n : cfg.ns)
        if (n < 2) throw ConfigError("grids.n entries must be >= 2");
    if (cfg.ns.empty()) throw ConfigError("grids.n must be nonempty");
    std::sort(cfg.ns.begin(), cfg.ns.end());
    return cfg;
}

RatioReport verify_claim(const std::string& claim,
                         const ExperimentConfig& cfg) {
    const WalkLaw law = load_walk_law(cfg.walk);
    if (claim == "thm1") return claim_thm1(cfg, law);
    if (claim == "thm2i") return claim_thm2(cfg, law, true);
    if (claim == "thm2ii") return claim_thm2(cfg, law, false);
    if (claim == "thm4i") return claim_thm4i(cfg, law);
    if (claim == "thm4ii") return claim_thm4ii(cfg, law, false);
    if (claim == "thm4ii'") return claim_thm4ii(cfg, law, true);
    if (claim == "thm5") return claim_thm5(cfg, law, false);
    if (claim == "thmII2") return claim_thm5(cfg, law, true);
    if (claim == "prop1") return claim_prop1(cfg, law);
    if (claim == "cor1") return claim_cor1(cfg, law);
    if (claim == "cor2") return claim_cor2(cfg, law);
    if (claim == "cor3") return claim_cor3(cfg, law);
    throw ConfigError("unknown claim: " + claim);
}

RatioReport verify_thm1(const ExperimentConfig& cfg) {
    return verify_claim("thm1", cfg);
}
std::vector<RatioReport> verify_thm2(const ExperimentConfig& cfg) {
    return {verify_claim("thm2i", cfg), verify_claim("thm2ii", cfg)};
}
std::vector<RatioReport> verify_thm4(const ExperimentConfig& cfg) {
    return {verify_claim("thm4i", cfg), verify_claim("thm4ii", cfg),
            verify_claim("thm4ii'", cfg)};
}
std::vector<RatioReport> verify_edge_theorems(const ExperimentConfig& cfg) {
    return {verify_claim("thm5", cfg), verify_claim("thmII2", cfg)};
}
RatioReport verify_prop1(const ExperimentConfig& cfg) {
    return verify_claim("prop1", cfg);
}

std::string render_csv(const RatioReport& rep) {
    std::ostringstream out;
    out << "claim,n,x_re,x_im,s,discrete,continuum,ratio,envelope\n";
    char buf[512];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof(buf),
                      "%s,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.claim.c_str(), r.n, r.x_re, r.x_im, r.s, r.discrete,
                      r.continuum, r.ratio, r.envelope);
        out << buf;
    }
    return out.str();
}

int run(const ExperimentConfig& cfg) {
    if (cfg.claims.empty()) return 0;
    std::vector<std::future<RatioReport>> futs;
    futs.reserve(cfg.claims.size());
    for (const auto& c : cfg.claims)
        futs.push_back(std::async(std::launch::async,
                                  [&cfg, c] { return verify_claim(c, cfg); }));
    std::filesystem::create_directories(cfg.out);
    nlohmann::json summary = nlohmann::json::object();
    bool all_pass = true;
    for (std::size_t i = 0; i < futs.size(); ++i) {
        RatioReport rep = futs[i].get();
        std::string fname = rep.claim;
        std::replace(fname.begin(), fname.end(), '\'', 'p');
        std::ofstream csv(std::filesystem::path(cfg.out) / (fname + ".csv"),
                          std::ios::binary);
        csv << render_csv(rep);
        summary[rep.claim] = {{"verdict", rep.verdict},
                              {"fitted_constant", rep.fitted_constant},
                              {"max_dev", rep.max_dev}};
        all_pass = all_pass && rep.verdict == "pass";
    }
    std::ofstream js(std::filesystem::path(cfg.out) / "summary.json",
                     std::ios::binary);
    js << summary.dump(2) << "\n";
    return all_pass ? 0 : 1;
}

}  // namespace lhit::lab
