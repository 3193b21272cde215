#include <complex>
#include <cstdio>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lhit/continuum.hpp"
#include "lhit/edge.hpp"
#include "lhit/errors.hpp"
#include "lhit/halfline.hpp"
#include "lhit/hitting.hpp"
#include "lhit/lab.hpp"
#include "lhit/mc.hpp"
#include "lhit/potential_kernel.hpp"
#include "lhit/series_ops.hpp"
#include "lhit/walk_law.hpp"

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// "a", "a+bi", "a-bi" with integer parts.
lhit::LatticePoint parse_point(const std::string& text) {
    static const std::regex re(R"(^([+-]?\d+)(?:([+-]\d+)i)?$)");
    std::smatch m;
    if (!std::regex_match(text, m, re))
        throw lhit::ConfigError("cannot parse lattice point: " + text);
    lhit::LatticePoint p;
    p.x = std::stoll(m[1].str());
    if (m[2].matched) p.y = std::stoll(m[2].str());
    return p;
}

int cmd_continuum(const std::string& kernel, const std::string& walk, int n,
                  const std::string& xs, double s, const std::string& side) {
    using namespace lhit::continuum;
    const double ns = n - 0.5;
    const Side sd = side == "below" ? Side::below
                    : side == "off" ? Side::off_slit
                                    : Side::above;
    const lhit::LatticePoint xp = parse_point(xs);
    const std::complex<double> z(static_cast<double>(xp.x),
                                 static_cast<double>(xp.y));
    double value = 0.0;
    if (kernel == "hminus")
        value = h_minus(z.real(), s);
    else if (kernel == "hseg-ext")
        value = h_segment_exterior(ns, z.real(), s);
    else if (kernel == "hseg-int")
        value = h_segment_interior(ns, z.real(), s);
    else if (kernel == "slit")
        value = slit_plane_kernel(s, sd, z);
    else if (kernel == "q")
        value = q_continuum_closed(ns, z.real(), s);
    else if (kernel == "aniso") {
        auto mom = lhit::validate(lhit::load_walk_law(walk));
        AnisotropicMap map{mom.covariance[0][0], mom.covariance[0][1],
                           mom.covariance[1][1]};
        value = anisotropic_kernel(map, z, s, sd);
    } else
        throw lhit::ConfigError("unknown kernel: " + kernel);
    std::printf("kernel,n,x,s,side,value\n%s,%d,%s,%s,%s,%s\n", kernel.c_str(),
                n, xs.c_str(), g17(s).c_str(), side.c_str(),
                g17(value).c_str());
    return 0;
}

void print_hit(const lhit::HittingDistribution& h) {
    std::printf("s,prob,stderr,deficit,method\n");
    for (const auto& [s, p] : h.table) {
        double se = 0.0;
        if (h.stderrs) {
            auto it = h.stderrs->find(s);
            if (it != h.stderrs->end()) se = it->second;
        }
        std::printf("%lld,%s,%s,%s,%s\n", s, g17(p).c_str(), g17(se).c_str(),
                    g17(h.deficit).c_str(), method_name(h.method).c_str());
    }
}

int cmd_hit(const std::string& walk, int n, const std::string& xs,
            const std::string& method, long long samples, std::uint64_t seed,
            long long cap) {
    const lhit::WalkLaw law = lhit::load_walk_law(walk);
    const lhit::continuum::SegmentSpec seg{n};
    const lhit::LatticePoint x = parse_point(xs);
    if (method == "pk") {
        lhit::pk::PotentialKernel kernel(law);
        print_hit(lhit::hit_segment(law, kernel, seg, x));
    } else if (method == "solve") {
        const long long span =
            std::max<long long>(std::llabs(x.x), std::llabs(x.y));
        const int radius = static_cast<int>(
            cap > 0 ? cap : std::max<long long>(64, 8 * (n + span)));
        print_hit(lhit::hit_segment_box(law, seg, x, radius));
    } else if (method == "mc") {
        lhit::mc::McConfig cfg;
        cfg.samples = samples;
        cfg.seed = seed;
        if (cap > 0) cfg.step_cap = cap;
        print_hit(lhit::mc::hit_segment_mc(law, seg, x, cfg));
    } else
        throw lhit::ConfigError("unknown method: " + method);
    return 0;
}

int cmd_series(const std::string& probe, const std::string& walk, int n,
               long long D, double budget) {
    const lhit::WalkLaw law = lhit::load_walk_law(walk);
    const lhit::continuum::SegmentSpec seg{n};
    std::printf("probe,n,x,y_or_s,lhs,rhs,ratio\n");
    if (probe == "qqq") {
        const long long x = 2 * n;
        auto rec = lhit::series::reconstruct_segment_hit(law, seg, x);
        lhit::pk::PotentialKernel kernel(law);
        auto oracle = lhit::hit_segment(law, kernel, seg, {x, 0});
        for (const auto& [s, v] : rec.table) {
            const double ref = oracle.at(s);
            std::printf("qqq,%d,%lld,%lld,%s,%s,%s\n", n, x, s,
                        g17(v).c_str(), g17(ref).c_str(),
                        g17(v / ref).c_str());
        }
    } else if (probe == "lala") {
        auto rep = lhit::series::eta_resolvent_check(law, seg, n, 3 * n, D);
        const double scale = budget > 0 ? budget : 3.0;
        std::printf("lala,%d,%d,%d,%s,%s,%s\n", n, n, 3 * n,
                    g17(rep.sup_residual).c_str(),
                    g17(scale * rep.budget).c_str(),
                    g17(rep.sup_residual / (scale * rep.budget)).c_str());
    } else {
        auto rep = lhit::series::bound_probe(probe, law, seg, D);
        for (const auto& r : rep.rows)
            std::printf("%s,%d,%s,%s,%s,%s,%s\n", probe.c_str(), n,
                        g17(r.x).c_str(), g17(r.y_or_s).c_str(),
                        g17(r.lhs).c_str(), g17(r.rhs).c_str(),
                        g17(r.ratio).c_str());
    }
    return 0;
}

int cmd_edge(const std::string& fn, const std::string& walk, long long M,
             double tol) {
    const lhit::WalkLaw law = lhit::load_walk_law(walk);
    auto table = fn == "mu" ? lhit::edge::compute_mu(law, M, tol)
                            : lhit::edge::compute_nu(law, M, tol);
    std::printf("j,value,residual\n");
    for (const auto& [j, v] : table.values)
        std::printf("%lld,%s,%s\n", j, g17(v).c_str(),
                    g17(table.residual).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hitting distributions of segments, half-lines and the axis "
                 "for 2-D lattice walks, with continuum cross-checks"};
    app.require_subcommand(1);

    std::string walk = "srw", xs = "2", kernel = "hseg-ext", side = "above";
    std::string method = "pk", probe = "qqq", fn = "nu";
    std::string config, claims_csv, outdir;
    int n = 1;
    double s = 0.0, budget = 0.0, tol = 1e-6;
    long long samples = 1000000, cap = 0, D = 0, M = 200;
    std::uint64_t seed = 0;

    auto* cont = app.add_subcommand("continuum", "continuum kernels");
    auto* ceval = cont->add_subcommand("eval", "evaluate one kernel");
    ceval->add_option("--kernel", kernel,
                      "hminus|hseg-ext|hseg-int|slit|aniso|q");
    ceval->add_option("--walk", walk, "law file or 'srw' (aniso only)");
    ceval->add_option("--n", n, "segment parameter (slit half-width n - 1/2)");
    ceval->add_option("--x", xs, "start, integer or a+bi");
    ceval->add_option("--s", s, "target coordinate");
    ceval->add_option("--side", side, "above|below|off");

    auto* hit = app.add_subcommand("hit", "discrete segment hitting law");
    hit->add_option("--walk", walk, "law file or 'srw'");
    hit->add_option("--n", n, "segment parameter");
    hit->add_option("--x", xs, "start, integer or a+bi");
    hit->add_option("--method", method, "pk|solve|mc");
    hit->add_option("--samples", samples, "mc walker count");
    hit->add_option("--seed", seed, "mc seed");
    hit->add_option("--cap", cap, "mc step cap / solve box radius");

    auto* ser = app.add_subcommand("series", "operator identities and bounds");
    ser->add_option("--probe", probe,
                    "qqq|lala|I|Iprime|II|III|IV|V|VI|lemma31");
    ser->add_option("--walk", walk, "law file or 'srw'");
    ser->add_option("--n", n, "segment parameter");
    ser->add_option("--D", D, "table extent (0 = module default)");
    ser->add_option("--budget", budget, "lala budget multiplier");

    auto* edg = app.add_subcommand("edge", "boundary functions mu, nu");
    edg->add_option("--fn", fn, "mu|nu");
    edg->add_option("--walk", walk, "law file or 'srw'");
    edg->add_option("--M", M, "window half-width");
    edg->add_option("--tol", tol, "renewal residual tolerance");

    auto* lab = app.add_subcommand("lab", "verification experiment harness");
    auto* labrun = lab->add_subcommand("run", "run configured claims");
    labrun->add_option("--config", config, "JSON config path")->required();
    labrun->add_option("--claims", claims_csv, "comma-separated subset");
    labrun->add_option("--out", outdir, "report directory override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ceval) return cmd_continuum(kernel, walk, n, xs, s, side);
        if (*hit) return cmd_hit(walk, n, xs, method, samples, seed, cap);
        if (*ser) return cmd_series(probe, walk, n, D, budget);
        if (*edg) return cmd_edge(fn, walk, M, tol);
        if (*labrun) {
            auto cfg = lhit::lab::load_config(config);
            if (!claims_csv.empty()) {
                cfg.claims.clear();
                std::string cur;
                for (char c : claims_csv + ",") {
                    if (c == ',') {
                        if (!cur.empty()) cfg.claims.push_back(cur);
                        cur.clear();
                    } else
                        cur += c;
                }
            }
            if (!outdir.empty()) cfg.out = outdir;
            return lhit::lab::run(cfg);
        }
        std::fprintf(stderr, "missing subcommand\n");
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
