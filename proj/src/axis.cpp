#include "lhit/axis.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "lhit/errors.hpp"

namespace lhit::axis {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// in-place radix-2 FFT, sign -1 (forward)
void fft(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * kPi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k], v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// root of c1 g^2 + (c0 - 1) g + cm1 = 0 with the smaller modulus
cplx passage_root(cplx c1, cplx c0, cplx cm1) {
    cplx b = c0 - 1.0;
    if (std::abs(c1) < 1e-300) {
        if (std::abs(b) < 1e-300) return {0.0, 0.0};
        return -cm1 / b;
    }
    cplx sq = std::sqrt(b * b - 4.0 * c1 * cm1);
    cplx q = (std::real(std::conj(b) * sq) >= 0.0) ? -0.5 * (b + sq)
                                                   : -0.5 * (b - sq);
    cplx r1 = q / c1;
    cplx r2 = (std::abs(q) > 0.0) ? cm1 / q : cplx{0.0, 0.0};
    cplx r = std::abs(r1) <= std::abs(r2) ? r1 : r2;
    if (std::abs(r) > 1.0 + 1e-9)
        throw NotConverged("vertical passage root outside the unit disk");
    return r;
}

cplx pow_ll(cplx r, long long m) {
    cplx out{1.0, 0.0};
    while (m > 0) {
        if (m & 1) out *= r;
        r *= r;
        m >>= 1;
    }
    return out;
}

}  // namespace

AxisSystem::AxisSystem(const WalkLaw& law, int log2_grid, int strip_height)
    : law_(law), grid_(1 << log2_grid), strip_(strip_height) {
    exact_ = law.vertically_skip_free();
    const int N = grid_;
    std::vector<cplx> F(N);
    if (exact_) {
        rho_desc_.resize(N);
        rho_asc_.resize(N);
        for (int j = 0; j < N; ++j) {
            const double theta = 2.0 * kPi * j / N;
            cplx c1{0, 0}, c0{0, 0}, cm1{0, 0};
            for (std::size_t i = 0; i < law_.support.size(); ++i) {
                cplx e = law_.probs[i] *
                         std::exp(cplx{0.0, theta *
                                       static_cast<double>(
                                           law_.support[i].x)});
                if (law_.support[i].y == 1)
                    c1 += e;
                else if (law_.support[i].y == 0)
                    c0 += e;
                else
                    cm1 += e;
            }
            if (j == 0) {
                rho_desc_[0] = rho_asc_[0] = 1.0;
            } else {
                rho_desc_[j] = passage_root(c1, c0, cm1);
                rho_asc_[j] = passage_root(cm1, c0, c1);
            }
            F[j] = c0 + c1 * rho_desc_[j] + cm1 * rho_asc_[j];
        }
        h0_ = invert(F);
        for (int j = 0; j < N; ++j) F[j] = rho_desc_[j];
        desc_ = invert(F);
        for (int j = 0; j < N; ++j) F[j] = rho_asc_[j];
        asc_ = invert(F);
        deficit_ = 0.0;
    } else {
        const int b = std::max(-law_.min_dy(), law_.max_dy());
        if (strip_ < 4 * b) strip_ = 4 * b;
        for (int j = 0; j < N; ++j) {
            const double theta = 2.0 * kPi * j / N;
            auto g = solve_ladder(theta);
            cplx f{0, 0};
            for (std::size_t i = 0; i < law_.support.size(); ++i) {
                cplx e = law_.probs[i] *
                         std::exp(cplx{0.0, theta *
                                       static_cast<double>(
                                           law_.support[i].x)});
                f += e * g[static_cast<std::size_t>(law_.support[i].y +
                                                    strip_)];
            }
            F[j] = f;
            if (j == 0) deficit_ = 1.0 - std::real(f);
        }
        h0_ = invert(F);
    }
}

// Transform g(y) of the first visit to row 0 from height y, on the strip
// |y| <= strip_ with g = 0 beyond (escape -> deficit). Banded elimination
// without pivoting; the system I - C is strictly row-diagonally dominant for
// theta != 0 and weakly so at theta = 0 where truncation supplies killing.
std::vector<std::complex<double>> AxisSystem::solve_ladder(
    double theta) const {
    const int K = strip_;
    const int b = std::max(-law_.min_dy(), law_.max_dy());
    const int dim = 2 * K + 1;  // rows -K..K; row 0 pinned to 1
    const int width = 2 * b + 1;
    std::vector<cplx> band(static_cast<std::size_t>(dim) * width, cplx{0, 0});
    std::vector<cplx> rhs(dim, cplx{0, 0});
    auto at = [&](int r, int c) -> cplx& {
        return band[static_cast<std::size_t>(r) * width + (c - r + b)];
    };
    for (int y = -K; y <= K; ++y) {
        int r = y + K;
        at(r, r) += 1.0;
        if (y == 0) {
            rhs[r] = 1.0;
            continue;
        }
        for (std::size_t i = 0; i < law_.support.size(); ++i) {
            int y2 = y + static_cast<int>(law_.support[i].y);
            if (std::abs(y2) > K) continue;
            cplx e = law_.probs[i] *
                     std::exp(cplx{0.0, theta *
                                   static_cast<double>(law_.support[i].x)});
            at(r, y2 + K) -= e;
        }
    }
    for (int r = 0; r < dim; ++r) {
        cplx piv = at(r, r);
        if (std::abs(piv) < 1e-14)
            throw SingularSystem("strip ladder pivot underflow");
        for (int r2 = r + 1; r2 <= std::min(dim - 1, r + b); ++r2) {
            cplx f = at(r2, r) / piv;
            if (f == cplx{0, 0}) continue;
            for (int c = r; c <= std::min(dim - 1, r + b); ++c)
                at(r2, c) -= f * at(r, c);
            rhs[r2] -= f * rhs[r];
        }
    }
    for (int r = dim - 1; r >= 0; --r) {
        cplx s = rhs[r];
        for (int c = r + 1; c <= std::min(dim - 1, r + b); ++c)
            s -= at(r, c) * rhs[c];
        rhs[r] = s / at(r, r);
    }
    return rhs;
}

std::vector<double> AxisSystem::invert(const std::vector<cplx>& F) const {
    std::vector<cplx> G = F;
    fft(G);
    const int N = grid_;
    std::vector<double> out(N);
    for (int i = 0; i < N; ++i)
        out[i] = std::real(G[static_cast<std::size_t>((i + N / 2) % N)]) / N;
    return out;
}

double AxisSystem::overstep_at(long long s) const {
    long long i = s + grid_ / 2;
    if (i < 0 || i >= grid_) return 0.0;
    return h0_[static_cast<std::size_t>(i)];
}

std::vector<double> AxisSystem::first_axis_law(const LatticePoint& z) const {
    const int N = grid_;
    const long long m = z.y;
    if (m == 0) {
        // axis start: H_0 shifted by z.x
        std::vector<double> out(N, 0.0);
        for (int i = 0; i < N; ++i) {
            long long k = i - z.x;
            if (k >= 0 && k < N) out[i] = h0_[static_cast<std::size_t>(k)];
        }
        return out;
    }
    if (!exact_ && std::llabs(m) > strip_)
        throw WindowTooSmall("start above the truncated strip");
    std::vector<cplx> F(N);
    for (int j = 0; j < N; ++j) {
        const double theta = 2.0 * kPi * j / N;
        cplx phase = std::exp(cplx{0.0, theta * static_cast<double>(z.x)});
        cplx g;
        if (exact_) {
            g = (m > 0) ? pow_ll(rho_desc_[j], m) : pow_ll(rho_asc_[j], -m);
        } else {
            auto lad = solve_ladder(theta);
            g = lad[static_cast<std::size_t>(m + strip_)];
        }
        F[j] = phase * g;
    }
    return invert(F);
}

HittingDistribution hit_axis(const AxisSystem& sys, const LatticePoint& z,
                             long long W) {
    if (W < 1 || W >= sys.half_window())
        throw WindowTooSmall("axis window exceeds the transform grid");
    auto full = sys.first_axis_law(z);
    HittingDistribution out;
    out.target = "axis";
    out.start = z;
    out.method = Method::potential_kernel;
    const long long half = sys.half_window();
    double sum = 0.0;
    for (long long s = -W; s <= W; ++s) {
        double p = full[static_cast<std::size_t>(s + half)];
        if (p < 0.0 && p > -1e-12) p = 0.0;
        out.table[s] = p;
        sum += p;
    }
    out.deficit = std::max(0.0, 1.0 - sum) + sys.table_deficit();
    return out;
}

HittingDistribution hit_axis(const WalkLaw& law, const LatticePoint& z,
                             long long W) {
    AxisSystem sys(law);
    return hit_axis(sys, z, W);
}

}  // namespace lhit::axis
