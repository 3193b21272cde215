#include "lhit/potential_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "lhit/errors.hpp"
#include "lhit/quadrature.hpp"

namespace lhit::pk {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Roots of a complex polynomial sum c[k] w^k (c.back() != 0). Closed form
// for degree <= 2, Durand-Kerner otherwise (degrees here are tiny).
void poly_roots(std::vector<cplx> c, std::vector<cplx>& roots) {
    roots.clear();
    while (c.size() > 1 && std::abs(c.back()) == 0.0) c.pop_back();
    // exact zero leading coefficients drop the degree; roots "at infinity"
    // carry no residue inside the unit circle
    while (c.size() > 1 && std::abs(c.front()) == 0.0) {
        roots.push_back({0.0, 0.0});
        c.erase(c.begin());
    }
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg <= 0) return;
    if (deg == 1) {
        roots.push_back(-c[0] / c[1]);
        return;
    }
    if (deg == 2) {
        cplx a = c[2], b = c[1], d = c[0];
        cplx sq = std::sqrt(b * b - 4.0 * a * d);
        // the numerically stable pairing
        cplx q = (std::real(std::conj(b) * sq) >= 0.0) ? -0.5 * (b + sq)
                                                       : -0.5 * (b - sq);
        roots.push_back(q / a);
        roots.push_back(std::abs(q) > 0.0 ? d / q : cplx{0.0, 0.0});
        return;
    }
    // Durand-Kerner
    std::vector<cplx> z(deg);
    cplx seed{0.4, 0.9};
    cplx p{1.0, 0.0};
    for (int i = 0; i < deg; ++i) {
        p *= seed;
        z[i] = p;
    }
    auto eval = [&](cplx w) {
        cplx v = c[deg];
        for (int k = deg - 1; k >= 0; --k) v = v * w + c[k];
        return v;
    };
    for (int it = 0; it < 200; ++it) {
        double moved = 0.0;
        for (int i = 0; i < deg; ++i) {
            cplx num = eval(z[i]) / c[deg];
            cplx den{1.0, 0.0};
            for (int j = 0; j < deg; ++j)
                if (j != i) den *= (z[i] - z[j]);
            cplx step = num / den;
            z[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14) break;
    }
    for (auto& r : z) roots.push_back(r);
}

cplx pow_int(cplx w, long long k) {
    // k >= 0 here
    if (k == 0) return {1.0, 0.0};
    double mag = std::abs(w);
    if (mag < 1e-280) return {0.0, 0.0};
    return std::exp(static_cast<double>(k) * std::log(w));
}

cplx cexpm1(cplx u) {
    if (std::abs(u) < 1e-4)
        return u * (1.0 + u * (0.5 + u * (1.0 / 6.0 + u / 24.0)));
    return std::exp(u) - 1.0;
}

}  // namespace

PotentialKernel::PotentialKernel(const WalkLaw& law) : law_(law) {
    min_dy_ = law.min_dy();
    max_dy_ = law.max_dy();
}

PotentialKernel::~PotentialKernel() = default;

double PotentialKernel::accuracy() const {
    std::lock_guard lk(mu_);
    return worst_err_;
}

double PotentialKernel::operator()(long long x1, long long x2) const {
    if (x1 == 0 && x2 == 0) return 0.0;
    if (x2 < 0) {
        std::call_once(flip_once_, [&] {
            flipped_ =
                std::make_unique<PotentialKernel>(vertically_flipped(law_));
        });
        return (*flipped_)(x1, -x2);
    }
    long long key = x1 * 4000037LL + x2;
    {
        std::lock_guard lk(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    double v = eval(x1, x2);
    std::lock_guard lk(mu_);
    cache_.emplace(key, v);
    return v;
}

double PotentialKernel::eval(long long x1, long long x2) const {
    const int L = -min_dy_;          // lowest vertical increment, negated
    const int N = L + max_dy_;       // polynomial degree
    if (L < 1 || max_dy_ < 1)
        throw NotIrreducible("law has no vertical motion");

    // Inner contour integral over the vertical frequency at fixed theta:
    //   I(theta) = sum over roots |w|<1 of
    //      (1 - e^{i theta x1} w^{x2}) w^{L-1} / P'(w),
    // with P(w) = w^L (1 - phi(theta, w)).
    auto inner = [&](double theta) -> double {
        std::vector<cplx> coeff(static_cast<std::size_t>(N) + 1, cplx{0, 0});
        coeff[L] += 1.0;
        for (std::size_t i = 0; i < law_.support.size(); ++i) {
            const auto& e = law_.support[i];
            cplx c = law_.probs[i] *
                     std::exp(cplx{0.0, theta * static_cast<double>(e.x)});
            coeff[e.y + L] -= c;
        }
        static thread_local std::vector<cplx> roots;
        poly_roots(coeff, roots);
        cplx phase{0.0, theta * static_cast<double>(x1)};
        cplx total{0.0, 0.0};
        for (const cplx& r : roots) {
            if (!(std::abs(r) < 1.0 - 1e-13)) continue;
            cplx dp{0.0, 0.0};
            for (int k = N; k >= 1; --k)
                dp = dp * r + static_cast<double>(k) * coeff[k];
            cplx num;
            if (std::abs(r) < 1e-280) {
                num = (x2 == 0) ? (1.0 - std::exp(phase)) : cplx{1.0, 0.0};
            } else {
                // 1 - exp(i theta x1 + x2 log r), kept in expm1 form
                num = -cexpm1(phase + static_cast<double>(x2) * std::log(r));
            }
            total += num * pow_int(r, L - 1) / dp;
        }
        return total.real();
    };

    quad::Options opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-12;
    opt.max_intervals =
        4000 + 40 * static_cast<int>(std::abs(x1) + std::abs(x2));
    quad::Result res = quad::integrate(inner, 0.0, kPi, opt);
    if (!std::isfinite(res.value))
        throw QuadratureFailure("potential kernel quadrature failed");
    {
        std::lock_guard lk(mu_);
        worst_err_ = std::max(worst_err_, res.error / kPi);
    }
    return res.value / kPi;
}

PotentialKernelTable potential_kernel(const WalkLaw& law,
                                      const std::vector<LatticePoint>& points) {
    validate(law);
    PotentialKernel k(law);
    PotentialKernelTable tab;
    tab.law_name = law.name;
    for (const auto& p : points) tab.values[{p.x, p.y}] = k(p);
    tab.accuracy = std::max(k.accuracy(), 1e-12);
    return tab;
}

std::vector<std::vector<double>> simple_walk_recursion(int size) {
    // A[x][y], 0 <= y <= x <= size
    std::vector<std::vector<double>> A(size + 1);
    for (int x = 0; x <= size; ++x) A[x].assign(x + 1, 0.0);
    if (size >= 1) A[1][0] = 1.0;
    double diag = 0.0;
    for (int d = 1; d <= size; ++d) {
        diag += 1.0 / (2.0 * d - 1.0);
        A[d][d] = 4.0 / kPi * diag;
    }
    auto get = [&](int x, int y) {
        x = std::abs(x);
        y = std::abs(y);
        if (y > x) std::swap(x, y);
        return A[x][y];
    };
    for (int x = 1; x < size; ++x) {
        // harmonicity at (x,x) plus diagonal symmetry
        A[x + 1][x] = 2.0 * A[x][x] - get(x, x - 1);
        for (int y = x - 1; y >= 0; --y)
            A[x + 1][y] =
                4.0 * get(x, y) - get(x - 1, y) - get(x, y + 1) - get(x, y - 1);
    }
    return A;
}

}  // namespace lhit::pk
