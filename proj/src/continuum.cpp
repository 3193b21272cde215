#include "lhit/continuum.hpp"

#include <cmath>

#include "lhit/errors.hpp"
#include "lhit/quadrature.hpp"

namespace lhit::continuum {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double AnisotropicMap::lam() const {
    double det = q11 * q22 - q12 * q12;
    if (!(det > 0.0) || !(q22 > 0.0))
        throw DomainError("covariance matrix must be positive definite");
    return std::sqrt(det) / q22;
}

std::complex<double> AnisotropicMap::apply(std::complex<double> z) const {
    return {z.real() - omega() * z.imag(), lam() * z.imag()};
}

double h_minus(double x, double s) {
    if (!(x > 0.0) || !(s < 0.0))
        throw DomainError("h_minus requires x > 0 and s < 0");
    return std::sqrt(x) / (kPi * (x - s) * std::sqrt(-s));
}

double h_plus(double x, double s) {
    if (!(x < 0.0) || !(s > 0.0))
        throw DomainError("h_plus requires x < 0 and s > 0");
    return std::sqrt(-x) / (kPi * (s - x) * std::sqrt(s));
}

double h_segment_exterior(double n_star, double x, double s) {
    if (!(n_star > 0.0)) throw DomainError("n_star must be positive");
    if (!(std::abs(x) > n_star))
        throw DomainError("h_segment_exterior requires |x| > n_star");
    if (!(std::abs(s) < n_star))
        throw DomainError("h_segment_exterior requires |s| < n_star");
    return std::sqrt(x * x - n_star * n_star) /
           (kPi * std::abs(x - s) * std::sqrt(n_star * n_star - s * s));
}

double h_segment_exterior(const SegmentSpec& seg, double x, double s) {
    return h_segment_exterior(seg.n_star(), x, s);
}

double h_segment_interior(double n_star, double x, double s,
                          bool printed_variant) {
    if (!(n_star > 0.0)) throw DomainError("n_star must be positive");
    if (!(std::abs(x) < n_star) || !(std::abs(s) < n_star))
        throw DomainError("h_segment_interior requires |x|,|s| < n_star");
    if (x == s) throw SingularArguments("h_segment_interior at x == s");
    double num = printed_variant ? (n_star + 0.5) * (n_star + 0.5) - x * s
                                 : n_star * n_star - x * s;
    return num / (kPi * (x - s) * (x - s) *
                  std::sqrt((n_star * n_star - x * x) *
                            (n_star * n_star - s * s)));
}

double h_segment_interior(const SegmentSpec& seg, double x, double s,
                          bool printed_variant) {
    return h_segment_interior(seg.n_star(), x, s, printed_variant);
}

std::complex<double> joukowski_inverse(std::complex<double> z) {
    if (z.imag() == 0.0 && std::abs(z.real()) <= 1.0)
        throw OnSlit("joukowski_inverse undefined on the closed slit");
    // z*sqrt(1 - 1/z^2) with the principal root keeps |f| > 1 on the whole
    // slit plane, unlike sqrt(z^2-1) whose cut crosses the domain.
    std::complex<double> w = z + z * std::sqrt(1.0 - 1.0 / (z * z));
    return w;
}

std::complex<double> boundary_f(double s, Side side) {
    if (!(std::abs(s) < 1.0))
        throw DomainError("boundary_f requires |s| < 1");
    if (side == Side::off_slit)
        throw DomainError("boundary_f needs a bank (above/below)");
    double r = std::sqrt(1.0 - s * s);
    return {s, side == Side::above ? r : -r};
}

double slit_plane_kernel(double s, Side side, std::complex<double> z) {
    std::complex<double> f = joukowski_inverse(z);  // throws OnSlit
    double R = std::abs(f);
    double theta = std::arg(f);
    double theta_s = std::arg(boundary_f(s, side));
    double denom = R * R - 2.0 * R * std::cos(theta - theta_s) + 1.0;
    return (R * R - 1.0) / (2.0 * kPi * denom * std::sqrt(1.0 - s * s));
}

double anisotropic_kernel(const AnisotropicMap& map, std::complex<double> z,
                          double s, Side side) {
    return slit_plane_kernel(s, side, map.apply(z));
}

namespace {

// J_n(a,b) = int_0^inf sqrt(t) / (sqrt(t+2n_*)(t+a)(t+b)) dt
double j_integral(double n_star, double a, double b) {
    auto f = [&](double t) {
        return std::sqrt(t) /
               (std::sqrt(t + 2.0 * n_star) * (t + a) * (t + b));
    };
    // sqrt(t) kink at the origin: t = u^2 on [0,1], plain map on the tail.
    auto g = [&](double u) { return 2.0 * u * f(u * u); };
    quad::Options opt;
    opt.rel_tol = 1e-9;
    double head = quad::integrate_checked(g, 0.0, 1.0, opt);
    double tail = quad::integrate_to_inf(f, 1.0, opt);
    return head + tail;
}

}  // namespace

double q_continuum(double n_star, double x, double y) {
    if (!(x > n_star) || !(y > -n_star))
        throw DomainError("q_continuum requires x > n_star, y > -n_star");
    double a = y + n_star, b = x + n_star;
    return std::sqrt((x - n_star) / (y + n_star)) * j_integral(n_star, a, b) /
           (kPi * kPi);
}

double q_continuum_direct(double n_star, double x, double y) {
    if (!(x > n_star) || !(y > -n_star))
        throw DomainError("q_continuum requires x > n_star, y > -n_star");
    // u = -n_star - v, v > 0; integrand = h^-_{x-n*}(u-n*) h^+_{u+n*}(y+n*).
    auto f = [&](double v) {
        return h_minus(x - n_star, -2.0 * n_star - v) *
               h_plus(-v, y + n_star);
    };
    auto g = [&](double w) { return 2.0 * w * f(w * w); };  // v = w^2
    quad::Options opt;
    opt.rel_tol = 1e-9;
    return quad::integrate_checked(g, 0.0, 1.0, opt) +
           quad::integrate_to_inf(f, 1.0, opt);
}

namespace {

// int_0^1 du / (c + g u^2), valid for c > 0, c + g > 0
double rational_g1(double c, double g) {
    if (std::abs(g) < 1e-10 * c) {
        double r = g / c;
        return (1.0 - r / 3.0 + r * r / 5.0) / c;
    }
    if (g > 0.0) return std::atan(std::sqrt(g / c)) / std::sqrt(c * g);
    return std::atanh(std::sqrt(-g / c)) / std::sqrt(-c * g);
}

}  // namespace

double q_continuum_closed(double n_star, double x, double y) {
    if (!(x > n_star) || !(y > -n_star))
        throw DomainError("q_continuum requires x > n_star, y > -n_star");
    const double a = y + n_star, b = x + n_star;
    const double alpha = 2.0 * n_star - a, beta = 2.0 * n_star - b;
    double j;
    if (std::abs(a - b) > 1e-8 * (a + b)) {
        // J = 2/(a-b) [ a G1(a,alpha) - b G1(b,beta) ]
        j = 2.0 * (a * rational_g1(a, alpha) - b * rational_g1(b, beta)) /
            (a - b);
    } else {
        // coincident poles: J = 4 n_star int u^2/(a + alpha u^2)^2
        double i2;
        if (std::abs(alpha) < 1e-10 * a) {
            i2 = 1.0 / (3.0 * a * a) - 2.0 * alpha / (5.0 * a * a * a);
        } else {
            double g1 = rational_g1(a, alpha);
            double g2 = 1.0 / (2.0 * a * (a + alpha)) + g1 / (2.0 * a);
            i2 = (g1 - a * g2) / alpha;
        }
        j = 4.0 * n_star * i2;
    }
    return std::sqrt((x - n_star) / (y + n_star)) * j / (kPi * kPi);
}

std::pair<double, double> lemma_a1_check(double x, double s) {
    if (!(std::abs(x) < 1.0) || !(std::abs(s) < 1.0))
        throw DomainError("lemma_a1_check requires interior points");
    if (x == s) throw SingularArguments("lemma_a1_check at x == s");
    quad::Options opt;
    opt.rel_tol = 1e-10;
    const double c = 1.0 / (kPi * std::sqrt(1.0 - s * s));
    // xi = cosh u kills the inverse-sqrt edge singularity of the exterior
    // density at the slit tips.
    auto right = [&](double u) {
        double ch = std::cosh(u), sh = std::sinh(u);
        return c * sh * sh / ((ch - x) * (ch - x) * (ch - s));
    };
    auto left = [&](double u) {
        double ch = std::cosh(u), sh = std::sinh(u);
        return c * sh * sh / ((ch + x) * (ch + x) * (ch + s));
    };
    double integral = quad::integrate_checked(right, 0.0, 40.0, opt) +
                      quad::integrate_checked(left, 0.0, 40.0, opt);
    double lhs = 1.0 / ((s - x) * (s - x)) + integral;
    double rhs = (1.0 - x * s) /
                 ((s - x) * (s - x) *
                  std::sqrt((1.0 - x * x) * (1.0 - s * s)));
    return {lhs, rhs};
}

}  // namespace lhit::continuum
