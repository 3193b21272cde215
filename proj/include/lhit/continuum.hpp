#pragma once

#include <complex>
#include <utility>

#include "lhit/walk_law.hpp"

namespace lhit::continuum {

struct SegmentSpec {
    int n = 1;
    double n_star() const { return n - 0.5; }
    int num_sites() const { return 2 * n - 1; }  // {-n+1,...,n-1}
};

enum class Side { above, below, off_slit };

struct SlitPoint {
    std::complex<double> z;
    Side side = Side::off_slit;
};

// Anisotropic reduction z -> (x - omega*y) + i*lam*y of the correlated
// Brownian motion Q^{1/2} B_t to the standard one.
struct AnisotropicMap {
    double q11 = 1.0, q12 = 0.0, q22 = 1.0;
    double omega() const { return q12 / q22; }
    double lam() const;
    std::complex<double> apply(std::complex<double> z) const;
};

// Density at s < 0 of the Brownian hitting position of the negative
// half-line, started from x > 0 on the positive axis.
double h_minus(double x, double s);

// Mirror image: hitting density of the positive half-line from x < 0 at s > 0.
double h_plus(double x, double s);

// Hitting density of the slit (-n_star, n_star) from an exterior real point.
double h_segment_exterior(double n_star, double x, double s);
double h_segment_exterior(const SegmentSpec& seg, double x, double s);

// Interior extension of the segment density (both arguments inside the slit).
// `printed_variant` switches the numerator to the n^2 - xs form; the default
// n_star^2 - xs is the one consistent with the exterior kernel.
double h_segment_interior(double n_star, double x, double s,
                          bool printed_variant = false);
double h_segment_interior(const SegmentSpec& seg, double x, double s,
                          bool printed_variant = false);

// Inverse Joukowski map f(z) = z + sqrt(z^2-1), branch with |f| > 1.
std::complex<double> joukowski_inverse(std::complex<double> z);

// Boundary values f(s +- i0) = s +- i sqrt(1-s^2) for |s| < 1.
std::complex<double> boundary_f(double s, Side side);

// Poisson kernel of the slit plane C \ [-1,1] against arc length in s,
// one-sided (the slit has two banks).
double slit_plane_kernel(double s, Side side, std::complex<double> z);

double anisotropic_kernel(const AnisotropicMap& map, std::complex<double> z,
                          double s, Side side);

// q(x,y): density of the first return to the right of the slit after one
// excursion through the left half-line, for the slit (-n_star, n_star).
// Evaluated through J_n by adaptive quadrature.
double q_continuum(double n_star, double x, double y);

// Same quantity by the direct double integral of h^- h^+ (independent route,
// used for cross-checks).
double q_continuum_direct(double n_star, double x, double y);

// Closed form of the same kernel: the substitution u^2 = t/(t+2n_star)
// turns J_n into a rational integral, elementary in arctan/artanh. Used
// where q is tabulated densely.
double q_continuum_closed(double n_star, double x, double y);

// Both sides of the interior-kernel integral identity at unit normalization.
std::pair<double, double> lemma_a1_check(double x, double s);

}  // namespace lhit::continuum
