#pragma once

#include <functional>

namespace lhit::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    int evaluations = 0;
};

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_intervals = 4000;
};

// Adaptive Gauss-Kronrod 7/15 with interval bisection on [a, b].
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

// Same, but throws QuadratureFailure when the requested tolerance is missed.
double integrate_checked(const std::function<double(double)>& f, double a,
                         double b, const Options& opt = {});

// Integral over [a, infinity), mapped to a finite interval by t = a + u/(1-u).
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        const Options& opt = {});

// Integral of g(s)/sqrt(s - a) over [a, b]: substitution s = a + u^2 removes
// the endpoint singularity. The caller supplies g (the regular factor times
// the remaining density, i.e. the full integrand multiplied by sqrt(s - a)).
double integrate_sqrt_left(const std::function<double(double)>& g, double a,
                           double b, const Options& opt = {});

// Integral of g(s)/sqrt(b - s) over [a, b].
double integrate_sqrt_right(const std::function<double(double)>& g, double a,
                            double b, const Options& opt = {});

}  // namespace lhit::quad
