#pragma once

#include <functional>

namespace nlfem {

struct AdaptiveOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  int max_intervals = 20000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of f over [a, b].
/// Throws NumericError when the error target is not met within max_intervals.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, const AdaptiveOptions& opts = {});

/// Integral of |t - a|^(-alpha) g(t) over [a, b] (either orientation), with
/// the endpoint singularity removed by the substitution |t - a| = v^(1/(1-alpha)).
double integrate_endpoint_singular(const std::function<double(double)>& g, double a, double b, double alpha,
                                   const AdaptiveOptions& opts = {});

}  // namespace nlfem
