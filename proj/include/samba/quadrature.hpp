#pragma once

#include <functional>

namespace samba {

// Adaptive Simpson quadrature of f over [a, b] to absolute error `tol`
// (Lyness acceptance |S2 - S1| <= 15 tol, with Richardson correction).
// Throws std::runtime_error if any subinterval fails to converge within
// `max_depth` bisections.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 60);

}  // namespace samba
