#include "samba/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace samba {
namespace {

constexpr int kMinDepth = 3;

struct Simpson {
  const std::function<double(double)>& f;
  int max_depth;
  // An interval whose width times the spread of its sampled values is below
  // this is accepted outright. This terminates the bisection chain at an
  // endpoint where f is bounded but not smooth (slowly varying functions at
  // 0) and costs at most one such interval per endpoint.
  double coarse_tol;

  double recurse(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= kMinDepth) {
      if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      const auto [lo, hi] = std::minmax({fa, flm, fm, frm, fb});
      if ((b - a) * (hi - lo) <= coarse_tol) return left + right;
    }
    if (depth >= max_depth || !(m > a && m < b) || !std::isfinite(delta)) {
      throw std::runtime_error("adaptive Simpson did not converge");
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  if (!(tol > 0.0)) throw std::invalid_argument("quadrature tol must be > 0");
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const Simpson s{f, max_depth, 0.25 * tol};
  return s.recurse(a, b, fa, fm, fb, whole, 0.5 * tol, 0);
}

}  // namespace samba
