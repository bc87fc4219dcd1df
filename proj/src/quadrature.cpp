#include "levylab/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "levylab/errors.hpp"

namespace levylab {

namespace {

struct Worker {
  const std::function<double(double)>& f;
  int evals = 0;

  double eval(double x) {
    ++evals;
    return f(x);
  }

  // Recursive Simpson with the standard |S_half - S| / 15 error estimate.
  double refine(double a, double b, double fa, double fm, double fb, double s,
                double tol, int depth, double& err_acc) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double h = b - a;
    const double s_left = h / 12.0 * (fa + 4.0 * flm + fm);
    const double s_right = h / 12.0 * (fm + 4.0 * frm + fb);
    const double s2 = s_left + s_right;
    const double err = (s2 - s) / 15.0;
    if (depth <= 0 || std::abs(err) <= tol) {
      err_acc += std::abs(err);
      if (depth <= 0 && std::abs(err) > tol) err_acc += std::abs(err);
      return s2 + err;
    }
    return refine(a, m, fa, flm, fm, s_left, 0.5 * tol, depth - 1, err_acc) +
           refine(m, b, fm, frm, fb, s_right, 0.5 * tol, depth - 1, err_acc);
  }
};

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol, int max_depth) {
  if (a == b) return {0.0, 0.0, 0};
  Worker w{f};
  const double fa = w.eval(a);
  const double m = 0.5 * (a + b);
  const double fm = w.eval(m);
  const double fb = w.eval(b);
  const double s = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double err_acc = 0.0;
  const double v = w.refine(a, b, fa, fm, fb, s, abs_tol, max_depth, err_acc);
  if (!std::isfinite(v) || err_acc > 2.0 * abs_tol) {
    std::ostringstream os;
    os << "integrate: tolerance " << abs_tol << " not met (achieved ~"
       << err_acc << ")";
    throw QuadratureError(os.str(), err_acc);
  }
  return {v, err_acc, w.evals};
}

}  // namespace levylab
