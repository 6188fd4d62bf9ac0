#ifndef COMPDIST_QUADRATURE_HPP
#define COMPDIST_QUADRATURE_HPP

#include <cmath>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace compdist {

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
// (QUADPACK dqk15 constants). Nodes are symmetric and interior, so
// integrable endpoint singularities are never evaluated directly.
inline constexpr double kGK15Node[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGK15WeightK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGK15WeightG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
inline void gk15(const F& f, double a, double b, double& value, double& err) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double result_k = 0.0;
  double result_g = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kGK15Node[i];
    const double f1 = f(center - dx);
    const double f2 = (i < 7) ? f(center + dx) : f1;
    const double fsum = (i < 7) ? (f1 + f2) : f1;
    result_k += kGK15WeightK[i] * fsum;
    if (i % 2 == 1) {
      result_g += kGK15WeightG[i / 2] * fsum;
    } else if (i == 7) {
      result_g += kGK15WeightG[3] * f1;
    }
  }
  value = result_k * half;
  err = std::fabs((result_k - result_g) * half);
}

struct QuadCell {
  double a, b, value, err;
  bool operator<(const QuadCell& o) const { return err < o.err; }
};

}  // namespace detail

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int cells = 0;
  bool converged = false;
};

// Globally adaptive Gauss-Kronrod integration on [a, b]: the cell with the
// largest error estimate is bisected until the accumulated estimate meets
// max(atol, rtol * |value|) or the cell budget runs out.
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b,
                                    double rtol = 1e-10, double atol = 0.0,
                                    int max_cells = 4000) {
  QuadratureResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  if (!(a < b)) throw std::invalid_argument("integrate_adaptive: requires a < b");

  std::priority_queue<detail::QuadCell> cells;
  detail::QuadCell root{a, b, 0.0, 0.0};
  detail::gk15(f, a, b, root.value, root.err);
  double total = root.value;
  double total_err = root.err;
  cells.push(root);
  int n_cells = 1;

  while (n_cells < max_cells) {
    const double tol = std::max(atol, rtol * std::fabs(total));
    if (total_err <= tol) break;
    detail::QuadCell worst = cells.top();
    cells.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      // Interval width exhausted at double precision; keep its estimate.
      cells.push(worst);
      break;
    }
    detail::QuadCell left{worst.a, mid, 0.0, 0.0};
    detail::QuadCell right{mid, worst.b, 0.0, 0.0};
    detail::gk15(f, left.a, left.b, left.value, left.err);
    detail::gk15(f, right.a, right.b, right.value, right.err);
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    cells.push(left);
    cells.push(right);
    ++n_cells;
  }

  res.value = total;
  res.error_estimate = total_err;
  res.cells = n_cells;
  res.converged = total_err <= std::max(atol, rtol * std::fabs(total));
  return res;
}

template <typename F>
double integrate(F&& f, double a, double b, double rtol = 1e-10,
                 double atol = 0.0, int max_cells = 4000) {
  return integrate_adaptive(std::forward<F>(f), a, b, rtol, atol, max_cells).value;
}

// Golden-section minimization of a unimodal-ish function on [a, b].
// Returns (argmin, min). The caller brackets; tolerance is on the argument.
template <typename F>
std::pair<double, double> golden_section_min(F&& f, double a, double b,
                                             double xtol = 1e-8,
                                             int max_iters = 200) {
  constexpr double inv_phi = 0.61803398874989484820;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iters && (b - a) > xtol; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_phi;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_phi;
      fd = f(d);
    }
  }
  return (fc < fd) ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace compdist

#endif
