#include "nlfem/adaptive.hpp"

#include "nlfem/core.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace nlfem {

namespace {

// Kronrod 15-point abscissae; odd entries (1, 3, 5) are the embedded Gauss 7-point nodes.
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

Interval kronrod(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, const AdaptiveOptions& opts) {
  if (a == b) return 0.0;
  std::priority_queue<Interval> heap;
  Interval first = kronrod(f, a, b);
  double total = first.value, err = first.error;
  heap.push(first);
  int count = 1;
  while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (count >= opts.max_intervals) {
      throw NumericError("adaptive quadrature did not reach tolerance on [" + std::to_string(a) + ", " +
                         std::to_string(b) + "]");
    }
    const Interval worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > std::min(worst.a, worst.b) && m < std::max(worst.a, worst.b))) {
      // Interval exhausted at machine precision; accept what we have.
      break;
    }
    const Interval l = kronrod(f, worst.a, m), r = kronrod(f, m, worst.b);
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  if (!std::isfinite(total)) throw NumericError("adaptive quadrature produced a non-finite value");
  // Recompute the sum to drop accumulated rounding from the running updates.
  double sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    heap.pop();
  }
  return sum;
}

double integrate_endpoint_singular(const std::function<double(double)>& g, double a, double b, double alpha,
                                   const AdaptiveOptions& opts) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidArgument("endpoint exponent must lie in [0, 1)");
  const double len = std::abs(b - a);
  if (len == 0.0) return 0.0;
  const double sgn = b > a ? 1.0 : -1.0;
  const double p = 1.0 / (1.0 - alpha);
  // s = v^p, ds = p v^(p-1) dv and s^(-alpha) ds = p dv.
  const double vmax = std::pow(len, 1.0 - alpha);
  auto h = [&](double v) { return p * g(a + sgn * std::pow(v, p)); };
  return sgn * integrate_adaptive(h, 0.0, vmax, opts);
}

}  // namespace nlfem
