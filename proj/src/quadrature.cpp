#include "wlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "wlab/error.hpp"

namespace wlab::quad {
namespace {

// Kronrod 15-point nodes (non-negative half) and weights; Gauss 7-point
// weights on the odd-indexed Kronrod nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, resk * half, std::abs((resk - resg) * half)};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts) {
  if (a == b) return {};
  if (b < a) {
    Result r = integrate(f, b, a, opts);
    r.value = -r.value;
    return r;
  }
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  int intervals = 1;
  const double eps = 50.0 * std::numeric_limits<double>::epsilon();
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (intervals >= opts.max_intervals) {
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << a << ", " << b
          << "] did not converge: error estimate " << error << " for value " << total;
      throw ConvergenceError(msg.str());
    }
    Segment worst = heap.top();
    // Roundoff floor: further bisection cannot help.
    if (worst.error <= eps * std::abs(worst.value) ||
        (worst.b - worst.a) <= eps * std::max(std::abs(worst.a), std::abs(worst.b)))
      break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed the accumulated update roundoff.
  double value = 0.0, err = 0.0;
  std::vector<Segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const auto& s : segs) {
    value += s.value;
    err += s.error;
  }
  return {value, err, intervals};
}

}  // namespace wlab::quad
