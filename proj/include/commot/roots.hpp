#pragma once

#include <cmath>
#include <utility>

namespace commot {

struct RootResult {
  double x = 0.0;
  int steps = 0;
  bool converged = false;
};

/// Safeguarded Newton iteration for a strictly decreasing function.
///
/// `eval(x)` returns {f(x), f'(x)}. The bracket must satisfy f(lo) >= 0 >= f(hi).
/// Newton steps that leave the bracket, or a vanishing derivative, fall back to
/// bisection. Stops when |f| <= tol or when the bracket has shrunk to adjacent
/// doubles, which is the best a double root can do.
template <class Eval>
RootResult find_decreasing_root(Eval&& eval, double lo, double hi, double x0, double tol,
                                int max_steps) {
  RootResult out;
  double x = (x0 >= lo && x0 <= hi) ? x0 : 0.5 * (lo + hi);
  for (int step = 0; step < max_steps; ++step) {
    auto [f, df] = eval(x);
    out.x = x;
    out.steps = step + 1;
    if (std::abs(f) <= tol) {
      out.converged = true;
      return out;
    }
    if (f > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = (df < 0.0 && std::isfinite(df)) ? x - f / df : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next <= lo || next >= hi) {
      // lo and hi are adjacent doubles
      out.converged = true;
      return out;
    }
    x = next;
  }
  return out;
}

}  // namespace commot
