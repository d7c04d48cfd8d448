#ifndef LIECLASS_ODE_HPP
#define LIECLASS_ODE_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "lieclass/matrix.hpp"

namespace lieclass {

struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Classical fourth-order Runge-Kutta with a fixed step count; the state is a
/// dense matrix (vectors are n x 1). Throws on non-finite values.
template <class F>
MatD rk4_integrate(F&& deriv, MatD y, double x0, double x1, int steps) {
  if (steps < 1) throw std::invalid_argument("rk4_integrate: steps must be positive");
  double h = (x1 - x0) / steps;
  if (!std::isfinite(h) || (x1 != x0 && h == 0.0))
    throw IntegrationError("rk4_integrate: step size underflow");
  double x = x0;
  for (int s = 0; s < steps; ++s) {
    MatD k1 = deriv(x, y);
    MatD k2 = deriv(x + h / 2, y + k1 * (h / 2));
    MatD k3 = deriv(x + h / 2, y + k2 * (h / 2));
    MatD k4 = deriv(x + h, y + k3 * h);
    y = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6);
    x = x0 + (s + 1) * h;
    if (!std::isfinite(y.max_abs()))
      throw IntegrationError("rk4_integrate: non-finite state encountered");
  }
  return y;
}

inline int default_ode_steps(double x0, double x1) {
  return std::max(2048, static_cast<int>(2048 * std::fabs(x1 - x0)));
}

/// Solves X' = A(x) X + X B(x), X(0) = C0 through the factorization
/// X = Y C0 Z with Y' = A Y, Y(0) = E and Z' = Z B, Z(0) = E.
/// This is the numeric oracle for conjugated-exponential formulas.
inline MatD solve_matrix_ode(const std::function<MatD(double)>& afn,
                             const std::function<MatD(double)>& bfn, const MatD& c0, double x,
                             int steps = 0) {
  c0.require_square("solve_matrix_ode");
  if (x == 0.0) return c0;
  if (steps == 0) steps = default_ode_steps(0.0, x);
  int n = c0.rows();
  MatD y = rk4_integrate([&](double t, const MatD& m) { return afn(t) * m; },
                         MatD::identity(n), 0.0, x, steps);
  MatD z = rk4_integrate([&](double t, const MatD& m) { return m * bfn(t); },
                         MatD::identity(n), 0.0, x, steps);
  return y * c0 * z;
}

/// Trajectory of y'' = B(x) y' + C(x) y + f(x) from (y0, v0) at x0, reported
/// at the requested points (must be increasing or decreasing from x0).
inline std::vector<MatD> integrate_second_order(
    const std::function<MatD(double)>& bfn, const std::function<MatD(double)>& cfn,
    const std::function<MatD(double)>& ffn, MatD y0, MatD v0, double x0,
    const std::vector<double>& xs, int steps_per_segment = 64) {
  int m = y0.rows();
  MatD state(2 * m, 1);
  for (int i = 0; i < m; ++i) {
    state(i, 0) = y0(i, 0);
    state(m + i, 0) = v0(i, 0);
  }
  auto deriv = [&](double t, const MatD& s) {
    MatD y(m, 1), v(m, 1);
    for (int i = 0; i < m; ++i) {
      y(i, 0) = s(i, 0);
      v(i, 0) = s(m + i, 0);
    }
    MatD acc = bfn(t) * v + cfn(t) * y + ffn(t);
    MatD ds(2 * m, 1);
    for (int i = 0; i < m; ++i) {
      ds(i, 0) = v(i, 0);
      ds(m + i, 0) = acc(i, 0);
    }
    return ds;
  };
  std::vector<MatD> out;
  double cur = x0;
  for (double xj : xs) {
    if (xj != cur) state = rk4_integrate(deriv, state, cur, xj, steps_per_segment);
    cur = xj;
    MatD y(m, 1);
    for (int i = 0; i < m; ++i) y(i, 0) = state(i, 0);
    out.push_back(y);
  }
  return out;
}

}  // namespace lieclass

#endif
