#include "lieclass/matcore.hpp"

namespace lieclass {

MatD mat_exp_pade(const MatD& a) {
  a.require_square("mat_exp_pade");
  const int n = a.rows();
  const int q = 6;

  int s = 0;
  double norm = a.norm_inf();
  if (norm > 0.5) s = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.5))));
  MatD x = a * (1.0 / std::ldexp(1.0, s));

  MatD num = MatD::identity(n);
  MatD den = MatD::identity(n);
  MatD pow = MatD::identity(n);
  double c = 1.0;
  for (int k = 1; k <= q; ++k) {
    c *= static_cast<double>(q - k + 1) / (static_cast<double>(k) * (2 * q - k + 1));
    pow = pow * x;
    num = num + pow * c;
    den = (k % 2 == 0) ? den + pow * c : den - pow * c;
  }

  // F = den^{-1} num, column by column
  MatD f(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = num(i, j);
    auto col = solve_linear(den, rhs);
    if (!col) throw std::runtime_error("mat_exp_pade: singular Pade denominator");
    for (int i = 0; i < n; ++i) f(i, j) = (*col)[i];
  }
  for (int k = 0; k < s; ++k) f = f * f;
  return f;
}

QuadraticValue make_quadratic(const Rat& a, const Rat& b, const mpz_class& d) {
  QuadraticValue v{a, b, d};
  if (sgn(v.b) == 0 || sgn(v.d) == 0) {
    v.b = 0;
    v.d = 0;
  } else if (v.d == 1) {
    v.a += v.b;
    v.b = 0;
    v.d = 0;
  }
  return v;
}

}  // namespace lieclass
