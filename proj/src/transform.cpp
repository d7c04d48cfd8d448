#include "lieclass/transform.hpp"

#include <sstream>

#include "lieclass/linalg.hpp"

namespace lieclass {

namespace {

double anchor_point(const Interval& iv) { return iv.contains(0.0) ? 0.0 : iv.mid(); }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

/// Dense uniform-node storage of a scalar curve with derivative values;
/// evaluation by cubic Hermite interpolation.
struct Curve {
  double a = 0, h = 0;
  std::vector<double> v, dv;

  double eval(double x) const {
    int n = static_cast<int>(v.size()) - 1;
    double s = (x - a) / h;
    int k = std::clamp(static_cast<int>(std::floor(s)), 0, n - 1);
    double t = s - k;
    double p0 = v[k], p1 = v[k + 1], m0 = dv[k] * h, m1 = dv[k + 1] * h;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * p1 +
           (t3 - t2) * m1;
  }
  double deriv(double x) const {
    int n = static_cast<int>(v.size()) - 1;
    double s = (x - a) / h;
    int k = std::clamp(static_cast<int>(std::floor(s)), 0, n - 1);
    double t = s - k;
    double p0 = v[k], p1 = v[k + 1], m0 = dv[k] * h, m1 = dv[k + 1] * h;
    double t2 = t * t;
    return ((6 * t2 - 6 * t) * p0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * p1 +
            (3 * t2 - 2 * t) * m1) /
           h;
  }
};

MatD inverse_or_throw(const MatD& h, double x) {
  int m = h.rows();
  MatD aug(m, 2 * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) aug(i, j) = h(i, j);
    aug(i, m + i) = 1.0;
  }
  auto info = rref_in_place(aug, rank_threshold(h));
  if (info.rank < m)
    throw DomainError("remove_first_derivative: transformation matrix singular near x = " +
                      fmt(x));
  MatD inv(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) inv(i, j) = aug(i, j + m);
  return inv;
}

}  // namespace

RemoveInhomogeneityResult remove_inhomogeneity(
    const RawSystemD& sys, std::optional<std::vector<std::vector<double>>> y_p_poly) {
  const int m = sys.m;
  RemoveInhomogeneityResult out{sys, nullptr, 0.0};
  if (sys.f_is_zero()) {
    out.particular = [m](double) { return MatD::zero(m, 1); };
    return out;
  }

  if (y_p_poly) {
    if (static_cast<int>(y_p_poly->size()) != m)
      throw std::invalid_argument("remove_inhomogeneity: particular solution has wrong dimension");
    auto poly_eval = [](const std::vector<double>& cs, double x, int deriv_order) {
      // differentiate the coefficient list deriv_order times, then evaluate
      std::vector<double> c = cs;
      for (int d = 0; d < deriv_order; ++d) {
        std::vector<double> nc;
        for (size_t k = 1; k < c.size(); ++k) nc.push_back(c[k] * static_cast<double>(k));
        c = std::move(nc);
      }
      double acc = 0;
      for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) acc = acc * x + c[k];
      return acc;
    };
    auto yp = [y_p_poly, poly_eval, m](double x) {
      MatD v(m, 1);
      for (int i = 0; i < m; ++i) v(i, 0) = poly_eval((*y_p_poly)[i], x, 0);
      return v;
    };
    double worst = 0;
    for (double x : chebyshev_grid(sys.domain, 33)) {
      MatD ypp(m, 1), ypd(m, 1);
      for (int i = 0; i < m; ++i) {
        ypp(i, 0) = poly_eval((*y_p_poly)[i], x, 2);
        ypd(i, 0) = poly_eval((*y_p_poly)[i], x, 1);
      }
      MatD r = ypp - sys.Bfn.value(x) * ypd - sys.Cfn.value(x) * yp(x) - sys.f_value(x);
      worst = std::max(worst, r.max_abs());
    }
    Tolerance tol;
    if (!tol.is_zero(worst, std::max(1.0, sys.f_value(anchor_point(sys.domain)).max_abs())))
      throw std::invalid_argument(
          "remove_inhomogeneity: supplied particular solution fails the equation (residual " +
          fmt(worst) + ")");
    out.residual = worst;
    out.particular = yp;
    out.system.f.assign(m, {0.0});
    return out;
  }

  // integrate y'' = B y' + C y + f from zero data at the anchor, both ways
  double x0 = anchor_point(sys.domain);
  auto deriv = [&](double t, const MatD& s) {
    MatD y(m, 1), v(m, 1);
    for (int i = 0; i < m; ++i) {
      y(i, 0) = s(i, 0);
      v(i, 0) = s(m + i, 0);
    }
    MatD acc = sys.Bfn.value(t) * v + sys.Cfn.value(t) * y + sys.f_value(t);
    MatD ds(2 * m, 1);
    for (int i = 0; i < m; ++i) {
      ds(i, 0) = v(i, 0);
      ds(m + i, 0) = acc(i, 0);
    }
    return ds;
  };

  auto integrate_table = [&](int steps_scale) {
    const int n = 512 * steps_scale;
    std::vector<Curve> comp(m);
    double h = sys.domain.length() / n;
    for (int i = 0; i < m; ++i) {
      comp[i].a = sys.domain.a;
      comp[i].h = h;
      comp[i].v.assign(n + 1, 0.0);
      comp[i].dv.assign(n + 1, 0.0);
    }
    int k0 = static_cast<int>(std::lround((x0 - sys.domain.a) / h));
    MatD state = MatD::zero(2 * m, 1);
    auto record = [&](int k, const MatD& s) {
      for (int i = 0; i < m; ++i) {
        comp[i].v[k] = s(i, 0);
        comp[i].dv[k] = s(m + i, 0);
      }
    };
    record(k0, state);
    MatD cur = state;
    for (int k = k0; k < n; ++k) {
      cur = rk4_integrate(deriv, cur, sys.domain.a + k * h, sys.domain.a + (k + 1) * h, 4);
      record(k + 1, cur);
    }
    cur = state;
    for (int k = k0; k > 0; --k) {
      cur = rk4_integrate(deriv, cur, sys.domain.a + k * h, sys.domain.a + (k - 1) * h, 4);
      record(k - 1, cur);
    }
    return comp;
  };

  auto coarse = integrate_table(1);
  auto fine = integrate_table(2);
  double cert = 0;
  for (double x : chebyshev_grid(sys.domain, 17))
    for (int i = 0; i < m; ++i) cert = std::max(cert, std::fabs(coarse[i].eval(x) - fine[i].eval(x)));
  out.residual = cert;

  auto table = std::make_shared<std::vector<Curve>>(std::move(fine));
  out.particular = [table, m](double x) {
    MatD v(m, 1);
    for (int i = 0; i < m; ++i) v(i, 0) = (*table)[i].eval(x);
    return v;
  };
  out.system.f.assign(m, {0.0});
  return out;
}

CanonicalSystemD remove_first_derivative(const RawSystemD& sys) {
  if (!sys.f_is_zero())
    throw std::invalid_argument("remove_first_derivative: eliminate f(x) first");
  const int m = sys.m;

  bool b_zero = true;
  for (double x : chebyshev_grid(sys.domain, 17))
    if (sys.Bfn.value(x).max_abs() != 0.0) b_zero = false;
  if (b_zero) return CanonicalSystemD{m, sys.Cfn, false, sys.domain};

  double x0 = anchor_point(sys.domain);
  auto bfn = sys.Bfn;
  auto cfn = sys.Cfn;
  auto hmat = [bfn, m, x0](double x) {
    if (x == x0) return MatD::identity(m);
    auto d = [&bfn](double t, const MatD& h) { return bfn.value(t) * h * 0.5; };
    int steps = std::max(64, static_cast<int>(1024 * std::fabs(x - x0)));
    return rk4_integrate(d, MatD::identity(m), x0, x, steps);
  };
  auto ctilde = [bfn, cfn, hmat](double x) {
    MatD h = hmat(x);
    MatD hinv = inverse_or_throw(h, x);
    MatD b = bfn.value(x);
    MatD k = b * b * 0.25 + cfn.value(x) - bfn.derivative(x) * 0.5;
    return hinv * k * h;
  };
  MFunD out = MFunD::sampled(ctilde, chebyshev_grid(sys.domain));
  return CanonicalSystemD{m, out, false, sys.domain};
}

Interval image_interval(const PointChange& chg) {
  double fa = chg.phi.value(chg.domain.a);
  double fb = chg.phi.value(chg.domain.b);
  return {std::min(fa, fb), std::max(fa, fb)};
}

MFunD apply_point_change(const MFunD& cfn, const PointChange& chg, Tolerance tol) {
  const Interval dom = chg.domain;
  auto grid = chebyshev_grid(dom, 65);
  double sign = 0;
  for (double x : grid) {
    double d = chg.phi.deriv(x);
    if (tol.is_zero(d)) throw DomainError("apply_point_change: phi' vanishes near x = " + fmt(x));
    if (sign == 0)
      sign = d > 0 ? 1 : -1;
    else if ((d > 0 ? 1 : -1) != sign)
      throw DomainError("apply_point_change: phi is not monotone on the working interval");
  }
  Interval image = image_interval(chg);

  const int m = cfn.dim();
  auto phi = chg.phi;
  auto rho_ratio = [chg](double x) { return chg.rho_dd_over_rho(x); };
  auto invert = [phi, dom, sign](double target) {
    double lo = dom.a, hi = dom.b;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      double v = phi.value(mid);
      bool below = sign > 0 ? v < target : v > target;
      (below ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  auto fn = [cfn, phi, rho_ratio, invert, m](double xt) {
    double x = invert(xt);
    double dp = phi.deriv(x);
    MatD c = cfn.value(x) - MatD::identity(m) * rho_ratio(x);
    return c * (1.0 / (dp * dp));
  };
  return MFunD::sampled(fn, chebyshev_grid(image));
}

TraceNormalizeResult trace_normalize(const CanonicalSystemD& sys, Tolerance tol) {
  const int m = sys.m;
  auto grid = chebyshev_grid(sys.domain);
  double scale = 1.0;
  std::vector<double> tr;
  for (double x : grid) {
    MatD c = sys.Cfn.value(x);
    scale = std::max(scale, c.max_abs());
    tr.push_back(c.trace() / m);
  }
  double trmin = *std::min_element(tr.begin(), tr.end());
  double trmax = *std::max_element(tr.begin(), tr.end());

  if (std::max(std::fabs(trmin), std::fabs(trmax)) <= std::max(tol.abs, tol.rel * scale)) {
    CanonicalSystemD out = sys;
    out.trace_normalized = true;
    return {out, PointChange::identity(sys.domain)};
  }

  double x0 = anchor_point(sys.domain);
  PointChange chg;
  chg.domain = sys.domain;

  if (trmax - trmin <= std::max(tol.abs, tol.rel * scale)) {
    // constant trace: cosh / cos closed forms around the anchor
    double kappa = sys.Cfn.value(x0).trace() / m;
    chg.rho_ratio = [kappa](double) { return kappa; };
    if (kappa > 0) {
      double s = std::sqrt(kappa);
      chg.psi = {[s, x0](double x) { return 1.0 / std::cosh(s * (x - x0)); },
                 [s, x0](double x) {
                   double c = std::cosh(s * (x - x0));
                   return -s * std::tanh(s * (x - x0)) / c;
                 },
                 [s, x0](double x) {
                   double sech = 1.0 / std::cosh(s * (x - x0)), t = std::tanh(s * (x - x0));
                   return s * s * (sech * t * t - sech * sech * sech);
                 }};
      chg.phi = {[s, x0](double x) { return x0 + std::tanh(s * (x - x0)) / s; },
                 [s, x0](double x) {
                   double c = std::cosh(s * (x - x0));
                   return 1.0 / (c * c);
                 },
                 [s, x0](double x) {
                   double c = std::cosh(s * (x - x0));
                   return -2 * s * std::tanh(s * (x - x0)) / (c * c);
                 }};
    } else {
      double s = std::sqrt(-kappa);
      double reach = std::max(std::fabs(sys.domain.a - x0), std::fabs(sys.domain.b - x0));
      if (s * reach >= M_PI / 2) {
        double zero = x0 + (M_PI / 2) / s;
        throw DomainError("trace_normalize: rho = cos vanishes at x = " + fmt(zero) +
                          " inside the working interval");
      }
      chg.psi = {[s, x0](double x) { return 1.0 / std::cos(s * (x - x0)); },
                 [s, x0](double x) {
                   double c = std::cos(s * (x - x0));
                   return s * std::sin(s * (x - x0)) / (c * c);
                 },
                 nullptr};
      chg.phi = {[s, x0](double x) { return x0 + std::tan(s * (x - x0)) / s; },
                 [s, x0](double x) {
                   double c = std::cos(s * (x - x0));
                   return 1.0 / (c * c);
                 },
                 [s, x0](double x) {
                   double c = std::cos(s * (x - x0));
                   return 2 * s * std::tan(s * (x - x0)) / (c * c);
                 }};
    }
  } else {
    // varying trace: integrate rho'' = (tr C / m) rho, phi' = 1/rho^2
    auto cfn = sys.Cfn;
    auto kappa = [cfn, m](double x) { return cfn.value(x).trace() / m; };
    const int n = 4096;
    double h = sys.domain.length() / n;
    Curve rho, phi_c;
    rho.a = phi_c.a = sys.domain.a;
    rho.h = phi_c.h = h;
    rho.v.assign(n + 1, 0);
    rho.dv.assign(n + 1, 0);
    phi_c.v.assign(n + 1, 0);
    phi_c.dv.assign(n + 1, 0);
    int k0 = static_cast<int>(std::lround((x0 - sys.domain.a) / h));
    auto deriv = [kappa](double t, const MatD& s) {
      MatD d(3, 1);
      d(0, 0) = s(1, 0);
      d(1, 0) = kappa(t) * s(0, 0);
      d(2, 0) = 1.0 / (s(0, 0) * s(0, 0));
      return d;
    };
    MatD init(3, 1);
    init(0, 0) = 1;
    init(1, 0) = 0;
    init(2, 0) = x0;
    auto record = [&](int k, const MatD& s) {
      rho.v[k] = s(0, 0);
      rho.dv[k] = s(1, 0);
      phi_c.v[k] = s(2, 0);
      phi_c.dv[k] = 1.0 / (s(0, 0) * s(0, 0));
      if (s(0, 0) <= 0)
        throw DomainError("trace_normalize: rho vanishes near x = " +
                          fmt(sys.domain.a + k * h) + " inside the working interval");
    };
    record(k0, init);
    MatD cur = init;
    for (int k = k0; k < n; ++k) {
      cur = rk4_integrate(deriv, cur, sys.domain.a + k * h, sys.domain.a + (k + 1) * h, 4);
      record(k + 1, cur);
    }
    cur = init;
    for (int k = k0; k > 0; --k) {
      cur = rk4_integrate(deriv, cur, sys.domain.a + k * h, sys.domain.a + (k - 1) * h, 4);
      record(k - 1, cur);
    }
    auto rho_t = std::make_shared<Curve>(std::move(rho));
    auto phi_t = std::make_shared<Curve>(std::move(phi_c));
    chg.rho_ratio = kappa;
    chg.psi = {[rho_t](double x) { return 1.0 / rho_t->eval(x); },
               [rho_t](double x) {
                 double r = rho_t->eval(x);
                 return -rho_t->deriv(x) / (r * r);
               },
               nullptr};
    chg.phi = {[phi_t](double x) { return phi_t->eval(x); },
               [phi_t](double x) { return phi_t->deriv(x); }, nullptr};
  }

  MFunD out = apply_point_change(sys.Cfn, chg, tol);
  return {CanonicalSystemD{m, out, true, image_interval(chg)}, chg};
}

}  // namespace lieclass
