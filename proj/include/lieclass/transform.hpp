#ifndef LIECLASS_TRANSFORM_HPP
#define LIECLASS_TRANSFORM_HPP

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "lieclass/mfun.hpp"
#include "lieclass/ode.hpp"

namespace lieclass {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scalar function of x with optional closed-form derivatives; missing
/// derivatives fall back to central differences.
struct ScalarFun {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;

  double value(double x) const { return f(x); }
  double deriv(double x) const {
    if (df) return df(x);
    const double h = 1e-6;
    return (f(x + h) - f(x - h)) / (2 * h);
  }
  double deriv2(double x) const {
    if (d2f) return d2f(x);
    const double h = 1e-4;
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
  }
  static ScalarFun constant(double c) {
    return {[c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  }
};

/// y'' = B(x) y' + C(x) y + f(x); f is stored as per-component polynomial
/// coefficient lists (ascending powers).
template <class S>
struct RawSystem {
  int m = 0;
  MatrixFunction<S> Bfn;
  MatrixFunction<S> Cfn;
  std::vector<std::vector<S>> f;
  Interval domain;

  bool f_is_zero() const {
    for (const auto& comp : f)
      for (const auto& c : comp)
        if (!scalar_traits<S>::is_zero(c)) return false;
    return true;
  }
  Matrix<S> f_value(const S& x) const {
    Matrix<S> v(m, 1);
    for (int i = 0; i < m; ++i) {
      const auto& cs = f[i];
      S acc = scalar_traits<S>::zero();
      for (int k = static_cast<int>(cs.size()) - 1; k >= 0; --k) acc = acc * x + cs[k];
      v(i, 0) = acc;
    }
    return v;
  }
};

/// y'' = C(x) y.
template <class S>
struct CanonicalSystem {
  int m = 0;
  MatrixFunction<S> Cfn;
  bool trace_normalized = false;
  Interval domain;
};

using RawSystemD = RawSystem<double>;
using CanonicalSystemQ = CanonicalSystem<Rat>;
using CanonicalSystemD = CanonicalSystem<double>;

/// Change of variables x~ = phi(x), y~ = psi(x) y with the compatibility
/// condition phi''/phi' = 2 psi'/psi; rho = 1/psi.
struct PointChange {
  ScalarFun phi;
  ScalarFun psi;
  Interval domain;
  /// rho''/rho, supplied in closed form where the construction knows it.
  std::function<double(double)> rho_ratio;

  double rho(double x) const { return 1.0 / psi.value(x); }

  double rho_dd_over_rho(double x) const {
    if (rho_ratio) return rho_ratio(x);
    double p = psi.value(x), dp = psi.deriv(x), ddp = psi.deriv2(x);
    return -ddp / p + 2 * (dp / p) * (dp / p);
  }

  /// Largest violation of phi''/phi' = 2 psi'/psi over the grid.
  double compatibility_residual(const std::vector<double>& grid) const {
    double worst = 0;
    for (double x : grid) {
      double r = phi.deriv2(x) / phi.deriv(x) - 2 * psi.deriv(x) / psi.value(x);
      worst = std::max(worst, std::fabs(r));
    }
    return worst;
  }

  static PointChange identity(Interval iv) {
    PointChange c;
    c.phi = {[](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
    c.psi = ScalarFun::constant(1.0);
    c.domain = iv;
    c.rho_ratio = [](double) { return 0.0; };
    return c;
  }

  /// phi = psi = 1/x; an involution on intervals avoiding 0.
  static PointChange involution(Interval iv) {
    if (iv.contains(0.0)) throw DomainError("involution change undefined across x = 0");
    PointChange c;
    c.phi = {[](double x) { return 1.0 / x; }, [](double x) { return -1.0 / (x * x); },
             [](double x) { return 2.0 / (x * x * x); }};
    c.psi = c.phi;
    c.domain = iv;
    c.rho_ratio = [](double) { return 0.0; };  // rho = x
    return c;
  }
};

// ---------------------------------------------------------------------------

struct RemoveInhomogeneityResult {
  RawSystemD system;
  std::function<MatD(double)> particular;  // the y_p that was subtracted
  double residual = 0.0;                   // certificate from step-halving
};

/// Eliminates f(x) by subtracting a particular solution. When y_p is not
/// given it is integrated from zero initial data at the anchor point.
RemoveInhomogeneityResult remove_inhomogeneity(
    const RawSystemD& sys, std::optional<std::vector<std::vector<double>>> y_p_poly = {});

/// Eliminates the first-derivative coefficient through y = H(x) y~ with
/// 2H' = B H, H(anchor) = E. The transformed coefficient is
/// C~ = H^{-1} (B^2/4 + C - B'/2) H.
CanonicalSystemD remove_first_derivative(const RawSystemD& sys);

struct TraceNormalizeResult {
  CanonicalSystemD system;
  PointChange change;
};

/// Makes tr C~ = 0 by solving rho'' = (tr C / m) rho with rho(0)=1, rho'(0)=0
/// (closed cosh/cos/constant branches for constant trace, integration
/// otherwise), psi = 1/rho and phi' = psi^2, phi(anchor) = anchor.
TraceNormalizeResult trace_normalize(const CanonicalSystemD& sys, Tolerance tol = {});

/// Transforms C through a point change: C~(phi(x)) = phi'^{-2} (C - (rho''/rho) E).
/// The result is a sampled function on the image interval.
MFunD apply_point_change(const MFunD& cfn, const PointChange& chg, Tolerance tol = {});

Interval image_interval(const PointChange& chg);

// ---------------------------------------------------------------------------
// Coordinate action of the equivalence transformations on the span
// (x1, x2, x3) of the three generators with nonzero xi.
// ---------------------------------------------------------------------------

enum class L3Kind { Mobius, Scale, Shift };

template <class S>
using L3Coords = std::array<S, 3>;

/// x -> x/(1-ax): x1 += 2a x2 + a^2 x3, x2 += a x3.
template <class S>
L3Coords<S> mobius_coords(const std::type_identity_t<S>& a, const L3Coords<S>& v) {
  return {v[0] + S(2) * a * v[1] + a * a * v[2], v[1] + a * v[2], v[2]};
}

/// x -> x - a: x2 += a x1, x3 += 2a x2 + a^2 x1.
template <class S>
L3Coords<S> shift_coords(const std::type_identity_t<S>& a, const L3Coords<S>& v) {
  return {v[0], v[1] + a * v[0], v[2] + S(2) * a * v[1] + a * a * v[0]};
}

/// x -> x/s: x1 *= s, x3 /= s (s = e^a for the one-parameter form).
template <class S>
L3Coords<S> scale_coords_factor(const std::type_identity_t<S>& s, const L3Coords<S>& v) {
  if (scalar_traits<S>::is_zero(s)) throw std::invalid_argument("scale_coords_factor: zero factor");
  return {v[0] * s, v[1], v[2] / s};
}

/// x -> 1/x: (x1, x2, x3) -> (-x3, -x2, -x1).
template <class S>
L3Coords<S> involution_coords(const L3Coords<S>& v) {
  return {-v[2], -v[1], -v[0]};
}

template <class S>
L3Coords<S> transform_generator_coords(L3Kind kind, const std::type_identity_t<S>& a,
                                       const L3Coords<S>& v) {
  switch (kind) {
    case L3Kind::Mobius:
      return mobius_coords<S>(a, v);
    case L3Kind::Shift:
      return shift_coords<S>(a, v);
    case L3Kind::Scale:
      if constexpr (scalar_traits<S>::is_exact)
        throw std::domain_error(
            "transform_generator_coords: scale uses exp(a); call scale_coords_factor in exact mode");
      else
        return scale_coords_factor<S>(std::exp(a), v);
  }
  throw std::logic_error("transform_generator_coords: bad kind");
}

}  // namespace lieclass

#endif
