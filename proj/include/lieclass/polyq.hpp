#ifndef LIECLASS_POLYQ_HPP
#define LIECLASS_POLYQ_HPP

#include <vector>

#include "lieclass/scalar.hpp"

namespace lieclass {

/// Univariate polynomial over the rationals, coefficients in ascending order.
struct PolyQ {
  std::vector<Rat> c;

  static PolyQ constant(const Rat& v) { return PolyQ{{v}}; }

  int degree() const {
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
      if (sgn(c[i]) != 0) return i;
    return -1;  // zero polynomial
  }
  bool is_zero() const { return degree() < 0; }
  void trim() {
    while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
  }
  Rat eval(const Rat& x) const {
    Rat v(0);
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) v = v * x + c[i];
    return v;
  }
  Rat lead() const {
    int d = degree();
    return d < 0 ? Rat(0) : c[d];
  }

  PolyQ derivative() const {
    PolyQ d;
    for (size_t i = 1; i < c.size(); ++i) d.c.push_back(Rat(static_cast<long>(i)) * c[i]);
    return d;
  }

  PolyQ monic() const {
    PolyQ r = *this;
    r.trim();
    if (r.c.empty()) return r;
    Rat inv = 1 / r.c.back();
    for (auto& v : r.c) v *= inv;
    return r;
  }
};

inline PolyQ operator*(const PolyQ& a, const PolyQ& b) {
  if (a.c.empty() || b.c.empty()) return {};
  PolyQ r;
  r.c.assign(a.c.size() + b.c.size() - 1, Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

/// Euclidean division: returns (quotient, remainder).
inline std::pair<PolyQ, PolyQ> poly_divmod(PolyQ a, const PolyQ& b) {
  a.trim();
  int db = b.degree();
  if (db < 0) throw std::invalid_argument("poly_divmod: division by zero polynomial");
  PolyQ q;
  q.c.assign(std::max<size_t>(a.c.size(), 1), Rat(0));
  while (a.degree() >= db) {
    int da = a.degree();
    Rat f = a.c[da] / b.c[db];
    q.c[da - db] = f;
    for (int i = 0; i <= db; ++i) a.c[da - db + i] -= f * b.c[i];
    a.trim();
  }
  q.trim();
  return {q, a};
}

inline PolyQ poly_gcd(PolyQ a, PolyQ b) {
  a.trim();
  b.trim();
  while (!b.is_zero()) {
    PolyQ r = poly_divmod(a, b).second;
    a = b;
    b = r;
  }
  return a.monic();
}

/// Yun's squarefree decomposition: returns factors f_k (monic, squarefree)
/// with p ~ prod f_k^k; entries may be the constant 1.
inline std::vector<PolyQ> squarefree_decomposition(const PolyQ& p) {
  std::vector<PolyQ> out;
  PolyQ a = p.monic();
  if (a.degree() <= 0) return out;
  PolyQ da = a.derivative();
  PolyQ g = poly_gcd(a, da);
  if (g.degree() == 0) {
    out.push_back(a);
    return out;
  }
  PolyQ w = poly_divmod(a, g).first;
  PolyQ z = poly_divmod(da, g).first;
  while (true) {
    // s = z - w'
    PolyQ dw = w.derivative();
    PolyQ s = z;
    s.c.resize(std::max(s.c.size(), dw.c.size()), Rat(0));
    for (size_t i = 0; i < dw.c.size(); ++i) s.c[i] -= dw.c[i];
    s.trim();
    if (s.is_zero()) {
      out.push_back(w.monic());
      break;
    }
    PolyQ f = poly_gcd(w, s);
    out.push_back(f);
    w = poly_divmod(w, f).first;
    z = poly_divmod(s, f).first;
  }
  return out;
}

}  // namespace lieclass

#endif
