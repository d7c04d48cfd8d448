#include <algorithm>
#include <map>

#include "lieclass/matcore.hpp"

namespace lieclass {

PolyQ charpoly(const MatQ& a) {
  a.require_square("charpoly");
  const int m = a.rows();
  std::vector<Rat> desc;  // coefficients of lambda^m, lambda^{m-1}, ...
  desc.push_back(Rat(1));
  MatQ cur = a;
  for (int k = 1; k <= m; ++k) {
    Rat qk = -cur.trace() / Rat(k);
    desc.push_back(qk);
    if (k < m) cur = a * (cur + MatQ::identity(m) * qk);
  }
  PolyQ p;
  p.c.assign(m + 1, Rat(0));
  for (int i = 0; i <= m; ++i) p.c[m - i] = desc[i];
  return p;
}

namespace {

bool is_triangular(const MatQ& a) {
  bool upper = true, lower = true;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (i > j && sgn(a(i, j)) != 0) upper = false;
      if (i < j && sgn(a(i, j)) != 0) lower = false;
    }
  return upper || lower;
}

// Full factorization by trial division; gives up on large composite cofactors.
std::optional<std::map<mpz_class, int>> factorize(mpz_class n) {
  std::map<mpz_class, int> f;
  n = abs(n);
  if (n == 0) return std::nullopt;
  constexpr unsigned long kBound = 1000000;
  for (unsigned long p = 2; p <= kBound && n > 1; p += (p == 2 ? 1 : 2)) {
    if (mpz_class(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      f[mpz_class(p)]++;
    }
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
      f[n]++;
    } else if (mpz_perfect_square_p(n.get_mpz_t())) {
      mpz_class r;
      mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
      if (!mpz_probab_prime_p(r.get_mpz_t(), 30)) return std::nullopt;
      f[r] += 2;
    } else {
      return std::nullopt;
    }
  }
  return f;
}

std::optional<std::vector<mpz_class>> divisors(const mpz_class& n, size_t cap = 100000) {
  auto f = factorize(n);
  if (!f) return std::nullopt;
  std::vector<mpz_class> divs{1};
  for (const auto& [p, e] : *f) {
    size_t base = divs.size();
    mpz_class pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (size_t i = 0; i < base; ++i) {
        divs.push_back(divs[i] * pk);
        if (divs.size() > cap) return std::nullopt;
      }
    }
  }
  return divs;
}

// Divides p by (x - r) in place assuming r is a root.
void deflate(PolyQ& p, const Rat& r) {
  int d = p.degree();
  std::vector<Rat> q(d, Rat(0));
  Rat carry = p.c[d];
  for (int i = d - 1; i >= 0; --i) {
    q[i] = carry;
    carry = p.c[i] + carry * r;
  }
  p.c = std::move(q);
}

// All rational roots of p (with multiplicity), deflating them out of p.
std::optional<std::vector<Rat>> extract_rational_roots(PolyQ& p) {
  std::vector<Rat> roots;
  while (p.degree() >= 1 && sgn(p.c[0]) == 0) {
    roots.emplace_back(0);
    p.c.erase(p.c.begin());
  }
  if (p.degree() < 1) return roots;
  // scale to integer coefficients
  mpz_class den_lcm = 1;
  for (const auto& v : p.c)
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v.get_den().get_mpz_t());
  std::vector<mpz_class> ic;
  for (const auto& v : p.c) ic.push_back(mpz_class(v * Rat(den_lcm)));
  auto d0 = divisors(ic.front());
  auto dl = divisors(ic.back());
  if (!d0 || !dl) return std::nullopt;
  for (const mpz_class& num : *d0) {
    for (const mpz_class& den : *dl) {
      for (int sign : {1, -1}) {
        Rat cand(sign * num, den);
        cand.canonicalize();
        while (p.degree() >= 1 && sgn(p.eval(cand)) == 0) {
          roots.push_back(cand);
          deflate(p, cand);
        }
      }
    }
    if (p.degree() < 1) break;
  }
  return roots;
}

// Roots of a monic quadratic x^2 + px + q over the quadratic closure.
std::optional<std::vector<QuadraticValue>> quadratic_roots(const Rat& p, const Rat& q) {
  Rat disc = p * p - 4 * q;
  Rat half = -p / 2;
  if (sgn(disc) == 0) return std::vector<QuadraticValue>{make_quadratic(half, 0, 0),
                                                         make_quadratic(half, 0, 0)};
  if (auto s = rat_sqrt_exact(abs(disc)); s && sgn(disc) > 0)
    return std::vector<QuadraticValue>{make_quadratic(half + *s / 2, 0, 0),
                                       make_quadratic(half - *s / 2, 0, 0)};
  // disc = P/Q, sqrt(disc) = sqrt(P*Q)/Q = s*sqrt(d)/Q
  mpz_class pq = disc.get_num() * disc.get_den();
  auto split = squarefree_split(pq);
  if (!split) return std::nullopt;
  auto [s, d] = *split;
  Rat b(s, 2 * disc.get_den());
  b.canonicalize();
  return std::vector<QuadraticValue>{make_quadratic(half, b, d), make_quadratic(half, -b, d)};
}

std::optional<std::vector<std::pair<QuadraticValue, int>>> factor_exact(const PolyQ& poly) {
  std::vector<std::pair<QuadraticValue, int>> out;
  auto push = [&out](const QuadraticValue& v, int mult) {
    for (auto& [w, k] : out)
      if (w == v) {
        k += mult;
        return;
      }
    out.emplace_back(v, mult);
  };
  std::vector<PolyQ> sf = squarefree_decomposition(poly);
  for (size_t idx = 0; idx < sf.size(); ++idx) {
    int mult = static_cast<int>(idx) + 1;
    PolyQ f = sf[idx].monic();
    if (f.degree() < 1) continue;
    if (f.degree() >= 3) {
      auto roots = extract_rational_roots(f);
      if (!roots) return std::nullopt;
      for (const Rat& r : *roots) push(make_quadratic(r, 0, 0), mult);
    } else {
      while (f.degree() >= 1 && sgn(f.c[0]) == 0) {
        push(make_quadratic(0, 0, 0), mult);
        f.c.erase(f.c.begin());
      }
    }
    if (f.degree() == 1) {
      push(make_quadratic(-f.c[0] / f.c[1], 0, 0), mult);
    } else if (f.degree() == 2) {
      f = f.monic();
      auto roots = quadratic_roots(f.c[1], f.c[0]);
      if (!roots) return std::nullopt;
      for (const auto& r : *roots) push(r, mult);
    } else if (f.degree() >= 3) {
      return std::nullopt;  // leftover factor without rational roots
    }
  }
  return out;
}

bool quad_less(const QuadraticValue& x, const QuadraticValue& y) {
  if (x.d != y.d) return x.d < y.d;
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

}  // namespace

Spectrum spectrum(const MatQ& a) {
  a.require_square("spectrum");
  Spectrum sp;
  if (is_triangular(a)) {
    std::map<Rat, int> diag;
    for (int i = 0; i < a.rows(); ++i) diag[a(i, i)]++;
    sp.exact = true;
    for (const auto& [v, k] : diag) sp.values.emplace_back(make_quadratic(v, 0, 0), k);
    return sp;
  }
  auto factored = factor_exact(charpoly(a));
  if (factored) {
    sp.exact = true;
    sp.values = std::move(*factored);
    std::sort(sp.values.begin(), sp.values.end(),
              [](const auto& x, const auto& y) { return quad_less(x.first, y.first); });
    return sp;
  }
  return spectrum(to_double(a));
}

Spectrum spectrum(const MatD& a) {
  a.require_square("spectrum");
  Spectrum sp;
  sp.exact = false;
  sp.approx = eigenvalues_float(a);
  sp.backward_error =
      a.rows() * std::numeric_limits<double>::epsilon() * std::max(1.0, a.norm_inf());
  return sp;
}

std::optional<ChainWitness> eigenvalue_chain(const MatQ& a, const Rat& step, int length) {
  if (length < 1) throw std::invalid_argument("eigenvalue_chain: length must be positive");
  Spectrum sp = spectrum(a);
  if (!sp.exact) return eigenvalue_chain(to_double(a), step.get_d(), length);
  auto present = [&sp](const QuadraticValue& v) {
    for (const auto& [w, k] : sp.values)
      if (w == v) return true;
    return false;
  };
  for (const auto& [v, mult] : sp.values) {
    bool ok = true;
    for (int k = 1; k < length && ok; ++k)
      ok = present(make_quadratic(v.a + Rat(k) * step, v.b, v.d));
    if (ok) return ChainWitness{true, v, v.to_complex()};
  }
  return std::nullopt;
}

std::optional<ChainWitness> eigenvalue_chain(const MatD& a, double step, int length,
                                             Tolerance tol) {
  if (length < 1) throw std::invalid_argument("eigenvalue_chain: length must be positive");
  auto eig = eigenvalues_float(a);
  double scale = 1.0;
  for (const auto& z : eig) scale = std::max(scale, std::abs(z));
  auto present = [&](std::complex<double> z) {
    for (const auto& w : eig)
      if (std::abs(w - z) <= std::max(tol.abs, tol.rel * scale)) return true;
    return false;
  };
  for (const auto& z : eig) {
    bool ok = true;
    for (int k = 1; k < length && ok; ++k) ok = present(z + std::complex<double>(k * step, 0));
    if (ok) return ChainWitness{false, {}, z};
  }
  return std::nullopt;
}

}  // namespace lieclass
