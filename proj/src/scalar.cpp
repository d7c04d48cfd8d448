#include "lieclass/scalar.hpp"

namespace lieclass {

Rat rat_parse(const std::string& text) {
  std::string s = text;
  // trim surrounding whitespace
  auto l = s.find_first_not_of(" \t");
  auto r = s.find_last_not_of(" \t");
  if (l == std::string::npos) throw std::invalid_argument("rat_parse: empty string");
  s = s.substr(l, r - l + 1);
  try {
    Rat v(s);
    v.canonicalize();
    return v;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("rat_parse: not a rational: '" + text + "'");
  }
}

std::string rat_str(const Rat& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_str();
}

std::optional<Rat> rat_sqrt_exact(const Rat& v) {
  if (sgn(v) < 0) return std::nullopt;
  const mpz_class& num = v.get_num();
  const mpz_class& den = v.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return Rat(rn, rd);
}

std::optional<std::pair<mpz_class, mpz_class>> squarefree_split(const mpz_class& n) {
  if (sgn(n) == 0) return std::make_pair(mpz_class(0), mpz_class(0));
  mpz_class rest = abs(n);
  mpz_class square_part = 1;
  mpz_class squarefree = sgn(n) < 0 ? mpz_class(-1) : mpz_class(1);

  // trial division; desk-scale inputs keep this cheap
  constexpr unsigned long kTrialBound = 1000000;
  for (unsigned long p = 2; p <= kTrialBound && rest > 1; p += (p == 2 ? 1 : 2)) {
    if (mpz_class(p) * p > rest) break;
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    for (unsigned i = 0; i + 1 < e; i += 2) square_part *= p;
    if (e % 2 == 1) squarefree *= p;
  }
  if (rest > 1) {
    // leftover cofactor: either prime, a perfect square, or unresolvable
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
      mpz_class r;
      mpz_sqrt(r.get_mpz_t(), rest.get_mpz_t());
      square_part *= r;
    } else if (mpz_probab_prime_p(rest.get_mpz_t(), 30)) {
      squarefree *= rest;
    } else {
      return std::nullopt;
    }
  }
  return std::make_pair(square_part, squarefree);
}

}  // namespace lieclass
