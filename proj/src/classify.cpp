#include "lieclass/classify.hpp"

namespace lieclass {

namespace {

bool in_span_of(const std::vector<MatQ>& basis, const MatQ& x) {
  std::vector<std::vector<Rat>> vecs;
  for (const auto& b : basis) vecs.push_back(vec_colstack(b));
  return coordinates_in(vecs, vec_colstack(x)).has_value();
}

/// Only the zero triple may solve k1 K = 0, k2 K + 2 k1 C0 = 0,
/// k3 K + 4 k2 C0 = 0 (the power split of the extra-symmetry equation).
bool xi_splitting_trivial(const MatQ& k, const MatQ& c0) {
  const int m = k.rows();
  MatQ sys(3 * m * m, 3);
  int row = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j, ++row) sys(row, 0) = k(i, j);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j, ++row) {
      sys(row, 0) = 2 * c0(i, j);
      sys(row, 1) = k(i, j);
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j, ++row) {
      sys(row, 1) = 4 * c0(i, j);
      sys(row, 2) = k(i, j);
    }
  return null_space(sys).empty();
}

/// K must be alpha * B for some scalar alpha (alpha = 0 allowed).
bool multiple_of(const MatQ& k, const MatQ& b) {
  if (k.is_zero()) return true;
  // find the first nonzero entry of b to fix alpha
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      if (sgn(b(i, j)) != 0) {
        Rat alpha = k(i, j) / b(i, j);
        return (k - b * alpha).is_zero();
      }
  return false;
}

}  // namespace

XaCheckResult<Rat> check_xa_cases(const MFunQ& cfn, const LieAlgebraQ& alg, Tolerance tol) {
  const int m = alg.m;
  XaCheckResult<Rat> out;
  LieAlgebraQ closed_alg = alg;
  if (!closed_alg.closure_computed) closed_alg = verify_closure(closed_alg);
  OptimalCase<Rat> match = match_optimal_case(closed_alg, tol);
  if (match.pure_count == 0)
    throw std::invalid_argument("check_xa_cases: no pure matrix-part generator in the algebra");
  if (m % 2 != 0)
    throw OddDimensionContradiction(
        "pure matrix-part generator admitted with an odd number of equations");

  // normalize one pure matrix toward the block rotation
  RotationNormalization<Rat> rot;
  size_t rot_index = 0;
  for (size_t i = 0; i < match.pure_part.size(); ++i) {
    rot = normalize_rotation(match.pure_part[i].A);
    if (rot.ok) {
      rot_index = i;
      break;
    }
  }
  out.checks.record("pure_part_is_rotation_pair", rot.ok);
  if (!rot.ok) {
    out.note = "pure matrix part not a rotation pair: " + rot.note;
    return out;
  }
  if (!rot.exact_bd1) {
    out.note = rot.note;
    // scaled form: conditions that survive without the conjugation
    MatQ a = match.pure_part[rot_index].A;
    auto poly = cfn.as_polynomial();
    if (poly) {
      bool commutes = true;
      for (const auto& c : *poly) commutes = commutes && commutator(c, a).is_zero();
      out.checks.record("C_commutes_pure_part", commutes);
    }
    return out;
  }

  out.normalized_to_bd1 = true;
  out.conjugator = rot.conjugator;
  const MatQ& p = rot.conjugator;
  const MatQ& pinv = rot.conjugator_inv;
  MatQ bd = build_bd1<Rat>(m / 2);

  auto conj = [&](const MatQ& x) { return p * x * pinv; };

  // transformed coefficient list of C
  auto poly = cfn.as_polynomial();
  if (!poly)
    throw std::invalid_argument("check_xa_cases: exact path needs a polynomial expansion of C");
  std::vector<MatQ> chat;
  for (const auto& c : *poly) chat.push_back(conj(c));
  MatQ c0 = chat.front();

  bool blocks_ok = true;
  for (const auto& c : chat) blocks_ok = blocks_ok && is_block_form(c);
  out.checks.record("C_block_structure", blocks_ok);
  out.checks.record("C0_commutes_rotation", commutator(c0, bd).is_zero());

  // remaining pure directions must stay inside span{rotation, identity}
  for (size_t i = 0; i < match.pure_part.size(); ++i) {
    if (i == rot_index) continue;
    MatQ other = conj(match.pure_part[i].A);
    if (match.xi_part.empty() && match.pure_part.size() == 2) {
      // two pure directions: the partner is a second conjugated rotation
      auto rot2 = normalize_rotation(other);
      out.checks.record("second_pure_part_is_rotation_pair", rot2.ok);
      out.checks.record("second_pure_part_independent",
                        !in_span_of({bd, MatQ::identity(m)}, other));
      bool commutes = true;
      for (const auto& c : chat) commutes = commutes && commutator(c, other).is_zero();
      out.checks.record("C_commutes_second_pure_part", commutes);
    } else {
      out.checks.record("extra_pure_part_in_rotation_span",
                        in_span_of({bd, MatQ::identity(m)}, other));
    }
  }

  // xi-part conditions; xi generators carry their matrices through the
  // same conjugation
  const int xi_dim = static_cast<int>(match.xi_part.size());
  if (xi_dim >= 1 && !match.coords_normalized) {
    out.note = "xi-part not in representative position; bracket conditions skipped";
    return out;
  }
  if (xi_dim == 1) {
    MatQ a3 = conj(match.xi_part[0].A);
    out.checks.record("A3_commutes_rotation", commutator(a3, bd).is_zero());
    out.checks.record("A3_block_structure", is_block_form(a3));
    MatQ k = a3 * c0 - c0 * a3;
    out.checks.record("A3_C0_noncommuting", !k.is_zero());
    out.checks.record("xi_splitting_trivial", xi_splitting_trivial(k, c0));
  } else if (xi_dim == 2) {
    MatQ a2 = conj(match.xi_part[0].A);
    MatQ a3 = conj(match.xi_part[1].A);
    out.checks.record("A2_commutes_rotation", commutator(a2, bd).is_zero());
    out.checks.record("A3_commutes_rotation", commutator(a3, bd).is_zero());
    MatQ e2 = MatQ::identity(m) * Rat(2);
    out.checks.record("A3_shift_intertwine_mod_rotation",
                      multiple_of(a3 * (a2 + e2) - a2 * a3, bd));
    MatQ e4 = MatQ::identity(m) * Rat(4);
    out.checks.record("A2_intertwines_C0_shift4", (a2 * c0 - c0 * (a2 + e4)).is_zero());
    out.checks.record("trace_C0_zero", sgn(c0.trace()) == 0);
    MatQ k = a3 * c0 - c0 * a3;
    out.checks.record("A3_C0_noncommuting", !k.is_zero());
    out.checks.record("xi_splitting_trivial", xi_splitting_trivial(k, c0));
  } else if (xi_dim == 3) {
    MatQ a1 = conj(match.xi_part[0].A);
    MatQ a2 = conj(match.xi_part[1].A);
    MatQ a3 = conj(match.xi_part[2].A);
    out.checks.record("A1_commutes_rotation", commutator(a1, bd).is_zero());
    out.checks.record("A2_commutes_rotation", commutator(a2, bd).is_zero());
    out.checks.record("A3_commutes_rotation", commutator(a3, bd).is_zero());
    MatQ e2 = MatQ::identity(m) * Rat(2);
    out.checks.record("A1_A2_bracket_mod_rotation",
                      multiple_of(a1 * a2 - (a2 + e2) * a1, bd));
    out.checks.record("A1_A3_bracket_mod_rotation",
                      multiple_of(commutator(a1, a3) - a2, bd));
    out.checks.record("A2_A3_bracket_mod_rotation",
                      multiple_of(commutator(a2, a3) - a3 * Rat(2), bd));
    MatQ e4 = MatQ::identity(m) * Rat(4);
    out.checks.record("A2_intertwines_C0_shift4", (a2 * c0 - c0 * (a2 + e4)).is_zero());
    out.checks.record("C0_commutes_A1", commutator(c0, a1).is_zero());
    out.checks.record("trace_C0_zero", sgn(c0.trace()) == 0);
    MatQ k = a3 * c0 - c0 * a3;
    out.checks.record("A3_C0_noncommuting", !k.is_zero());
    out.checks.record("xi_splitting_trivial", xi_splitting_trivial(k, c0));
  }
  return out;
}

}  // namespace lieclass
