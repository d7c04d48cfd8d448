#ifndef LIECLASS_CONSTRUCT_HPP
#define LIECLASS_CONSTRUCT_HPP

#include "lieclass/classify.hpp"

namespace lieclass {

/// Thrown when a requested fixture violates one of its case conditions;
/// carries the name of the first violated condition.
struct SpecRejection : std::runtime_error {
  std::string condition;
  explicit SpecRejection(const std::string& cond)
      : std::runtime_error("case specification rejected: " + cond), condition(cond) {}
};

/// Input for build_system: a case tag plus the matrices the case needs.
/// Keys: "A" (case a / pure rotation direction), "A1", "A2", "A3", "C0".
struct CaseSpec {
  std::string tag;  // a | b | c | xa2 | xa3 | xa4
  int m = 0;
  std::map<std::string, MatQ> matrices;

  const MatQ& at(const std::string& key) const {
    auto it = matrices.find(key);
    if (it == matrices.end())
      throw std::invalid_argument("CaseSpec: missing matrix '" + key + "' for case " + tag);
    return it->second;
  }
  bool has(const std::string& key) const { return matrices.count(key) > 0; }
};

struct BuildResult {
  std::string tag;
  CanonicalSystemQ system;
  LieAlgebraQ expected;
};

/// Builds the canonical system realizing the case (the conjugated flow of the
/// supplied base matrix) after validating the case conditions; rejected specs
/// throw SpecRejection naming the violated condition.
BuildResult build_system(const CaseSpec& spec);

/// Round trip used before any fixture is written: classify the built system
/// and compare against the attached expectation. Returns an empty string on
/// success, a description of the mismatch otherwise.
std::string verify_build(const BuildResult& built);

// ---------------------------------------------------------------------------
// Worked reproductions
// ---------------------------------------------------------------------------

/// Degree-two expansion of the 4x4 rotation-block example, compared entry by
/// entry against the closed-form coefficient matrices.
struct BlockExampleReport {
  MatQ exponent;          // the nilpotent block matrix of the example
  MatQ base;              // instantiated base matrix C0
  std::vector<MatQ> computed;  // coefficients of the expansion, degree 0..2
  MatQ c1_expected, k_expected;
  int entry_matches = 0;  // out of 32
  bool ok = false;
};

/// Default instantiation of the eight free entries: 1,2,3,5,7,11,13,17.
BlockExampleReport reproduce_example_n2(
    std::optional<std::array<Rat, 8>> entries = std::nullopt);

/// Nonexistence of the two-dimensional case in three equations: the exact
/// solution spaces of the two intertwining equations and the failing
/// condition.
struct ChainExampleReport {
  MatQ a2;
  std::vector<MatQ> c0_basis;  // expected span{E31}
  std::vector<MatQ> a3_basis;  // expected span{E21, E32}
  std::string failing_condition;
  bool nonexistence = false;
};

ChainExampleReport reproduce_example_m3();

// ---------------------------------------------------------------------------
// Case-b search
// ---------------------------------------------------------------------------

struct SearchCaseBResult {
  enum class Outcome {
    NoEigenvalueChain,   // no lambda, lambda+2, lambda+4 ladder in A2
    TrivialC0Space,      // only C0 = 0 solves the first equation
    TrivialA3Space,      // only A3 = 0 solves the second equation
    CommutatorVanishes,  // A3 C0 = C0 A3 identically over both spaces
    ReducibleAll,        // a common invariant subspace eliminates every member
    Survivors            // parameterized families remain
  };
  Outcome outcome = Outcome::Survivors;
  std::vector<MatQ> c0_basis;  // traceless part of the first solution space
  std::vector<MatQ> a3_basis;
  std::vector<std::vector<Rat>> witness;  // invariant subspace for ReducibleAll
  std::vector<std::string> log;

  bool empty() const { return outcome != Outcome::Survivors; }
};

/// Exact elimination ladder for the two-dimensional case over a given A2:
/// solve both intertwining equations, then rule the family out through the
/// vanishing of the commutator pairing or a common invariant subspace.
SearchCaseBResult search_case_b(int m, const MatQ& a2);

/// The four shape candidates in four equations: one diagonal family with a
/// free parameter plus three fixed matrices with a Jordan block.
MatQ m4_candidate_diag(const Rat& a);
std::vector<std::pair<std::string, MatQ>> m4_fixed_candidates();

/// Parameter values that change the solution-space structure of the diagonal
/// family (entries whose difference with 0, 2 or 4 equals 2 or 4), plus one
/// generic representative; the pair structure is constant between them.
std::vector<Rat> m4_diag_parameter_split();

}  // namespace lieclass

#endif
