#include "lieclass/json_io.hpp"

#include <sstream>

namespace lieclass {

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, size_t idx) {
  return path + "/" + std::to_string(idx);
}

Rat rat_entry_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return rat_parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(path, e.what());
    }
  }
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_number())
    throw SchemaError(path, "exact mode accepts integers or \"p/q\" strings, not floats");
  throw SchemaError(path, "expected a rational scalar");
}

double double_entry_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return rat_parse(j.get<std::string>()).get_d();
    } catch (const std::invalid_argument& e) {
      throw SchemaError(path, e.what());
    }
  }
  throw SchemaError(path, "expected a numeric scalar");
}

template <class S, class EntryParser>
Matrix<S> matrix_from_json_impl(const Json& j, const std::string& path, EntryParser parse) {
  if (!j.is_array() || j.empty()) throw SchemaError(path, "expected a non-empty array of rows");
  int rows = static_cast<int>(j.size());
  if (!j[0].is_array() || j[0].empty())
    throw SchemaError(child(path, size_t(0)), "expected a non-empty row array");
  int cols = static_cast<int>(j[0].size());
  Matrix<S> m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw SchemaError(child(path, size_t(i)), "ragged matrix rows");
    for (int c = 0; c < cols; ++c)
      m(i, c) = parse(row[c], child(child(path, size_t(i)), size_t(c)));
  }
  return m;
}

const char* status_name(IrreducibilityVerdict<Rat>::Status s) {
  using St = IrreducibilityVerdict<Rat>::Status;
  switch (s) {
    case St::Irreducible: return "irreducible";
    case St::ReducibleSubspace: return "reducible_subspace";
    case St::ConstantEquivalent: return "constant_equivalent";
    case St::Undetermined: return "undetermined";
  }
  return "undetermined";
}

template <class S>
Json report_to_json_impl(const ClassificationReport<S>& rep) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["m"] = rep.m;
  j["optimal_case"] = optimal_tag_name(rep.optimal.tag, rep.optimal.pure_count);
  j["theorem_case"] = rep.theorem_case;
  j["algebra"] = algebra_to_json(rep.algebra);
  Json irr;
  irr["status"] = status_name(static_cast<IrreducibilityVerdict<Rat>::Status>(
      static_cast<int>(rep.irreducibility.status)));
  irr["algebra_dim"] = rep.irreducibility.algebra_dim;
  if (!rep.irreducibility.witness.empty()) {
    Json w = Json::array();
    for (const auto& vec : rep.irreducibility.witness) {
      Json v = Json::array();
      for (const auto& e : vec) {
        if constexpr (scalar_traits<S>::is_exact)
          v.push_back(rat_str(e));
        else
          v.push_back(e);
      }
      w.push_back(v);
    }
    irr["witness"] = w;
  }
  if (!rep.irreducibility.note.empty()) irr["note"] = rep.irreducibility.note;
  j["irreducibility"] = irr;
  j["constant_equivalent"] = rep.constant_equivalent_flag;
  Json conds = Json::array();
  for (const auto& c : rep.conditions)
    conds.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"residual", c.residual}});
  j["conditions"] = conds;
  Json witnesses;
  if (!rep.optimal.xi_part.empty()) {
    Json arr = Json::array();
    for (const auto& g : rep.optimal.xi_part) arr.push_back(generator_to_json(g));
    witnesses["normalized_xi_generators"] = arr;
  }
  if (!rep.optimal.pure_part.empty()) {
    Json arr = Json::array();
    for (const auto& g : rep.optimal.pure_part) arr.push_back(generator_to_json(g));
    witnesses["pure_matrix_generators"] = arr;
  }
  if (!rep.optimal.steps.empty()) {
    Json arr = Json::array();
    for (const auto& s : rep.optimal.steps) {
      Json st;
      st["kind"] = s.kind;
      if constexpr (scalar_traits<S>::is_exact)
        st["param"] = rat_str(s.param);
      else
        st["param"] = s.param;
      arr.push_back(st);
    }
    witnesses["normalization_steps"] = arr;
  }
  j["witnesses"] = witnesses;
  if (!rep.notes.empty()) j["notes"] = rep.notes;
  if (rep.algebra.numerics.used) {
    j["numerics"] = Json{{"min_pivot", rep.algebra.numerics.min_pivot},
                         {"max_rejected", rep.algebra.numerics.max_rejected},
                         {"ambiguous", rep.algebra.numerics.ambiguous}};
  }
  return j;
}

}  // namespace

Json matrix_to_json(const MatQ& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(rat_str(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json matrix_to_json(const MatD& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

MatQ matq_from_json(const Json& j, const std::string& path) {
  return matrix_from_json_impl<Rat>(j, path, rat_entry_from_json);
}

MatD matd_from_json(const Json& j, const std::string& path) {
  return matrix_from_json_impl<double>(j, path, double_entry_from_json);
}

Json mfun_to_json(const MFunQ& f) {
  Json j;
  switch (f.kind()) {
    case MFunQ::Kind::Polynomial: {
      j["type"] = "polynomial";
      Json cs = Json::array();
      for (const auto& c : f.coeffs()) cs.push_back(matrix_to_json(c));
      j["coeffs"] = cs;
      break;
    }
    case MFunQ::Kind::ConjugatedExponential:
      j["type"] = "conj_exp";
      j["A"] = matrix_to_json(f.exponent());
      j["C0"] = matrix_to_json(f.base());
      break;
    default:
      throw std::logic_error("mfun_to_json: exact sampled functions do not exist");
  }
  return j;
}

Json mfun_to_json(const MFunD& f) {
  Json j;
  switch (f.kind()) {
    case MFunD::Kind::Polynomial: {
      j["type"] = "polynomial";
      Json cs = Json::array();
      for (const auto& c : f.coeffs()) cs.push_back(matrix_to_json(c));
      j["coeffs"] = cs;
      break;
    }
    case MFunD::Kind::ConjugatedExponential:
      j["type"] = "conj_exp";
      j["A"] = matrix_to_json(f.exponent());
      j["C0"] = matrix_to_json(f.base());
      break;
    case MFunD::Kind::Sampled: {
      j["type"] = "samples";
      j["xs"] = f.grid();
      Json vs = Json::array();
      for (double x : f.grid()) vs.push_back(matrix_to_json(f.value(x)));
      j["values"] = vs;
      break;
    }
  }
  return j;
}

namespace {

template <class MF, class MatParser>
MF mfun_from_json_impl(const Json& j, const std::string& path, MatParser parse_matrix,
                       bool allow_samples) {
  if (!j.is_object()) throw SchemaError(path, "expected a matrix-function object");
  if (!j.contains("type")) throw SchemaError(child(path, "type"), "missing");
  std::string type = j["type"].get<std::string>();
  if (type == "polynomial") {
    if (!j.contains("coeffs") || !j["coeffs"].is_array() || j["coeffs"].empty())
      throw SchemaError(child(path, "coeffs"), "expected a non-empty coefficient array");
    std::vector<decltype(parse_matrix(j, path))> cs;
    for (size_t i = 0; i < j["coeffs"].size(); ++i)
      cs.push_back(parse_matrix(j["coeffs"][i], child(child(path, "coeffs"), i)));
    return MF::polynomial(std::move(cs));
  }
  if (type == "conj_exp") {
    if (!j.contains("A")) throw SchemaError(child(path, "A"), "missing");
    if (!j.contains("C0")) throw SchemaError(child(path, "C0"), "missing");
    return MF::conjugated(parse_matrix(j["A"], child(path, "A")),
                          parse_matrix(j["C0"], child(path, "C0")));
  }
  if (type == "samples") {
    if (!allow_samples)
      throw SchemaError(path, "sampled matrix functions require float mode");
    if constexpr (std::is_same_v<MF, MFunD>) {
      if (!j.contains("xs") || !j.contains("values"))
        throw SchemaError(path, "samples need xs and values");
      std::vector<double> xs = j["xs"].get<std::vector<double>>();
      std::vector<MatD> vals;
      for (size_t i = 0; i < j["values"].size(); ++i)
        vals.push_back(matd_from_json(j["values"][i], child(child(path, "values"), i)));
      if (xs.size() != vals.size()) throw SchemaError(path, "xs and values length mismatch");
      return MF::sampled_data(std::move(xs), std::move(vals));
    }
  }
  throw SchemaError(child(path, "type"), "unknown matrix-function type '" + type + "'");
}

}  // namespace

MFunQ mfunq_from_json(const Json& j, const std::string& path) {
  return mfun_from_json_impl<MFunQ>(j, path, matq_from_json, false);
}

MFunD mfund_from_json(const Json& j, const std::string& path) {
  return mfun_from_json_impl<MFunD>(j, path, matd_from_json, true);
}

Json generator_to_json(const GeneratorQ& g) {
  Json j;
  j["k"] = Json::array({rat_str(g.k1), rat_str(g.k2), rat_str(g.k3)});
  j["A"] = matrix_to_json(g.A);
  return j;
}

Json generator_to_json(const Generator<double>& g) {
  Json j;
  j["k"] = Json::array({g.k1, g.k2, g.k3});
  j["A"] = matrix_to_json(g.A);
  return j;
}

namespace {

template <class S>
Json algebra_to_json_impl(const LieAlgebra<S>& alg) {
  Json j;
  j["dim"] = alg.dim();
  Json basis = Json::array();
  for (const auto& g : alg.basis) basis.push_back(generator_to_json(g));
  j["basis"] = basis;
  j["closed"] = alg.closed;
  if (alg.closure_computed && alg.dim() > 0) {
    Json sc = Json::array();
    for (int i = 0; i < alg.dim(); ++i) {
      Json row = Json::array();
      for (int jj = 0; jj < alg.dim(); ++jj) {
        Json cell = Json::array();
        for (int k = 0; k < alg.dim(); ++k) {
          if constexpr (scalar_traits<S>::is_exact)
            cell.push_back(rat_str(alg.structure[i][jj][k]));
          else
            cell.push_back(alg.structure[i][jj][k]);
        }
        row.push_back(cell);
      }
      sc.push_back(row);
    }
    j["structure_constants"] = sc;
  }
  return j;
}

}  // namespace

Json algebra_to_json(const LieAlgebraQ& alg) { return algebra_to_json_impl(alg); }
Json algebra_to_json(const LieAlgebraD& alg) { return algebra_to_json_impl(alg); }

Json report_to_json(const ClassificationReport<Rat>& rep) { return report_to_json_impl(rep); }
Json report_to_json(const ClassificationReport<double>& rep) { return report_to_json_impl(rep); }

namespace {

template <class Sys>
Json system_to_json_impl(const Sys& sys) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["m"] = sys.m;
  j["C"] = mfun_to_json(sys.Cfn);
  j["trace_normalized"] = sys.trace_normalized;
  j["interval"] = Json::array({sys.domain.a, sys.domain.b});
  return j;
}

Interval interval_from_json(const Json& j) {
  Interval iv;
  if (j.contains("interval")) {
    if (!j["interval"].is_array() || j["interval"].size() != 2)
      throw SchemaError("/interval", "expected [a, b]");
    iv.a = j["interval"][0].get<double>();
    iv.b = j["interval"][1].get<double>();
    if (!(iv.a < iv.b)) throw SchemaError("/interval", "degenerate working interval");
  }
  return iv;
}

}  // namespace

Json system_to_json(const CanonicalSystemQ& sys) { return system_to_json_impl(sys); }
Json system_to_json(const CanonicalSystemD& sys) { return system_to_json_impl(sys); }

CanonicalSystemQ canonical_q_from_json(const Json& j) {
  if (!j.contains("m")) throw SchemaError("/m", "missing dimension");
  if (!j.contains("C")) throw SchemaError("/C", "missing coefficient function");
  CanonicalSystemQ sys{j["m"].get<int>(), mfunq_from_json(j["C"], "/C"),
                       j.value("trace_normalized", false), interval_from_json(j)};
  if (sys.Cfn.dim() != sys.m) throw SchemaError("/C", "dimension disagrees with m");
  return sys;
}

CanonicalSystemD canonical_d_from_json(const Json& j) {
  if (!j.contains("m")) throw SchemaError("/m", "missing dimension");
  if (!j.contains("C")) throw SchemaError("/C", "missing coefficient function");
  CanonicalSystemD sys{j["m"].get<int>(), mfund_from_json(j["C"], "/C"),
                       j.value("trace_normalized", false), interval_from_json(j)};
  if (sys.Cfn.dim() != sys.m) throw SchemaError("/C", "dimension disagrees with m");
  return sys;
}

bool json_is_raw_system(const Json& j) { return j.contains("B") || j.contains("f"); }

RawSystemD raw_system_from_json(const Json& j) {
  if (!j.contains("m")) throw SchemaError("/m", "missing dimension");
  if (!j.contains("C")) throw SchemaError("/C", "missing coefficient function");
  int m = j["m"].get<int>();
  MFunD cfn = mfund_from_json(j["C"], "/C");
  MFunD bfn = j.contains("B") ? mfund_from_json(j["B"], "/B")
                              : MFunD::constant(MatD::zero(m, m));
  std::vector<std::vector<double>> f(m, std::vector<double>{0.0});
  if (j.contains("f")) {
    if (!j["f"].is_array() || static_cast<int>(j["f"].size()) != m)
      throw SchemaError("/f", "expected one coefficient list per component");
    for (int i = 0; i < m; ++i) {
      if (!j["f"][i].is_array()) throw SchemaError(child("/f", size_t(i)), "expected an array");
      f[i] = j["f"][i].get<std::vector<double>>();
      if (f[i].empty()) f[i] = {0.0};
    }
  }
  RawSystemD sys{m, bfn, cfn, f, interval_from_json(j)};
  if (sys.Cfn.dim() != m || sys.Bfn.dim() != m)
    throw SchemaError("/", "matrix function dimension disagrees with m");
  return sys;
}

CaseSpec case_spec_from_json(const Json& j) {
  CaseSpec spec;
  if (!j.contains("case")) throw SchemaError("/case", "missing case tag");
  spec.tag = j["case"].get<std::string>();
  if (!j.contains("m")) throw SchemaError("/m", "missing dimension");
  spec.m = j["m"].get<int>();
  if (!j.contains("matrices") || !j["matrices"].is_object())
    throw SchemaError("/matrices", "expected an object of named matrices");
  for (const auto& [key, value] : j["matrices"].items())
    spec.matrices.emplace(key, matq_from_json(value, child("/matrices", key)));
  return spec;
}

std::string render_report_text(const Json& report) {
  std::ostringstream os;
  int m = report.value("m", 0);
  os << "classification report (m = " << m << ")\n";
  os << "  optimal case : " << report.value("optimal_case", std::string("?")) << "\n";
  os << "  theorem case : " << report.value("theorem_case", std::string("?")) << "\n";
  if (report.contains("algebra")) {
    const Json& alg = report["algebra"];
    os << "  algebra dim  : " << alg.value("dim", 0)
       << (alg.value("closed", false) ? " (closed)" : " (not closed)") << "\n";
    if (alg.contains("basis") && m <= 6) {
      int idx = 0;
      for (const auto& g : alg["basis"]) {
        os << "    generator " << idx++ << ": k = " << g["k"].dump() << ", A = " << g["A"].dump()
           << "\n";
      }
    } else if (alg.contains("basis")) {
      os << "    (" << alg["basis"].size() << " generators, matrices suppressed for m > 6)\n";
    }
  }
  if (report.contains("irreducibility")) {
    const Json& irr = report["irreducibility"];
    os << "  irreducibility: " << irr.value("status", std::string("?"))
       << " (generated algebra dim " << irr.value("algebra_dim", 0) << ")\n";
    if (irr.contains("witness")) os << "    invariant subspace: " << irr["witness"].dump() << "\n";
  }
  if (report.value("constant_equivalent", false))
    os << "  note: traceless part of C is constant\n";
  if (report.contains("conditions"))
    for (const auto& c : report["conditions"])
      os << "  condition " << c.value("name", std::string("?")) << ": "
         << (c.value("passed", false) ? "pass" : "FAIL") << "\n";
  if (report.contains("notes"))
    for (const auto& n : report["notes"]) os << "  note: " << n.get<std::string>() << "\n";
  if (report.contains("config")) os << "  config: " << report["config"].dump() << "\n";
  return os.str();
}

}  // namespace lieclass
