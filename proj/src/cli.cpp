#include "lieclass/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace lieclass {

namespace {

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return Json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

void emit(const RunConfig& cfg, const Json& payload, const std::string& text_summary) {
  if (!cfg.output_path.empty()) {
    write_text(cfg.output_path, payload.dump(2) + "\n");
    if (!text_summary.empty()) std::cout << text_summary;
  } else {
    std::cout << payload.dump(2) << "\n";
    if (!text_summary.empty()) std::cerr << text_summary;
  }
}

Interval effective_interval(const RunConfig& cfg, const Interval& from_input) {
  return cfg.interval ? *cfg.interval : from_input;
}

int fail(int code, const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return code;
}

}  // namespace

Json RunConfig::config_json() const {
  Json j;
  j["mode"] = mode;
  j["tol_abs"] = tol_abs;
  j["tol_rel"] = tol_rel;
  if (interval) j["interval"] = Json::array({interval->a, interval->b});
  j["grid"] = grid;
  return j;
}

std::string resolve_corpus_dir(const RunConfig& cfg) {
  if (!cfg.corpus_dir.empty()) return cfg.corpus_dir;
  if (const char* env = std::getenv("LIECLASS_CORPUS"); env && *env) return env;
  return "corpus";
}

int cmd_classify(const RunConfig& cfg) {
  Json input;
  try {
    input = load_json(cfg.input_path);
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }

  try {
    Json report;
    if (cfg.mode == "exact" && !json_is_raw_system(input)) {
      CanonicalSystemQ sys = canonical_q_from_json(input);
      sys.domain = effective_interval(cfg, sys.domain);
      report = report_to_json(classify_system(sys, cfg.tolerance()));
    } else {
      CanonicalSystemD canon{0, MFunD::constant(MatD::zero(1, 1)), false, {}};
      if (json_is_raw_system(input)) {
        RawSystemD raw = raw_system_from_json(input);
        raw.domain = effective_interval(cfg, raw.domain);
        raw = remove_inhomogeneity(raw).system;
        canon = remove_first_derivative(raw);
      } else {
        canon = canonical_d_from_json(input);
        canon.domain = effective_interval(cfg, canon.domain);
      }
      // the constant-coefficient diagnosis is easiest on the raw shape; the
      // trace change rescales C and would hide it
      bool const_before = constant_equivalent(canon.Cfn, canon.domain, cfg.tolerance());
      canon = trace_normalize(canon, cfg.tolerance()).system;
      auto rep = classify_system(canon, cfg.tolerance());
      if (const_before && !rep.constant_equivalent_flag) {
        rep.constant_equivalent_flag = true;
        rep.irreducibility.status = IrreducibilityVerdict<double>::Status::ConstantEquivalent;
        rep.notes.push_back("input was constant-equivalent before trace normalization");
      }
      report = report_to_json(rep);
    }
    report["config"] = cfg.config_json();
    emit(cfg, report, render_report_text(report));
    return 0;
  } catch (const SchemaError& e) {
    return fail(1, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(1, e.what());
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }
}

int cmd_construct(const RunConfig& cfg) {
  Json input;
  try {
    input = load_json(cfg.input_path);
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  try {
    CaseSpec spec = case_spec_from_json(input);
    BuildResult built = build_system(spec);
    std::string mismatch = verify_build(built);
    if (!mismatch.empty()) return fail(2, "round trip failed: " + mismatch);

    Json system_json = system_to_json(built.system);
    Json report_json = report_to_json(classify_system(built.system, cfg.tolerance()));
    report_json["config"] = cfg.config_json();

    std::filesystem::path dir = resolve_corpus_dir(cfg);
    std::filesystem::create_directories(dir);
    std::string stem = std::filesystem::path(cfg.input_path).stem().string();
    std::filesystem::path sys_path = dir / (stem + ".system.json");
    std::filesystem::path rep_path = dir / (stem + ".expected.json");
    write_text(sys_path.string(), system_json.dump(2) + "\n");
    write_text(rep_path.string(), report_json.dump(2) + "\n");
    std::cout << "fixture written: " << sys_path.string() << " and " << rep_path.string() << "\n";
    return 0;
  } catch (const SpecRejection& e) {
    return fail(2, e.what());
  } catch (const SchemaError& e) {
    return fail(1, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(1, e.what());
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }
}

int cmd_verify(const RunConfig& cfg) {
  Json input;
  try {
    input = load_json(cfg.input_path);
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  try {
    if (!input.contains("system")) throw SchemaError("/system", "missing");
    if (!input.contains("generators") || !input["generators"].is_array())
      throw SchemaError("/generators", "expected an array");

    Json out;
    out["schema"] = kSchemaVersion;
    Json table = Json::array();
    std::ostringstream text;

    if (cfg.mode == "exact") {
      CanonicalSystemQ sys = canonical_q_from_json(input["system"]);
      sys.domain = effective_interval(cfg, sys.domain);
      int idx = 0;
      for (const auto& gj : input["generators"]) {
        GeneratorQ g{rat_parse(gj["k"][0].get<std::string>()),
                     rat_parse(gj["k"][1].get<std::string>()),
                     rat_parse(gj["k"][2].get<std::string>()),
                     matq_from_json(gj["A"], "/generators/A")};
        double worst = 0;
        for (int j = 0; j < cfg.grid; ++j) {
          Rat x(2 * j + 1, 2 * cfg.grid);  // rational grid in (0, 1)
          worst = std::max(worst, residual(sys.Cfn, g, x).max_abs());
        }
        table.push_back(Json{{"generator", idx}, {"max_residual", worst}});
        text << "generator " << idx << ": max residual " << worst << "\n";
        ++idx;
      }
      if (cfg.oracle && sys.Cfn.kind() == MFunQ::Kind::ConjugatedExponential) {
        MatD a = to_double(sys.Cfn.exponent());
        MatD c0 = to_double(sys.Cfn.base());
        double dev = 0;
        for (double x : {0.5, 1.0, 1.5, 2.0}) {
          MatD direct = conj_exp(a, c0, x);
          MatD integrated = solve_matrix_ode([&](double) { return a; },
                                             [&](double) { return -a; }, c0, x);
          dev = std::max(dev, max_entry_distance(direct, integrated));
        }
        out["oracle_max_deviation"] = dev;
        text << "integration oracle deviation: " << dev << "\n";
      }
    } else {
      CanonicalSystemD sys = canonical_d_from_json(input["system"]);
      sys.domain = effective_interval(cfg, sys.domain);
      int idx = 0;
      for (const auto& gj : input["generators"]) {
        Generator<double> g{gj["k"][0].get<double>(), gj["k"][1].get<double>(),
                            gj["k"][2].get<double>(), matd_from_json(gj["A"], "/generators/A")};
        double worst = 0;
        for (double x : chebyshev_grid(sys.domain, cfg.grid))
          worst = std::max(worst, residual(sys.Cfn, g, x).max_abs());
        table.push_back(Json{{"generator", idx}, {"max_residual", worst}});
        text << "generator " << idx << ": max residual " << worst << "\n";
        ++idx;
      }
    }
    out["residuals"] = table;
    out["config"] = cfg.config_json();
    emit(cfg, out, text.str());
    return 0;
  } catch (const SchemaError& e) {
    return fail(1, e.what());
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }
}

int cmd_transform(const RunConfig& cfg) {
  Json input;
  try {
    input = load_json(cfg.input_path);
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  try {
    CanonicalSystemD canon{0, MFunD::constant(MatD::zero(1, 1)), false, {}};
    if (json_is_raw_system(input)) {
      RawSystemD raw = raw_system_from_json(input);
      raw.domain = effective_interval(cfg, raw.domain);
      raw = remove_inhomogeneity(raw).system;
      canon = remove_first_derivative(raw);
    } else {
      canon = canonical_d_from_json(input);
      canon.domain = effective_interval(cfg, canon.domain);
    }
    auto result = trace_normalize(canon, cfg.tolerance());
    Json out = system_to_json(result.system);
    out["config"] = cfg.config_json();
    emit(cfg, out, "");
    return 0;
  } catch (const SchemaError& e) {
    return fail(1, e.what());
  } catch (const DomainError& e) {
    return fail(2, e.what());
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }
}

int cmd_solve(const RunConfig& cfg) {
  Json input;
  try {
    input = load_json(cfg.input_path);
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  try {
    if (!input.contains("op")) throw SchemaError("/op", "missing (sylvester | commutant)");
    std::string op = input["op"].get<std::string>();
    Json out;
    out["schema"] = kSchemaVersion;
    out["op"] = op;
    if (op == "sylvester") {
      MatQ a = matq_from_json(input.at("A"), "/A");
      MatQ b = matq_from_json(input.at("B"), "/B");
      MatQ q = matq_from_json(input.at("Q"), "/Q");
      auto sol = solve_sylvester(a, b, q);
      out["feasible"] = sol.feasible();
      if (sol.feasible()) out["particular"] = matrix_to_json(*sol.particular);
      Json hom = Json::array();
      for (const auto& h : sol.homogeneous) hom.push_back(matrix_to_json(h));
      out["homogeneous"] = hom;
    } else if (op == "commutant") {
      MatQ a = matq_from_json(input.at("A"), "/A");
      Json basis = Json::array();
      for (const auto& b : commutant_basis(a)) basis.push_back(matrix_to_json(b));
      out["basis"] = basis;
    } else {
      throw SchemaError("/op", "unknown operation '" + op + "'");
    }
    out["config"] = cfg.config_json();
    emit(cfg, out, "");
    return 0;
  } catch (const Json::exception& e) {
    return fail(1, e.what());
  } catch (const SchemaError& e) {
    return fail(1, e.what());
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }
}

}  // namespace lieclass
