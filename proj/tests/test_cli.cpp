#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lieclass/cli.hpp"

using namespace lieclass;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("lieclass_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const Json& content) {
    fs::path p = path / name;
    std::ofstream out(p);
    out << content.dump(2);
    return p.string();
  }
  std::string raw_file(const std::string& name, const std::string& content) {
    fs::path p = path / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }
};

Json block_system() {
  Json j;
  j["schema"] = kSchemaVersion;
  j["m"] = 4;
  j["C"] = {
      {"type", "conj_exp"},
      {"A", Json::array({Json::array({"0", "0", "0", "-1"}), Json::array({"0", "0", "1", "0"}),
                         Json::array({"0", "0", "0", "0"}), Json::array({"0", "0", "0", "0"})})},
      {"C0",
       Json::array({Json::array({"-6", "2", "3", "5"}), Json::array({"-2", "-6", "-5", "3"}),
                    Json::array({"7", "11", "6", "17"}), Json::array({"-11", "7", "-17", "6"})})}};
  j["trace_normalized"] = true;
  j["interval"] = Json::array({-1.0, 1.0});
  return j;
}

}  // namespace

TEST_CASE("cmd_classify writes a deterministic report") {
  TempDir tmp;
  RunConfig cfg;
  cfg.input_path = tmp.file("sys.json", block_system());
  cfg.output_path = (tmp.path / "report.json").string();
  REQUIRE(cmd_classify(cfg) == 0);

  std::ifstream in(cfg.output_path);
  Json rep = Json::parse(in);
  CHECK(rep["theorem_case"] == "xa2");
  CHECK(rep["algebra"]["dim"] == 2);
  CHECK(rep.contains("config"));

  // byte-identical on a second run
  std::ifstream a(cfg.output_path);
  std::string first((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  cfg.output_path = (tmp.path / "report2.json").string();
  REQUIRE(cmd_classify(cfg) == 0);
  std::ifstream b(cfg.output_path);
  std::string second((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(first == second);
}

TEST_CASE("cmd_classify: malformed input exits nonzero with a schema message") {
  TempDir tmp;
  RunConfig cfg;
  cfg.input_path = tmp.raw_file("bad.json", "{\"m\": 2, \"C\": {\"type\":");
  cfg.output_path = (tmp.path / "report.json").string();
  CHECK(cmd_classify(cfg) != 0);

  Json missing;
  missing["m"] = 2;
  cfg.input_path = tmp.file("missing.json", missing);
  CHECK(cmd_classify(cfg) == 1);
}

TEST_CASE("cmd_classify: float mode normalizes the trace first") {
  TempDir tmp;
  Json j;
  j["m"] = 2;
  j["C"] = {{"type", "polynomial"},
            {"coeffs", Json::array({Json::array({Json::array({1.0, 0.5}),
                                                 Json::array({0.25, 1.0})})})}};
  j["interval"] = Json::array({-1.0, 1.0});
  RunConfig cfg;
  cfg.mode = "float";
  cfg.input_path = tmp.file("sys.json", j);
  cfg.output_path = (tmp.path / "report.json").string();
  REQUIRE(cmd_classify(cfg) == 0);
  std::ifstream in(cfg.output_path);
  Json rep = Json::parse(in);
  CHECK(rep["constant_equivalent"] == true);
}

TEST_CASE("cmd_construct writes a verified fixture pair") {
  TempDir tmp;
  Json spec;
  spec["case"] = "a";
  spec["m"] = 3;
  spec["matrices"] = {
      {"A", Json::array({Json::array({"0", "0", "0"}), Json::array({"1", "0", "0"}),
                         Json::array({"2", "3", "0"})})},
      {"C0", Json::array({Json::array({"1", "2", "0"}), Json::array({"0", "3", "5"}),
                          Json::array({"1", "1", "-4"})})}};
  RunConfig cfg;
  cfg.input_path = tmp.file("case_a.json", spec);
  cfg.corpus_dir = (tmp.path / "corpus").string();
  REQUIRE(cmd_construct(cfg) == 0);
  CHECK(fs::exists(tmp.path / "corpus" / "case_a.system.json"));
  CHECK(fs::exists(tmp.path / "corpus" / "case_a.expected.json"));

  // replay: classifying the written system reproduces the expected report
  RunConfig replay;
  replay.input_path = (tmp.path / "corpus" / "case_a.system.json").string();
  replay.output_path = (tmp.path / "replayed.json").string();
  REQUIRE(cmd_classify(replay) == 0);
  std::ifstream exp_in(tmp.path / "corpus" / "case_a.expected.json");
  std::ifstream got_in(replay.output_path);
  Json expected = Json::parse(exp_in);
  Json got = Json::parse(got_in);
  expected.erase("config");
  got.erase("config");
  CHECK(expected == got);
}

TEST_CASE("cmd_construct rejections carry the violated condition") {
  TempDir tmp;
  Json spec;
  spec["case"] = "b";
  spec["m"] = 3;
  spec["matrices"] = {
      {"A2", Json::array({Json::array({"0", "0", "0"}), Json::array({"0", "2", "0"}),
                          Json::array({"0", "0", "4"})})},
      {"A3", Json::array({Json::array({"0", "0", "0"}), Json::array({"1", "0", "0"}),
                          Json::array({"0", "1", "0"})})},
      {"C0", Json::array({Json::array({"0", "0", "0"}), Json::array({"0", "0", "0"}),
                          Json::array({"1", "0", "0"})})}};
  RunConfig cfg;
  cfg.input_path = tmp.file("case_b.json", spec);
  cfg.corpus_dir = (tmp.path / "corpus").string();
  CHECK(cmd_construct(cfg) == 2);

  Json odd = spec;
  odd["case"] = "xa2";
  odd["m"] = 3;
  cfg.input_path = tmp.file("case_xa_odd.json", odd);
  CHECK(cmd_construct(cfg) == 2);
}

TEST_CASE("cmd_verify reports residuals and the integration oracle") {
  TempDir tmp;
  Json input;
  input["system"] = block_system();
  Json good;
  good["k"] = Json::array({"0", "0", "1"});
  good["A"] = block_system()["C"]["A"];
  Json bad = good;
  bad["A"][0][0] = "1";  // perturb one entry
  input["generators"] = Json::array({good, bad});

  RunConfig cfg;
  cfg.input_path = tmp.file("verify.json", input);
  cfg.output_path = (tmp.path / "table.json").string();
  cfg.oracle = true;
  cfg.grid = 25;
  REQUIRE(cmd_verify(cfg) == 0);
  std::ifstream in(cfg.output_path);
  Json out = Json::parse(in);
  REQUIRE(out["residuals"].size() == 2);
  CHECK(out["residuals"][0]["max_residual"].get<double>() == 0.0);
  CHECK(out["residuals"][1]["max_residual"].get<double>() > 0.1);
  CHECK(out["oracle_max_deviation"].get<double>() < 1e-8);
}

TEST_CASE("cmd_transform runs the normalization chain on a raw system") {
  TempDir tmp;
  Json j;
  j["m"] = 2;
  j["B"] = {{"type", "polynomial"},
            {"coeffs", Json::array({Json::array({Json::array({0.4, 0.0}),
                                                 Json::array({0.0, -0.2})})})}};
  j["C"] = {{"type", "polynomial"},
            {"coeffs", Json::array({Json::array({Json::array({1.0, 1.0}),
                                                 Json::array({0.5, -1.0})})})}};
  j["f"] = Json::array({Json::array({1.0}), Json::array({0.0, 2.0})});
  j["interval"] = Json::array({-1.0, 1.0});
  RunConfig cfg;
  cfg.mode = "float";
  cfg.input_path = tmp.file("raw.json", j);
  cfg.output_path = (tmp.path / "canon.json").string();
  REQUIRE(cmd_transform(cfg) == 0);
  std::ifstream in(cfg.output_path);
  Json out = Json::parse(in);
  CHECK(out["trace_normalized"] == true);
  CanonicalSystemD sys = canonical_d_from_json(out);
  for (double x : chebyshev_grid(sys.domain, 21))
    CHECK(std::fabs(sys.Cfn.value(x).trace()) < 1e-8);
}

TEST_CASE("cmd_solve: matrix-equation utilities") {
  TempDir tmp;
  Json sylv;
  sylv["op"] = "sylvester";
  sylv["A"] = Json::array({Json::array({"0", "0", "0"}), Json::array({"0", "2", "0"}),
                           Json::array({"0", "0", "4"})});
  sylv["B"] = Json::array({Json::array({"2", "0", "0"}), Json::array({"0", "4", "0"}),
                           Json::array({"0", "0", "6"})});
  sylv["Q"] = Json::array({Json::array({"0", "0", "0"}), Json::array({"0", "0", "0"}),
                           Json::array({"0", "0", "0"})});
  RunConfig cfg;
  cfg.input_path = tmp.file("sylv.json", sylv);
  cfg.output_path = (tmp.path / "sol.json").string();
  REQUIRE(cmd_solve(cfg) == 0);
  std::ifstream in(cfg.output_path);
  Json out = Json::parse(in);
  CHECK(out["feasible"] == true);
  CHECK(out["homogeneous"].size() == 2);

  Json comm;
  comm["op"] = "commutant";
  comm["A"] = Json::array({Json::array({"0", "1"}), Json::array({"-1", "0"})});
  cfg.input_path = tmp.file("comm.json", comm);
  cfg.output_path = (tmp.path / "comm_out.json").string();
  REQUIRE(cmd_solve(cfg) == 0);
  std::ifstream in2(cfg.output_path);
  Json out2 = Json::parse(in2);
  CHECK(out2["basis"].size() == 2);
}

TEST_CASE("corpus directory resolution honours the environment") {
  RunConfig cfg;
  cfg.corpus_dir = "explicit";
  CHECK(resolve_corpus_dir(cfg) == "explicit");
  cfg.corpus_dir.clear();
  setenv("LIECLASS_CORPUS", "/tmp/from_env", 1);
  CHECK(resolve_corpus_dir(cfg) == "/tmp/from_env");
  unsetenv("LIECLASS_CORPUS");
  CHECK(resolve_corpus_dir(cfg) == "corpus");
}
