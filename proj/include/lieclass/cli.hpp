#ifndef LIECLASS_CLI_HPP
#define LIECLASS_CLI_HPP

#include "lieclass/json_io.hpp"
#include "lieclass/transform.hpp"

namespace lieclass {

/// Options shared by every subcommand; each report embeds a copy.
struct RunConfig {
  std::string input_path;
  std::string output_path;  // empty: stdout only
  std::string mode = "exact";
  double tol_abs = 1e-9;
  double tol_rel = 1e-9;
  std::optional<Interval> interval;  // overrides the input's working interval
  int grid = 101;
  bool oracle = false;      // verify: also run the integration oracle
  std::string corpus_dir;   // construct: fixture directory override

  Tolerance tolerance() const { return {tol_abs, tol_rel}; }
  Json config_json() const;
};

// Exit codes: 0 completed (including "no symmetry"), 1 input/schema trouble,
// 2 numeric or domain failure.
int cmd_classify(const RunConfig& cfg);
int cmd_construct(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_transform(const RunConfig& cfg);
int cmd_solve(const RunConfig& cfg);

/// Fixture directory resolution: --out flag, then LIECLASS_CORPUS, then
/// ./corpus.
std::string resolve_corpus_dir(const RunConfig& cfg);

}  // namespace lieclass

#endif
