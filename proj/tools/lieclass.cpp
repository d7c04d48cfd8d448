#include <CLI11.hpp>

#include "lieclass/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lieclass: symmetry classification of linear second-order ODE systems y'' = C(x) y"};
  app.require_subcommand(1);

  lieclass::RunConfig cfg;
  std::pair<double, double> interval_flag{0, 0};
  bool interval_set = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input_path, "input JSON file")->required();
    sub->add_option("--out", cfg.output_path, "output path (default: stdout)");
    sub->add_option("--mode", cfg.mode, "scalar mode: exact | float")
        ->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--tol-abs", cfg.tol_abs, "absolute tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-rel", cfg.tol_rel, "relative tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--grid", cfg.grid, "sample grid size")->check(CLI::Range(8, 100000));
    sub->add_option_function<std::pair<double, double>>(
           "--interval",
           [&](const std::pair<double, double>& v) {
             interval_flag = v;
             interval_set = true;
           },
           "working interval a,b")
        ->delimiter(',');
  };

  CLI::App* classify = app.add_subcommand("classify", "normalize and classify a system");
  add_common(classify);
  CLI::App* construct = app.add_subcommand("construct", "build a fixture from a case spec");
  add_common(construct);
  CLI::App* verify = app.add_subcommand("verify", "residual table for candidate generators");
  add_common(verify);
  verify->add_flag("--oracle", cfg.oracle, "also compare against the integration oracle");
  CLI::App* transform = app.add_subcommand("transform", "run the normalization chain only");
  add_common(transform);
  CLI::App* solve = app.add_subcommand("solve", "matrix-equation utilities");
  add_common(solve);

  CLI11_PARSE(app, argc, argv);
  if (interval_set) cfg.interval = lieclass::Interval{interval_flag.first, interval_flag.second};

  if (app.got_subcommand(classify)) return lieclass::cmd_classify(cfg);
  if (app.got_subcommand(construct)) return lieclass::cmd_construct(cfg);
  if (app.got_subcommand(verify)) return lieclass::cmd_verify(cfg);
  if (app.got_subcommand(transform)) return lieclass::cmd_transform(cfg);
  if (app.got_subcommand(solve)) return lieclass::cmd_solve(cfg);
  return 1;
}
