#include <iostream>

#include <CLI11.hpp>

#include "symframe/cli.hpp"

namespace cli = symframe::cli;

int main(int argc, char** argv) {
  CLI::App app{"symframe: symmetric interpolatory masks and dual wavelet filter banks"};
  app.require_subcommand(1);

  std::string format = "table";
  int n_max = symframe::kDefaultOrderCap;
  const auto add_format = [&](CLI::App* sub, std::initializer_list<const char*> allowed) {
    sub->add_option("--format", format, "output format")->check(CLI::IsMember(std::vector<std::string>(allowed.begin(), allowed.end())));
  };

  cli::BuildOptions build;
  auto* b = app.add_subcommand("build", "construct m0, its dual and a filter bank from a config file");
  b->add_option("--config", build.config, "TOML build configuration")->required()->check(CLI::ExistingFile);
  b->add_option("--out-dir", build.out_dir, "output directory (overrides output.dir)");
  b->add_option("--n-max", n_max, "cap for order searches")->check(CLI::PositiveNumber);
  add_format(b, {"table", "json"});

  cli::VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "run exact checks on masks or filter banks");
  v->add_option("files", verify.files, "mask or bank files (JSON, or dense tables with --dilation)")
      ->required()
      ->check(CLI::ExistingFile);
  v->add_option("--dual-of", verify.dual_of, "primal mask the files are checked against for duality")
      ->check(CLI::ExistingFile);
  v->add_option("--dilation", verify.dilation, "dilation matrix for dense tables, e.g. [[2,-1],[1,1]]");
  v->add_option("--group", verify.group, "symmetry group name (trivial, id, axis, full, hexagonal)");
  v->add_option("--checks", verify.checks, "comma separated checks, e.g. interpolatory,sum_rule:3,vm:2");
  v->add_option("--n-max", n_max, "cap for order searches")->check(CLI::PositiveNumber);
  add_format(v, {"table", "json"});

  cli::TransformOptions transform;
  auto* t = app.add_subcommand("transform", "analyze and resynthesize a periodic signal");
  t->add_option("--bank", transform.bank, "filter bank JSON")->required()->check(CLI::ExistingFile);
  t->add_option("--signal", transform.signal, "SWSG signal file")->check(CLI::ExistingFile);
  t->add_option("--random", transform.random_levels, "use a random signal on Z^d / M^J Z^d with this J");
  t->add_option("--seed", transform.seed, "seed for --random");
  t->add_option("--levels", transform.levels, "decomposition levels")->check(CLI::PositiveNumber);
  t->add_option("--out-dir", transform.out_dir, "write pyramid.json and reconstruction.swsg here");
  t->add_option("--tolerance", transform.tolerance, "largest accepted reconstruction error");

  cli::RenderOptions render;
  auto* r = app.add_subcommand("render", "sample the refinable function by subdivision");
  r->add_option("mask", render.mask, "refinable mask (JSON, or dense table with --dilation)")
      ->required()
      ->check(CLI::ExistingFile);
  r->add_option("--dilation", render.dilation, "dilation matrix for dense tables");
  r->add_option("--levels", render.levels, "subdivision iterations J")->check(CLI::PositiveNumber);
  r->add_option("--output,-o", render.output, "CSV file (stdout when omitted)");
  add_format(r, {"csv"});

  cli::ExportOptions exp;
  auto* e = app.add_subcommand("export", "print a mask or bank as dense tables, JSON or CSV");
  e->add_option("file", exp.file, "mask or bank file")->required()->check(CLI::ExistingFile);
  e->add_option("--dilation", exp.dilation, "dilation matrix for dense tables");
  add_format(e, {"table", "json", "csv"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? cli::exit_ok : cli::exit_usage;
  }

  const auto fmt = cli::parse_format(format);
  if (*b) {
    build.n_max = n_max;
    build.format = fmt;
    return cli::cmd_build(build, std::cout, std::cerr);
  }
  if (*v) {
    verify.n_max = n_max;
    verify.format = fmt;
    return cli::cmd_verify(verify, std::cout, std::cerr);
  }
  if (*t) return cli::cmd_transform(transform, std::cout, std::cerr);
  if (*r) return cli::cmd_render(render, std::cout, std::cerr);
  exp.format = fmt;
  return cli::cmd_export(exp, std::cout, std::cerr);
}
