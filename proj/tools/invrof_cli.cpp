#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "invrof/cli.hpp"

namespace {

using invrof::cli::GridSpec;
using invrof::cli::OutputFormat;
using invrof::cli::RunConfig;
using invrof::cli::Subcommand;

struct RawOptions {
  std::string grid;
  std::string format;
  double t = 0.0;
  double tol = 0.0;
  double s_max = 0.0;
  int nodes = 0;
  std::string input;
  std::string output;
};

void add_common(CLI::App* sub, RawOptions& raw) {
  sub->add_option("--out", raw.output, "Write the artifact to this path instead of stdout");
  sub->add_option("--format", raw.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--tol", raw.tol, "Tolerance override");
}

void add_family(CLI::App* sub, RunConfig& c, RawOptions& raw) {
  sub->add_option("--generator", c.generator, "Builder string or matrix file");
  sub->add_option("--alpha", c.alpha, "Order alpha");
  sub->add_option("--beta", c.beta, "Integration order beta");
  sub->add_option("--x", c.vector, "Comma-separated real vector (default: all ones)");
  sub->add_option("--t", raw.t, "Single time");
  sub->add_option("--grid", raw.grid, "t0:t1:n[:log]");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  RawOptions raw;
  CLI::App app{"Integrated fractional resolvent families and their inverse-generator transforms"};
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "Evaluate a special function at one point");
  eval->add_option("function", c.function, "ml, ml-derivative, wright, bessel or gamma")
      ->required();
  eval->add_option("--alpha", c.alpha);
  eval->add_option("--beta", c.beta);
  eval->add_option("--rho", c.rho);
  eval->add_option("--mu", c.mu);
  eval->add_option("--nu", c.nu);
  eval->add_option("--z", c.z_re, "Argument (real part)");
  eval->add_option("--z-im", c.z_im, "Argument (imaginary part)");
  eval->add_option("--order", c.derivative_order, "Derivative order for ml-derivative");
  add_common(eval, raw);

  auto* rof = app.add_subcommand("rof", "Sample R(t) x for a matrix generator");
  add_family(rof, c, raw);
  add_common(rof, raw);

  auto* inv = app.add_subcommand("inverse-rof", "Family of the inverse generator by a transform");
  add_family(inv, c, raw);
  inv->add_option("--gamma", c.gamma, "Target order");
  inv->add_option("--transform", c.transform, "bessel, wright or analytic");
  inv->add_option("--s-max", raw.s_max, "Truncation of the transform integral");
  inv->add_option("--nodes", raw.nodes, "Gauss-Legendre nodes per oscillation");
  add_common(inv, raw);

  auto* deint = app.add_subcommand("deintegrate", "Lower the integration order of a family");
  add_family(deint, c, raw);
  deint->add_option("--delta", c.delta, "Target integration order");
  add_common(deint, raw);

  auto* verify = app.add_subcommand("verify", "Run the verification corpus");
  verify->add_option("--suite", c.suite, "Suite name or all");
  verify->add_option("--workers", c.workers, "Concurrent checks (default: INVROF_WORKERS)");
  add_common(verify, raw);

  auto* decay = app.add_subcommand("decay-fit", "Fit the large-time decay slope of ||R(t)||");
  add_family(decay, c, raw);
  decay->add_option("--t-lo", c.t_lo);
  decay->add_option("--t-hi", c.t_hi);
  add_common(decay, raw);

  auto* solve = app.add_subcommand("solve", "Solve a fractional Cauchy problem from a JSON file");
  solve->add_option("--input", raw.input, "Problem file")->required();
  solve->add_option("--grid", raw.grid, "t0:t1:n overriding the problem grid");
  add_common(solve, raw);

  auto* fracint = app.add_subcommand("fracint", "Fractional integral of a CSV trajectory");
  auto* fracder = app.add_subcommand("fracder", "Caputo derivative of a CSV trajectory");
  for (auto* sub : {fracint, fracder}) {
    sub->add_option("--input", raw.input, "CSV with a t column")->required();
    sub->add_option("--order", c.order, "Order");
    add_common(sub, raw);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    c.command = invrof::cli::parse_subcommand(app.get_subcommands().front()->get_name());
    CLI::App* sub = app.get_subcommands().front();
    auto given = [&](const char* flag) { return sub->get_option_no_throw(flag) && sub->count(flag) > 0; };
    if (given("--t")) c.t = raw.t;
    if (given("--grid")) c.grid = GridSpec::parse(raw.grid);
    if (given("--tol")) c.tol = raw.tol;
    if (given("--s-max")) c.s_max = raw.s_max;
    if (given("--nodes")) c.nodes = raw.nodes;
    if (given("--input")) c.input = raw.input;
    if (given("--out")) c.output = raw.output;
    if (given("--format")) c.format = raw.format == "json" ? OutputFormat::json : OutputFormat::csv;
  } catch (const invrof::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }
  return invrof::cli::run(c, std::cout, std::cerr);
}
