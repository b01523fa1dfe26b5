#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "accretive/commands.hpp"

namespace {

void add_common(CLI::App* sub, accretive::CommandOptions& o, std::vector<std::string>& params) {
  sub->add_option("--t", o.t_path, "Matrix file for T (trotter: the self-adjoint A)");
  sub->add_option("--a", o.a_path, "Matrix file for A (trotter: the accretive B)");
  sub->add_option("--family", o.family, "Instance family");
  sub->add_option("--dim", o.dim, "Dimension of generated instances");
  sub->add_option("--param", params, "Generator parameter K=V (repeatable)");
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_option("--tol", o.tol, "Eigenvalue tolerance");
  sub->add_option("--out", o.out, "Report path (stdout when omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for accretive perturbations and Trotter products"};
  app.set_version_flag("--version", std::string(accretive::kToolVersion));
  app.require_subcommand(1);

  accretive::CommandOptions o;
  std::vector<std::string> params;

  auto* verify = app.add_subcommand("verify", "Certify one operator pair");
  add_common(verify, o, params);
  verify->add_option("--t-grid", o.t_grid, "Shift grid: lo:hi:count or comma list");
  verify->add_option("--n-angles", o.n_angles, "Angles for sector measurement");

  auto* generate = app.add_subcommand("generate", "Write a seeded instance as Matrix Market files");
  add_common(generate, o, params);

  auto* trotter = app.add_subcommand("trotter", "Measure the Trotter product error");
  add_common(trotter, o, params);
  trotter->add_option("--t-grid", o.t_grid, "Times: lo:hi:count or comma list");
  trotter->add_option("--n-grid", o.n_grid, "Step counts, comma list");
  trotter->add_flag("--waiver", o.waiver, "Run even when the hypotheses fail");

  auto* sweep = app.add_subcommand("sweep", "Predicted versus measured sector over a b grid");
  add_common(sweep, o, params);
  sweep->add_option("--b-grid", o.b_grid, "lo:hi:count or comma list")->required();
  sweep->add_option("--t-grid", o.t_grid, "Shift grid for the checks");
  sweep->add_option("--n-angles", o.n_angles, "Angles for sector measurement");

  auto* nr = app.add_subcommand("nr-dump", "Numerical range boundary polylines");
  add_common(nr, o, params);
  nr->add_option("--n-angles", o.n_angles, "Number of support directions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "accretive_lab: " << e.what() << "\n";
    return 2;
  }

  for (const auto& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "accretive_lab: --param expects K=V, got '" << kv << "'\n";
      return 2;
    }
    try {
      o.params[kv.substr(0, eq)] = accretive::detail::parse_double_arg(kv.substr(eq + 1), "--param");
    } catch (const std::exception& e) {
      std::cerr << "accretive_lab: " << e.what() << "\n";
      return 2;
    }
  }

  const std::string name = app.get_subcommands().front()->get_name();
  return accretive::run_command(name, o);
}
