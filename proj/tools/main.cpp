#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "casimir/errors.hpp"
#include "commands.hpp"

namespace {

void add_common(CLI::App* sub, casimir::cli::Options& o) {
  sub->add_option("--config", o.config_path, "YAML run configuration");
  sub->add_option("--materials-file", o.materials_file, "material parameter file (overrides CASIMIR_MATERIALS)");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", o.out, "write to FILE instead of stdout");
  sub->add_option("--jobs", o.jobs, "concurrent evaluations (default: available cores)");
  sub->add_option("--lmax", o.lmax, "multipole cutoff");
  sub->add_option("--xi-points", o.xi_points, "frequency quadrature nodes");
  sub->add_option("--k-points", o.k_points, "wavevector quadrature nodes");
  sub->add_option("--pfa", o.pfa, "sphere PFA normalization: r-scaled or caption");
  sub->add_option("--d", o.separations, "separation grid lo:hi:n in nm (log spaced)");
  sub->add_flag("--swap", o.swap, "exchange the two solid materials");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir forces, equilibria and suspension designs for bodies in a fluid"};
  app.require_subcommand(1);
  casimir::cli::Options o;
  std::string materials_list;

  auto* eps = app.add_subcommand("eps", "permittivity on the imaginary axis");
  eps->add_option("--materials", materials_list, "comma-separated material names");
  eps->add_option("--xi", o.xi, "frequency grid lo:hi:n in 2pi c/um (log spaced)");
  eps->add_flag("--crossings", o.crossings, "report permittivity crossings for every pair");
  add_common(eps, o);

  for (const char* name : {"force", "equilibria", "fold"}) add_common(app.add_subcommand(name, ""), o);
  app.get_subcommand("force")->description("force or pressure against separation");
  app.get_subcommand("equilibria")->description("zero crossings of the force with stability");
  app.get_subcommand("fold")->description("critical parameter where a stable/unstable pair vanishes");

  auto* scan = app.add_subcommand("scan", "equilibria against radius or thickness");
  scan->add_option("--grid", o.grid, "parameter grid lo:hi:n (nm, or raw for mu)");
  add_common(scan, o);
  auto* suspend = app.add_subcommand("suspend", "suspension heights above a slab");
  suspend->add_option("--grid", o.grid, "radius grid lo:hi:n in nm");
  add_common(suspend, o);
  auto* pair = app.add_subcommand("pair", "radii of two materials suspended at the same height");
  pair->add_option("--mode", o.mode, "match_h or match_L");
  pair->add_option("--target", o.target_nm, "target height in nm");
  add_common(pair, o);
  add_common(app.add_subcommand("dicluster", "two-sphere stable gap for paired radii"), o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  o.command = app.get_subcommands().front()->get_name();
  if (!materials_list.empty()) {
    std::string item;
    std::istringstream is(materials_list);
    while (std::getline(is, item, ','))
      if (!item.empty()) o.materials.push_back(item);
  }

  try {
    auto ctx = casimir::cli::make_context(o);
    auto tables = casimir::cli::run_command(ctx, o);
    std::string text = casimir::cli::render(ctx, o, tables);
    std::optional<std::string> out = o.out ? o.out : ctx.cfg.out;
    if (out) {
      std::ofstream f(*out, std::ios::binary);
      if (!f) throw casimir::ConfigError("cannot write '" + *out + "'");
      f << text;
    } else {
      std::cout << text;
    }
  } catch (const casimir::ConfigError& e) {
    std::cerr << "casimir: " << e.what() << "\n";
    return 1;
  } catch (const casimir::NumericalError& e) {
    std::cerr << "casimir: numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "casimir: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
