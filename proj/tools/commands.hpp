#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casimir/materials.hpp"
#include "config.hpp"
#include "table.hpp"

namespace casimir::cli {

struct Options {
  std::string command;
  std::optional<std::string> config_path;
  std::optional<std::string> materials_file;
  std::optional<std::string> format;
  std::optional<std::string> out;
  int jobs = 0;  // 0 selects the number of available cores
  // eps
  std::vector<std::string> materials;
  std::optional<std::string> xi;
  bool crossings = false;
  // grids and overrides
  std::optional<std::string> separations;  // lo:hi:n in nm
  std::optional<std::string> grid;         // scan / suspend parameter grid
  bool swap = false;
  std::optional<int> lmax, xi_points, k_points;
  std::optional<std::string> pfa;
  std::optional<std::string> mode;
  std::optional<double> target_nm;
};

struct Context {
  MaterialDb db;
  RunConfig cfg;
  int jobs = 1;
};

// Builds the material database: built-ins, then CASIMIR_MATERIALS, then the
// config's materials_file, then --materials-file, then inline config entries.
Context make_context(const Options& opt);

std::vector<Table> run_command(const Context& ctx, const Options& opt);

Provenance provenance(const Context& ctx, const Options& opt);

std::string render(const Context& ctx, const Options& opt, const std::vector<Table>& tables);

}  // namespace casimir::cli
