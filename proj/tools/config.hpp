#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "casimir/equilibria.hpp"
#include "casimir/planar.hpp"
#include "casimir/scattering.hpp"
#include "casimir/suspension.hpp"

namespace casimir::cli {

enum class GeometryKind { SlabSlab, PlateSphere, SphereSphere, Suspension, Dicluster, NormalForm };

const char* geometry_kind_name(GeometryKind k);

struct GridSpec {
  double lo = 0.0, hi = 0.0;  // SI units (meters) except for dimensionless parameters
  int points = 0;
  bool log = true;
  std::vector<double> values() const;
};

struct GeometrySpec {
  GeometryKind kind = GeometryKind::SlabSlab;
  std::string fluid = "vacuum";
  LayerStack wall_a, wall_b;  // slab-slab
  LayerStack plate;           // plate-sphere, suspension, dicluster
  SphereBody sphere;          // plate-sphere, suspension
  SphereBody sphere_a, sphere_b;  // sphere-sphere, dicluster
  std::vector<std::pair<double, double>> pairs;  // extra dicluster radius pairs (a, b), meters
  double gravity = kStandardGravity;
  bool buoyancy = true;
  double center = 1.0;  // normal-form F(d; mu) = (d/nm - center)^2 - mu
};

struct ScanSpec {
  std::string parameter;  // radius | thickness | mu
  Wall wall = Wall::A;
  GridSpec grid;
};

struct FoldSpec {
  double lo = 0.0, hi = 0.0, width = 0.5e-9;
};

struct PairSpec {
  std::string material_a, material_b;
  MatchMode mode = MatchMode::Height;
  double target = 0.0;
  GridSpec radii{10e-9, 400e-9, 40, true};
};

struct RunConfig {
  std::string origin;
  std::string text;  // raw config text, hashed for provenance
  std::optional<std::string> materials_file;
  GeometrySpec geometry;
  GridSpec separations{10e-9, 500e-9, 60, true};
  ScatteringSettings scattering;
  PlanarQuadrature planar;
  double tolerance = 1e-7;
  double merge_distance = 1e-9;
  PfaNormalization pfa = PfaNormalization::RScaled;
  std::optional<ScanSpec> scan;
  std::optional<FoldSpec> fold;
  std::optional<PairSpec> pair;
  std::optional<std::string> format;
  std::optional<std::string> out;
};

// ParseError / ValidationError on malformed input.
RunConfig parse_run_config(const std::string& text, const std::string& origin);
RunConfig load_run_config(const std::string& path);

// Parses "lo:hi:n" with lo/hi scaled by `unit`.
GridSpec parse_grid(const std::string& spec, double unit, bool log);

}  // namespace casimir::cli
