#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "casimir/planar.hpp"
#include "casimir/scattering.hpp"

namespace casimir {

enum class Stability { Stable, Unstable };

const char* stability_name(Stability s);

// A zero of the force. Positive force means attraction, so a stable point has
// repulsion below and attraction above (positive slope).
struct EquilibriumPoint {
  double separation = 0.0;  // meters
  Stability stability = Stability::Stable;
  int slope_sign = 0;
  double residual = 0.0;
  // Two roots closer than the merge distance are reported once, flagged, with
  // multiplicity 2.
  bool merged = false;
  int multiplicity = 1;
};

struct EquilibriumOptions {
  double d_lo = 10e-9;
  double d_hi = 500e-9;
  int grid_points = 60;
  double tolerance = 1e-7;  // relative, on the root location
  double slope_step = 1e-2;  // relative to d
  double merge_distance = 1e-9;
};

using ForceFunction = std::function<double(double d)>;
using ForceFamily = std::function<double(double parameter, double d)>;

std::vector<EquilibriumPoint> find_equilibria(const ForceFunction& force, const EquilibriumOptions& opt = {});

int equilibrium_count(const std::vector<EquilibriumPoint>& pts);

struct ScanEntry {
  double parameter = 0.0;
  std::vector<EquilibriumPoint> points;
  std::optional<std::string> error;  // set when this grid value failed
};

struct ParameterScan {
  std::string parameter;
  std::vector<double> grid;
  std::vector<ScanEntry> entries;
};

ParameterScan scan_parameter(const ForceFamily& family, const std::string& parameter, const std::vector<double>& grid,
                             const EquilibriumOptions& opt = {}, int jobs = 1);

struct FoldPoint {
  double critical = 0.0;    // parameter value at the end of bisection
  double separation = 0.0;  // coalescence separation d*
  double bracket_lo = 0.0, bracket_hi = 0.0;
  int count_lo = 0, count_hi = 0;
  int bisections = 0;
};

// Bisects on the parameter until the bracket is narrower than `width`.
FoldPoint find_fold(const ForceFamily& family, double p_lo, double p_hi, const EquilibriumOptions& opt = {},
                    double width = 0.5e-9);

ForceFunction planar_force(const MaterialDb& db, PlanarGap gap, PlanarQuadrature q = {});
ForceFunction sphere_force(const MaterialDb& db, SphereGeometry g, ScatteringSettings s = {});

// Geometry families. The database must outlive the returned callables.
ForceFamily plate_sphere_radius_family(const MaterialDb& db, PlateSphereGeometry base, ScatteringSettings s = {});

enum class Wall { A, B };
// Varies the thickness of the gap-facing layer of one wall.
ForceFamily slab_thickness_family(const MaterialDb& db, PlanarGap base, Wall wall, PlanarQuadrature q = {});

}  // namespace casimir
