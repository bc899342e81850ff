#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/equilibria.hpp"
#include "casimir/scattering.hpp"

namespace casimir {

struct SuspendedSphere {
  SphereBody sphere;
  LayerStack slab;
  std::string fluid;
  double gravity = kStandardGravity;  // m/s^2
  bool buoyancy = true;               // subtract the displaced fluid weight
};

struct SuspensionOptions {
  EquilibriumOptions heights{10e-9, 3000e-9, 60, 1e-7, 1e-2, 1e-9};
  ScatteringSettings scattering;
};

// Weight minus buoyancy, newtons (positive when the sphere sinks).
double effective_weight(const MaterialDb& db, const SuspendedSphere& cfg);

// Upward net force at surface gap h: -F_casimir - effective weight.
double net_vertical_force(const MaterialDb& db, const SuspendedSphere& cfg, double h,
                          const ScatteringSettings& s = {});

struct SuspensionResult {
  bool suspendable = false;
  std::optional<double> h_c;        // stable surface gap
  std::optional<double> L_c;        // h_c + R
  std::optional<double> h_u;        // largest unstable gap below h_c
  std::optional<double> stiffness;  // d F_net / dh at h_c, N/m; negative when restoring
  std::vector<EquilibriumPoint> roots;
};

SuspensionResult solve_heights(const MaterialDb& db, const SuspendedSphere& cfg, const SuspensionOptions& opt = {});

struct HeightCurvePoint {
  double radius = 0.0;
  SuspensionResult result;
  std::optional<std::string> error;
};

std::vector<HeightCurvePoint> height_curve(const MaterialDb& db, const SuspendedSphere& base,
                                           const std::vector<double>& radii, const SuspensionOptions& opt = {},
                                           int jobs = 1);

enum class MatchMode { Height, CenterHeight };  // match h_c or L_c

const char* match_mode_name(MatchMode m);

struct PairingRequest {
  std::string material_a, material_b;
  LayerStack slab;
  std::string fluid;
  MatchMode mode = MatchMode::Height;
  double target = 0.0;  // meters
  double r_lo = 10e-9, r_hi = 400e-9;
  int radius_points = 40;
  double tolerance = 1e-9;  // on the re-solved height, meters
  double gravity = kStandardGravity;
  bool buoyancy = true;
};

struct MaterialPairing {
  double radius = 0.0;
  double height = 0.0;  // re-solved h_c or L_c at `radius`
  int refinements = 0;
};

struct PairingResult {
  MaterialPairing a, b;
  double overlap_lo = 0.0, overlap_hi = 0.0;
};

// RangeError carrying the achievable overlap when the target is outside it.
PairingResult pair_radii(const MaterialDb& db, const PairingRequest& req, const SuspensionOptions& opt = {},
                         int jobs = 1);

struct ForceSample {
  double separation = 0.0;
  double force = 0.0;
};

struct DiclusterDesign {
  SphereBody a, b;
  std::string fluid;
  std::optional<double> common_height;
  std::optional<double> gap;  // stable sphere-sphere surface gap
  bool feasible = false;
  bool additive_approx = true;
  std::vector<EquilibriumPoint> equilibria;
  std::vector<ForceSample> curve;
};

DiclusterDesign design_dicluster(const MaterialDb& db, const SphereBody& a, const SphereBody& b,
                                 const std::string& fluid, const EquilibriumOptions& eq = {},
                                 const ScatteringSettings& s = {}, std::optional<double> common_height = {},
                                 int jobs = 1);

}  // namespace casimir
