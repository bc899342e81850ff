#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casimir/kernels.hpp"
#include "casimir/materials.hpp"

namespace casimir {

enum class Polarization { TE, TM };

struct Layer {
  std::string material;
  std::optional<double> thickness;  // meters; empty marks the terminating half-space

  static Layer half_space(std::string m) { return {std::move(m), std::nullopt}; }
  static Layer slab(std::string m, double t) { return {std::move(m), t}; }
};

// Layers ordered from the gap-facing surface inward.
struct LayerStack {
  std::vector<Layer> layers;

  static LayerStack semi_infinite(std::string m) { return {{Layer::half_space(std::move(m))}}; }
  // Finite layer of thickness t on top of a substrate half-space.
  static LayerStack coated(std::string top, double t, std::string substrate) {
    return {{Layer::slab(std::move(top), t), Layer::half_space(std::move(substrate))}};
  }
  // Freestanding film of thickness t with the fluid behind it.
  static LayerStack film(std::string m, double t, std::string fluid) { return coated(std::move(m), t, std::move(fluid)); }

  void validate() const;  // ValidationError on malformed stacks
  std::string describe() const;
};

// Positive pressure pulls the walls together.
struct PlanarGap {
  LayerStack wall_a;
  LayerStack wall_b;
  std::string fluid;
  double separation = 0.0;  // meters
};

struct PlanarQuadrature {
  int xi_points = 40;
  int k_points = 40;
};

// Reflection of a layer stack seen from the fluid, batched over wavevectors.
class StackReflector {
 public:
  StackReflector(const MaterialDb& db, const LayerStack& stack, const std::string& fluid);

  // kappa_f[i] = sqrt(eps_f xi^2/c^2 + k2[i]) must be supplied by the caller.
  void evaluate(double xi, const double* k2, const double* kappa_f, std::size_t n, double* rte, double* rtm,
                const kernels::KernelSet& ks) const;
  bool perfect_conductor_surface() const;

 private:
  struct Resolved {
    const Material* material;
    std::optional<double> thickness;
  };
  const Material* fluid_;
  std::vector<Resolved> layers_;
};

double fresnel_reflection(const MaterialDb& db, const LayerStack& stack, const std::string& fluid, double xi,
                          double k, Polarization pol);

// Attractive positive, N/m^2.
double lifshitz_pressure(const MaterialDb& db, const PlanarGap& gap, const PlanarQuadrature& q = {},
                         const kernels::KernelSet& ks = kernels::active_kernels());
// Interaction energy per area, J/m^2 (negative for attraction).
double lifshitz_energy(const MaterialDb& db, const PlanarGap& gap, const PlanarQuadrature& q = {});
// Pressure integrand at one (xi, k) point, without the hbar/(2 pi^2) prefactor.
double lifshitz_integrand(const MaterialDb& db, const PlanarGap& gap, double xi, double k);

// hbar c pi^2 / (240 d^4)
double perfect_metal_pressure(double d);
double normalized_pressure(const MaterialDb& db, const PlanarGap& gap, const PlanarQuadrature& q = {});

}  // namespace casimir
