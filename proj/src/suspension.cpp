#include "casimir/suspension.hpp"

// Boost 1.74 pchip calls isnan unqualified.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"
#include "casimir/parallel.hpp"

namespace casimir {

namespace {

double density_of(const Material& m) {
  if (!m.density) throw ValidationError("material '" + m.name + "' has no mass density");
  return *m.density;
}

PlateSphereGeometry plate_geometry(const SuspendedSphere& cfg, double h) {
  return {cfg.slab, cfg.sphere, cfg.fluid, h};
}

}  // namespace

double effective_weight(const MaterialDb& db, const SuspendedSphere& cfg) {
  if (!(cfg.sphere.radius > 0.0)) throw ValidationError("sphere radius must be positive");
  double rho = density_of(db.lookup(cfg.sphere.material));
  if (cfg.buoyancy) rho -= density_of(db.lookup(cfg.fluid));
  const double r = cfg.sphere.radius;
  return rho * (4.0 / 3.0) * kPi * r * r * r * cfg.gravity;
}

double net_vertical_force(const MaterialDb& db, const SuspendedSphere& cfg, double h, const ScatteringSettings& s) {
  if (!(h > 0.0)) throw ValidationError("suspension height must be positive");
  return -casimir_force(db, plate_geometry(cfg, h), s) - effective_weight(db, cfg);
}

SuspensionResult solve_heights(const MaterialDb& db, const SuspendedSphere& cfg, const SuspensionOptions& opt) {
  const double w = effective_weight(db, cfg);
  // Downward total force; its zeros with positive slope are restoring.
  auto down = [&](double h) { return casimir_force(db, plate_geometry(cfg, h), opt.scattering) + w; };
  SuspensionResult res;
  res.roots = find_equilibria(down, opt.heights);
  const EquilibriumPoint* stable = nullptr;
  for (const auto& p : res.roots)
    if (p.stability == Stability::Stable && !p.merged) stable = &p;
  if (!stable) return res;
  res.suspendable = true;
  res.h_c = stable->separation;
  res.L_c = stable->separation + cfg.sphere.radius;
  for (const auto& p : res.roots)
    if (p.stability == Stability::Unstable && p.separation < stable->separation) res.h_u = p.separation;
  const double h = opt.heights.slope_step * stable->separation;
  res.stiffness = -(down(stable->separation + h) - down(stable->separation - h)) / (2.0 * h);
  return res;
}

std::vector<HeightCurvePoint> height_curve(const MaterialDb& db, const SuspendedSphere& base,
                                           const std::vector<double>& radii, const SuspensionOptions& opt,
                                           int jobs) {
  std::vector<HeightCurvePoint> out(radii.size());
  parallel_for(radii.size(), jobs, [&](std::size_t i) {
    SuspendedSphere cfg = base;
    cfg.sphere.radius = radii[i];
    out[i].radius = radii[i];
    try {
      out[i].result = solve_heights(db, cfg, opt);
    } catch (const NumericalError& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

const char* match_mode_name(MatchMode m) { return m == MatchMode::Height ? "match_h" : "match_L"; }

namespace {

struct Curve {
  std::vector<double> r, v;
};

double matched_value(const SuspensionResult& s, MatchMode mode) {
  return mode == MatchMode::Height ? *s.h_c : *s.L_c;
}

Curve usable(const std::vector<HeightCurvePoint>& pts, MatchMode mode) {
  Curve c;
  for (const auto& p : pts)
    if (!p.error && p.result.suspendable) {
      c.r.push_back(p.radius);
      c.v.push_back(matched_value(p.result, mode));
    }
  return c;
}

double interpolated_root(const Curve& c, std::size_t i, double target) {
  const double a = c.r[i], b = c.r[i + 1];
  if (c.r.size() < 4) {
    double t = (target - c.v[i]) / (c.v[i + 1] - c.v[i]);
    return a + t * (b - a);
  }
  auto x = c.r;
  auto y = c.v;
  auto spline = boost::math::interpolators::pchip<std::vector<double>>(std::move(x), std::move(y));
  auto g = [&](double r) { return spline(r) - target; };
  std::uintmax_t iters = 100;
  auto tol = [](double lo, double hi) { return std::fabs(hi - lo) <= 1e-12 * hi; };
  auto br = boost::math::tools::toms748_solve(g, a, b, c.v[i] - target, c.v[i + 1] - target, tol, iters);
  return 0.5 * (br.first + br.second);
}

MaterialPairing match_material(const MaterialDb& db, const PairingRequest& req, const std::string& material,
                               const Curve& c, const SuspensionOptions& opt) {
  std::size_t bracket = c.r.size();
  for (std::size_t i = 0; i + 1 < c.r.size(); ++i) {
    double ga = c.v[i] - req.target, gb = c.v[i + 1] - req.target;
    if (ga == 0.0) return {c.r[i], c.v[i], 0};
    if ((ga < 0.0) != (gb < 0.0)) {
      bracket = i;
      break;
    }
  }
  if (bracket == c.r.size()) {
    if (!c.v.empty() && c.v.back() == req.target) return {c.r.back(), c.v.back(), 0};
    throw RangeError("no radius of '" + material + "' reaches the target height", req.target, req.target);
  }
  SuspendedSphere cfg{{0.0, material}, req.slab, req.fluid, req.gravity, req.buoyancy};
  auto direct = [&](double r) {
    cfg.sphere.radius = r;
    SuspensionResult s = solve_heights(db, cfg, opt);
    if (!s.suspendable) {
      std::ostringstream os;
      os << "'" << material << "' sphere of radius " << r << " m is not suspendable during refinement";
      throw EvaluationError(os.str());
    }
    return matched_value(s, req.mode);
  };
  // Illinois iteration on direct solves, seeded by the interpolated root.
  double lo = c.r[bracket], hi = c.r[bracket + 1];
  double glo = c.v[bracket] - req.target, ghi = c.v[bracket + 1] - req.target;
  double x = interpolated_root(c, bracket, req.target);
  int side = 0;
  for (int it = 1; it <= 30; ++it) {
    double v = direct(x);
    double g = v - req.target;
    if (std::fabs(g) <= req.tolerance) return {x, v, it};
    if ((g < 0.0) == (glo < 0.0)) {
      lo = x;
      glo = g;
      if (side == -1) ghi *= 0.5;
      side = -1;
    } else {
      hi = x;
      ghi = g;
      if (side == 1) glo *= 0.5;
      side = 1;
    }
    x = hi - ghi * (hi - lo) / (ghi - glo);
  }
  throw ConvergenceError("radius pairing for '" + material + "' did not reach the height tolerance");
}

}  // namespace

PairingResult pair_radii(const MaterialDb& db, const PairingRequest& req, const SuspensionOptions& opt, int jobs) {
  if (!(req.target > 0.0)) throw ValidationError("pairing target must be positive");
  if (!(req.r_lo > 0.0) || !(req.r_hi > req.r_lo) || req.radius_points < 2)
    throw ValidationError("pairing radius grid must be positive, ordered and have two or more points");
  std::vector<double> radii = log_grid(req.r_lo, req.r_hi, req.radius_points);
  auto curve_of = [&](const std::string& m) {
    SuspendedSphere base{{req.r_lo, m}, req.slab, req.fluid, req.gravity, req.buoyancy};
    return usable(height_curve(db, base, radii, opt, jobs), req.mode);
  };
  auto require_suspendable = [](const Curve& c, const std::string& m) {
    if (c.r.empty()) throw RangeError("'" + m + "' spheres are not suspendable anywhere on the radius grid", NAN, NAN);
  };
  Curve ca = curve_of(req.material_a);
  require_suspendable(ca, req.material_a);
  Curve cb = req.material_b == req.material_a ? ca : curve_of(req.material_b);
  require_suspendable(cb, req.material_b);
  auto range_of = [](const Curve& c) {
    return std::pair{*std::min_element(c.v.begin(), c.v.end()), *std::max_element(c.v.begin(), c.v.end())};
  };
  const auto [a_lo, a_hi] = range_of(ca);
  const auto [b_lo, b_hi] = range_of(cb);
  PairingResult out;
  out.overlap_lo = std::max(a_lo, b_lo);
  out.overlap_hi = std::min(a_hi, b_hi);
  if (!(req.target >= out.overlap_lo && req.target <= out.overlap_hi)) {
    std::ostringstream os;
    os.precision(5);
    os << "target " << req.target / kNanometer << " nm is not reachable by both materials: '" << req.material_a
       << "' spans [" << a_lo / kNanometer << ", " << a_hi / kNanometer << "] nm, '" << req.material_b << "' spans ["
       << b_lo / kNanometer << ", " << b_hi / kNanometer << "] nm";
    if (out.overlap_lo <= out.overlap_hi)
      os << ", overlap [" << out.overlap_lo / kNanometer << ", " << out.overlap_hi / kNanometer << "] nm";
    else
      os << ", no overlap";
    throw RangeError(os.str(), out.overlap_lo, out.overlap_hi);
  }
  out.a = match_material(db, req, req.material_a, ca, opt);
  out.b = req.material_b == req.material_a ? out.a : match_material(db, req, req.material_b, cb, opt);
  return out;
}

DiclusterDesign design_dicluster(const MaterialDb& db, const SphereBody& a, const SphereBody& b,
                                 const std::string& fluid, const EquilibriumOptions& eq, const ScatteringSettings& s,
                                 std::optional<double> common_height, int jobs) {
  DiclusterDesign d;
  d.a = a;
  d.b = b;
  d.fluid = fluid;
  d.common_height = common_height;
  SphereSphereGeometry g{a, b, fluid, eq.d_lo};
  std::vector<double> grid = log_grid(eq.d_lo, eq.d_hi, eq.grid_points);
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    SphereSphereGeometry gi = g;
    gi.gap = grid[i];
    values[i] = casimir_force(db, gi, s);
  });
  std::map<double, double> cache;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cache[grid[i]] = values[i];
    d.curve.push_back({grid[i], values[i]});
  }
  auto force = [&](double gap) {
    auto it = cache.find(gap);
    if (it != cache.end()) return it->second;
    SphereSphereGeometry gi = g;
    gi.gap = gap;
    return casimir_force(db, gi, s);
  };
  d.equilibria = find_equilibria(force, eq);
  for (const auto& p : d.equilibria)
    if (p.stability == Stability::Stable && !p.merged) {
      d.gap = p.separation;
      d.feasible = true;
      break;
    }
  return d;
}

}  // namespace casimir
