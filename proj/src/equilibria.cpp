#include "casimir/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"
#include "casimir/parallel.hpp"

namespace casimir {

const char* stability_name(Stability s) { return s == Stability::Stable ? "stable" : "unstable"; }

std::vector<EquilibriumPoint> find_equilibria(const ForceFunction& force, const EquilibriumOptions& opt) {
  if (!(opt.d_lo > 0.0) || !(opt.d_hi > opt.d_lo)) throw ValidationError("separation range must be positive and ordered");
  if (opt.grid_points < 2) throw ValidationError("equilibrium scan needs at least two grid points");
  std::vector<double> grid = log_grid(opt.d_lo, opt.d_hi, opt.grid_points);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = force(grid[i]);
  // A force that vanishes on the whole grid (index-matched bodies) has no isolated zeros.
  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) return {};

  std::vector<EquilibriumPoint> raw;
  for (const auto& [a, b] : scan_sign_changes(grid, values)) {
    auto ia = std::lower_bound(grid.begin(), grid.end(), a) - grid.begin();
    RootResult r;
    try {
      r = find_root_bracketed(force, a, b, opt.tolerance, values[ia], values[ia + 1]);
    } catch (const NumericalError& e) {
      std::ostringstream os;
      os << e.what() << " in bracket [" << a << ", " << b << "] m";
      throw EvaluationError(os.str());
    }
    const double h = opt.slope_step * r.x;
    const double slope = force(r.x + h) - force(r.x - h);
    EquilibriumPoint p;
    p.separation = r.x;
    p.slope_sign = slope > 0.0 ? 1 : (slope < 0.0 ? -1 : r.slope_sign);
    p.stability = p.slope_sign > 0 ? Stability::Stable : Stability::Unstable;
    p.residual = r.residual;
    raw.push_back(p);
  }

  std::vector<EquilibriumPoint> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i + 1 < raw.size() && raw[i + 1].separation - raw[i].separation < opt.merge_distance) {
      EquilibriumPoint m = raw[i];
      m.separation = 0.5 * (raw[i].separation + raw[i + 1].separation);
      m.residual = std::max(raw[i].residual, raw[i + 1].residual);
      m.merged = true;
      m.multiplicity = 2;
      out.push_back(m);
      ++i;
    } else {
      out.push_back(raw[i]);
    }
  }
  return out;
}

int equilibrium_count(const std::vector<EquilibriumPoint>& pts) {
  int n = 0;
  for (const auto& p : pts) n += p.multiplicity;
  return n;
}

ParameterScan scan_parameter(const ForceFamily& family, const std::string& parameter, const std::vector<double>& grid,
                             const EquilibriumOptions& opt, int jobs) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ValidationError("scan grid must be strictly increasing");
  ParameterScan scan{parameter, grid, std::vector<ScanEntry>(grid.size())};
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    ScanEntry& e = scan.entries[i];
    e.parameter = grid[i];
    try {
      e.points = find_equilibria([&](double d) { return family(grid[i], d); }, opt);
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
  });
  return scan;
}

FoldPoint find_fold(const ForceFamily& family, double p_lo, double p_hi, const EquilibriumOptions& opt,
                    double width) {
  if (!(p_hi > p_lo)) throw ValidationError("fold bracket must be ordered");
  auto at = [&](double p) { return find_equilibria([&](double d) { return family(p, d); }, opt); };
  auto lo_pts = at(p_lo), hi_pts = at(p_hi);
  FoldPoint f;
  f.count_lo = equilibrium_count(lo_pts);
  f.count_hi = equilibrium_count(hi_pts);
  if (f.count_lo == f.count_hi) {
    std::ostringstream os;
    os << "equilibrium count is " << f.count_lo << " at both ends of the fold bracket";
    throw BracketError(os.str());
  }
  const bool more_at_hi = f.count_hi > f.count_lo;
  std::vector<EquilibriumPoint> rich = more_at_hi ? hi_pts : lo_pts;
  double a = p_lo, b = p_hi;
  while (b - a > width) {
    double mid = 0.5 * (a + b);
    auto pts = at(mid);
    int c = equilibrium_count(pts);
    ++f.bisections;
    if (c == f.count_lo) {
      a = mid;
      if (!more_at_hi) rich = pts;
    } else {
      b = mid;
      if (more_at_hi) rich = pts;
    }
    if (f.bisections > 200) throw ConvergenceError("fold bisection did not converge");
  }
  f.bracket_lo = a;
  f.bracket_hi = b;
  f.critical = 0.5 * (a + b);
  // Closest adjacent stable/unstable pair on the side that still has it.
  double best = INFINITY;
  f.separation = NAN;
  for (std::size_t i = 0; i < rich.size(); ++i) {
    if (rich[i].merged) {
      if (0.0 < best) {
        best = 0.0;
        f.separation = rich[i].separation;
      }
      continue;
    }
    if (i + 1 < rich.size() && rich[i].stability != rich[i + 1].stability) {
      double gap = rich[i + 1].separation - rich[i].separation;
      if (gap < best) {
        best = gap;
        f.separation = 0.5 * (rich[i].separation + rich[i + 1].separation);
      }
    }
  }
  return f;
}

ForceFunction planar_force(const MaterialDb& db, PlanarGap gap, PlanarQuadrature q) {
  return [&db, gap, q](double d) mutable {
    gap.separation = d;
    return lifshitz_pressure(db, gap, q);
  };
}

ForceFunction sphere_force(const MaterialDb& db, SphereGeometry g, ScatteringSettings s) {
  return [&db, g, s](double d) { return casimir_force(db, with_gap(g, d), s); };
}

ForceFamily plate_sphere_radius_family(const MaterialDb& db, PlateSphereGeometry base, ScatteringSettings s) {
  return [&db, base, s](double radius, double d) {
    PlateSphereGeometry g = base;
    g.sphere.radius = radius;
    g.gap = d;
    return casimir_force(db, g, s);
  };
}

ForceFamily slab_thickness_family(const MaterialDb& db, PlanarGap base, Wall wall, PlanarQuadrature q) {
  LayerStack& st = wall == Wall::A ? base.wall_a : base.wall_b;
  if (st.layers.size() < 2 || !st.layers.front().thickness)
    throw ValidationError("thickness family needs a finite gap-facing layer on the chosen wall");
  return [&db, base, wall, q](double t, double d) {
    PlanarGap g = base;
    LayerStack& s = wall == Wall::A ? g.wall_a : g.wall_b;
    s.layers.front().thickness = t;
    g.separation = d;
    return lifshitz_pressure(db, g, q);
  };
}

}  // namespace casimir
