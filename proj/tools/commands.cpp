#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"
#include "casimir/parallel.hpp"

namespace casimir::cli {

namespace {

constexpr double kNm = kNanometer;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Column nm_col(const std::string& name) { return {name, "nm", kNm, "m"}; }
Column pn_col(const std::string& name) { return {name, "pN", kPicoNewton, "N"}; }
Column plain(const std::string& name, const std::string& unit = "1") { return {name, unit, 1.0, ""}; }
Column text_col(const std::string& name) { return {name, "", 1.0, ""}; }

Cell opt_nm(const std::optional<double>& v) { return v ? Cell{*v / kNm} : Cell{}; }

EquilibriumOptions eq_options(const RunConfig& cfg) {
  EquilibriumOptions o;
  o.d_lo = cfg.separations.lo;
  o.d_hi = cfg.separations.hi;
  o.grid_points = cfg.separations.points;
  o.tolerance = cfg.tolerance;
  o.merge_distance = cfg.merge_distance;
  return o;
}

void swap_materials(GeometrySpec& g) {
  switch (g.kind) {
    case GeometryKind::SlabSlab:
      std::swap(g.wall_a.layers.front().material, g.wall_b.layers.front().material);
      break;
    case GeometryKind::PlateSphere:
    case GeometryKind::Suspension:
      std::swap(g.plate.layers.front().material, g.sphere.material);
      break;
    case GeometryKind::SphereSphere:
    case GeometryKind::Dicluster:
      std::swap(g.sphere_a.material, g.sphere_b.material);
      break;
    case GeometryKind::NormalForm:
      throw ValidationError("--swap has no meaning for the normal-form family");
  }
}

// Force at separation d for a geometry, positive when attractive. Slab-slab
// returns a pressure.
ForceFunction force_of(const Context& ctx, const GeometrySpec& g) {
  const auto& cfg = ctx.cfg;
  switch (g.kind) {
    case GeometryKind::SlabSlab:
      return planar_force(ctx.db, PlanarGap{g.wall_a, g.wall_b, g.fluid, 0.0}, cfg.planar);
    case GeometryKind::PlateSphere:
    case GeometryKind::Suspension:
      return sphere_force(ctx.db, PlateSphereGeometry{g.plate, g.sphere, g.fluid, 1.0}, cfg.scattering);
    case GeometryKind::SphereSphere:
    case GeometryKind::Dicluster:
      return sphere_force(ctx.db, SphereSphereGeometry{g.sphere_a, g.sphere_b, g.fluid, 1.0}, cfg.scattering);
    case GeometryKind::NormalForm: {
      double c = g.center;
      return [c](double d) { return (d / kNm - c) * (d / kNm - c); };
    }
  }
  throw ValidationError("unsupported geometry");
}

double normalization_of(const Context& ctx, const GeometrySpec& g, double d) {
  switch (g.kind) {
    case GeometryKind::SlabSlab:
      return perfect_metal_pressure(d);
    case GeometryKind::PlateSphere:
    case GeometryKind::Suspension:
      return pfa_force_normalization(PlateSphereGeometry{g.plate, g.sphere, g.fluid, d}, ctx.cfg.pfa);
    case GeometryKind::SphereSphere:
    case GeometryKind::Dicluster:
      return pfa_force_normalization(SphereSphereGeometry{g.sphere_a, g.sphere_b, g.fluid, d}, ctx.cfg.pfa);
    case GeometryKind::NormalForm:
      return 1.0;
  }
  return 1.0;
}

ForceFamily family_of(const Context& ctx, const GeometrySpec& g, const ScanSpec& sc) {
  const auto& cfg = ctx.cfg;
  const MaterialDb& db = ctx.db;
  if (sc.parameter == "mu") {
    if (g.kind != GeometryKind::NormalForm) throw ValidationError("scan parameter 'mu' needs the normal-form geometry");
    double c = g.center;
    return [c](double mu, double d) { return (d / kNm - c) * (d / kNm - c) - mu; };
  }
  if (sc.parameter == "thickness") {
    if (g.kind == GeometryKind::SlabSlab)
      return slab_thickness_family(db, PlanarGap{g.wall_a, g.wall_b, g.fluid, 0.0}, sc.wall, cfg.planar);
    if (g.kind == GeometryKind::PlateSphere) {
      if (g.plate.layers.size() < 2 || !g.plate.layers.front().thickness)
        throw ValidationError("thickness scan needs a finite top layer on the plate");
      PlateSphereGeometry base{g.plate, g.sphere, g.fluid, 0.0};
      ScatteringSettings s = cfg.scattering;
      return [&db, base, s](double t, double d) {
        PlateSphereGeometry p = base;
        p.stack.layers.front().thickness = t;
        p.gap = d;
        return casimir_force(db, p, s);
      };
    }
    throw ValidationError("thickness scans need a slab-slab or plate-sphere geometry");
  }
  // radius
  if (g.kind == GeometryKind::PlateSphere || g.kind == GeometryKind::Suspension)
    return plate_sphere_radius_family(db, PlateSphereGeometry{g.plate, g.sphere, g.fluid, 0.0}, cfg.scattering);
  if (g.kind == GeometryKind::SphereSphere || g.kind == GeometryKind::Dicluster) {
    SphereSphereGeometry base{g.sphere_a, g.sphere_b, g.fluid, 0.0};
    ScatteringSettings s = cfg.scattering;
    return [&db, base, s](double r, double d) {
      SphereSphereGeometry p = base;
      p.a.radius = r;
      p.gap = d;
      return casimir_force(db, p, s);
    };
  }
  throw ValidationError("radius scans need a geometry with a sphere");
}

double param_display_scale(const ScanSpec& sc) { return sc.parameter == "mu" ? 1.0 : kNm; }

Column param_col(const ScanSpec& sc) {
  return sc.parameter == "mu" ? plain("mu") : nm_col(sc.parameter == "radius" ? "R" : "t");
}

GeometrySpec effective_geometry(const Context& ctx, const Options& opt) {
  GeometrySpec g = ctx.cfg.geometry;
  if (opt.swap) swap_materials(g);
  return g;
}

const ScanSpec& require_scan(const RunConfig& cfg) {
  if (!cfg.scan) throw ValidationError("this command needs a 'scan' section or --grid");
  return *cfg.scan;
}

// ---------------------------------------------------------------- commands

std::vector<Table> cmd_eps(const Context& ctx, const Options& opt) {
  std::vector<std::string> names = opt.materials;
  if (names.empty()) names = {"si", "teflon", "sio2", "ethanol"};
  GridSpec g = opt.xi ? parse_grid(*opt.xi, 1.0, true) : GridSpec{0.1, 100.0, 200, true};
  std::vector<const Material*> mats;
  for (const auto& n : names) {
    const Material& m = ctx.db.lookup(n);
    if (m.is_perfect_conductor())
      throw ValidationError("'" + m.name + "' is a perfect conductor and has no permittivity");
    mats.push_back(&m);
  }
  Table t;
  t.name = "permittivity";
  t.columns.push_back({"xi", "2pi c/um", kXiUnit, "rad/s"});
  for (const auto* m : mats) t.columns.push_back(plain("eps_" + m->name));
  for (double x : g.values()) {
    std::vector<Cell> row{x};
    for (const auto* m : mats) row.emplace_back(m->eps(xi_from_cli(x)));
    t.rows.push_back(std::move(row));
  }
  if (opt.crossings) {
    const int scan_points = std::max(1000, g.points);
    for (std::size_t i = 0; i < mats.size(); ++i)
      for (std::size_t j = i + 1; j < mats.size(); ++j) {
        auto cr = find_crossings(*mats[i]->model, *mats[j]->model, xi_from_cli(g.lo), xi_from_cli(g.hi), scan_points);
        std::ostringstream os;
        for (std::size_t k = 0; k < cr.size(); ++k) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.10g", xi_to_cli(cr[k]));
          os << (k ? ";" : "") << buf;
        }
        t.meta.emplace_back("crossings " + mats[i]->name + "/" + mats[j]->name + " [2pi c/um]",
                            cr.empty() ? "none" : os.str());
      }
  }
  return {t};
}

std::vector<Table> cmd_force(const Context& ctx, const Options& opt) {
  GeometrySpec g = effective_geometry(ctx, opt);
  ForceFunction f = force_of(ctx, g);
  std::vector<double> ds = ctx.cfg.separations.values();
  std::vector<double> fs(ds.size());
  parallel_for(ds.size(), ctx.jobs, [&](std::size_t i) { fs[i] = f(ds[i]); });
  Table t;
  t.name = "force";
  t.meta.emplace_back("geometry", geometry_kind_name(g.kind));
  const bool planar = g.kind == GeometryKind::SlabSlab;
  const bool synthetic = g.kind == GeometryKind::NormalForm;
  t.columns = {nm_col("d"), planar ? plain("P", "Pa") : (synthetic ? plain("F") : pn_col("F")), plain("F_norm")};
  if (!planar && !synthetic)
    t.meta.emplace_back("normalization", ctx.cfg.pfa == PfaNormalization::RScaled ? "hbar c pi^3 R / (360 d^3)"
                                                                                 : "hbar c pi^3 / (720 d^3) with R");
  if (planar) t.meta.emplace_back("normalization", "hbar c pi^2 / (240 d^4)");
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double shown = planar || synthetic ? fs[i] : fs[i] / kPicoNewton;
    t.rows.push_back({ds[i] / kNm, shown, fs[i] / normalization_of(ctx, g, ds[i])});
  }
  return {t};
}

Table equilibria_table(const std::vector<EquilibriumPoint>& pts) {
  Table t;
  t.name = "equilibria";
  t.columns = {nm_col("d_c"), text_col("class"), plain("slope_sign"), text_col("flags")};
  for (const auto& p : pts)
    t.rows.push_back({p.separation / kNm, std::string(stability_name(p.stability)),
                      static_cast<long long>(p.slope_sign), std::string(p.merged ? "merged" : "")});
  return t;
}

std::vector<Table> cmd_equilibria(const Context& ctx, const Options& opt) {
  GeometrySpec g = effective_geometry(ctx, opt);
  Table t = equilibria_table(find_equilibria(force_of(ctx, g), eq_options(ctx.cfg)));
  t.meta.emplace_back("geometry", geometry_kind_name(g.kind));
  return {t};
}

std::vector<Table> cmd_scan(const Context& ctx, const Options& opt) {
  GeometrySpec g = effective_geometry(ctx, opt);
  const ScanSpec& sc = require_scan(ctx.cfg);
  if (sc.grid.points < 1) throw ValidationError("scan needs a parameter grid: set scan points or pass --grid");
  ForceFamily fam = family_of(ctx, g, sc);
  EquilibriumOptions eo = eq_options(ctx.cfg);
  ParameterScan scan = scan_parameter(fam, sc.parameter, sc.grid.values(), eo, ctx.jobs);
  const double ps = param_display_scale(sc);

  Table t;
  t.name = "scan";
  t.meta.emplace_back("geometry", geometry_kind_name(g.kind));
  t.meta.emplace_back("swapped", opt.swap ? "true" : "false");
  t.columns = {param_col(sc), nm_col("d_stable"), nm_col("d_unstable"), plain("count"), text_col("flags")};
  for (const auto& e : scan.entries) {
    std::optional<double> st, un;
    std::string flags;
    int n_st = 0, n_un = 0;
    for (const auto& p : e.points) {
      if (p.stability == Stability::Stable) {
        if (!st) st = p.separation;
        ++n_st;
      } else {
        if (!un) un = p.separation;
        ++n_un;
      }
      if (p.merged) flags += flags.empty() ? "merged" : ";merged";
    }
    if (n_st > 1) flags += flags.empty() ? "multiple_stable" : ";multiple_stable";
    if (n_un > 1) flags += flags.empty() ? "multiple_unstable" : ";multiple_unstable";
    if (e.error) flags += (flags.empty() ? "error: " : ";error: ") + *e.error;
    t.rows.push_back({e.parameter / ps, opt_nm(st), opt_nm(un), static_cast<long long>(equilibrium_count(e.points)),
                      flags});
  }

  Table folds;
  folds.name = "folds";
  folds.columns = {param_col(sc), nm_col("d_star"), plain("count_lo"), plain("count_hi")};
  const double width = ctx.cfg.fold ? ctx.cfg.fold->width : (sc.parameter == "mu" ? 1e-4 : 0.5e-9);
  for (std::size_t i = 0; i + 1 < scan.entries.size(); ++i) {
    const auto& a = scan.entries[i];
    const auto& b = scan.entries[i + 1];
    if (a.error || b.error) continue;
    if (std::abs(equilibrium_count(a.points) - equilibrium_count(b.points)) != 2) continue;
    FoldPoint f = find_fold(fam, a.parameter, b.parameter, eo, width);
    folds.rows.push_back({f.critical / ps, f.separation / kNm, static_cast<long long>(f.count_lo),
                          static_cast<long long>(f.count_hi)});
  }
  return {t, folds};
}

std::vector<Table> cmd_fold(const Context& ctx, const Options& opt) {
  GeometrySpec g = effective_geometry(ctx, opt);
  const ScanSpec& sc = require_scan(ctx.cfg);
  if (!ctx.cfg.fold) throw ValidationError("fold needs a 'fold' section with the parameter bracket");
  const FoldSpec& fs = *ctx.cfg.fold;
  FoldPoint f = find_fold(family_of(ctx, g, sc), fs.lo, fs.hi, eq_options(ctx.cfg), fs.width);
  const double ps = param_display_scale(sc);
  Table t;
  t.name = "fold";
  t.meta.emplace_back("parameter", sc.parameter);
  Column pc = param_col(sc);
  Column lo = pc, hi = pc;
  pc.name += "_c";
  lo.name += "_lo";
  hi.name += "_hi";
  t.columns = {pc, nm_col("d_star"), lo, hi, plain("count_lo"), plain("count_hi"), plain("bisections")};
  t.rows.push_back({f.critical / ps, f.separation / kNm, f.bracket_lo / ps, f.bracket_hi / ps,
                    static_cast<long long>(f.count_lo), static_cast<long long>(f.count_hi),
                    static_cast<long long>(f.bisections)});
  return {t};
}

SuspensionOptions suspension_options(const RunConfig& cfg) {
  SuspensionOptions so;
  so.heights = eq_options(cfg);
  so.scattering = cfg.scattering;
  return so;
}

std::vector<Table> cmd_suspend(const Context& ctx, const Options& opt) {
  GeometrySpec g = effective_geometry(ctx, opt);
  if (g.kind != GeometryKind::Suspension && g.kind != GeometryKind::PlateSphere)
    throw ValidationError("suspend needs a suspension geometry");
  std::vector<double> radii = ctx.cfg.scan && ctx.cfg.scan->parameter == "radius" ? ctx.cfg.scan->grid.values()
                                                                                  : std::vector<double>{g.sphere.radius};
  SuspendedSphere base{g.sphere, g.plate, g.fluid, g.gravity, g.buoyancy};
  auto curve = height_curve(ctx.db, base, radii, suspension_options(ctx.cfg), ctx.jobs);
  Table t;
  t.name = "suspension";
  t.meta.emplace_back("sphere", g.sphere.material);
  t.meta.emplace_back("slab", g.plate.describe());
  t.meta.emplace_back("buoyancy", g.buoyancy ? "true" : "false");
  t.columns = {nm_col("R"), nm_col("h_c"), nm_col("L_c"), nm_col("h_u"), plain("stiffness", "N/m"),
               plain("suspendable"), text_col("flags")};
  for (const auto& p : curve) {
    const auto& r = p.result;
    std::string flags = p.error ? "error: " + *p.error : (r.suspendable ? "" : "not_suspendable");
    t.rows.push_back({p.radius / kNm, opt_nm(r.h_c), opt_nm(r.L_c), opt_nm(r.h_u),
                      r.stiffness ? Cell{*r.stiffness} : Cell{}, static_cast<long long>(r.suspendable ? 1 : 0),
                      flags});
  }
  return {t};
}

std::vector<Table> cmd_pair(const Context& ctx, const Options& opt) {
  GeometrySpec g = effective_geometry(ctx, opt);
  if (!ctx.cfg.pair) throw ValidationError("pair needs a 'pairing' section");
  PairSpec ps = *ctx.cfg.pair;
  if (opt.mode) {
    if (*opt.mode == "match_h") ps.mode = MatchMode::Height;
    else if (*opt.mode == "match_L") ps.mode = MatchMode::CenterHeight;
    else throw ValidationError("--mode must be match_h or match_L");
  }
  if (opt.target_nm) ps.target = *opt.target_nm * kNm;
  if (g.plate.layers.empty()) throw ValidationError("pair needs a geometry with a plate");
  PairingRequest req{ps.material_a, ps.material_b, g.plate, g.fluid, ps.mode, ps.target,
                     ps.radii.lo, ps.radii.hi, ps.radii.points, 1e-9, g.gravity, g.buoyancy};
  PairingResult r = pair_radii(ctx.db, req, suspension_options(ctx.cfg), ctx.jobs);
  Table t;
  t.name = "pairing";
  t.meta.emplace_back("mode", match_mode_name(ps.mode));
  t.meta.emplace_back("slab", g.plate.describe());
  t.columns = {text_col("mode"), nm_col("target"), nm_col("R_a"), nm_col("R_b"), nm_col("height_a"),
               nm_col("height_b"), nm_col("overlap_lo"), nm_col("overlap_hi")};
  t.rows.push_back({std::string(match_mode_name(ps.mode)), ps.target / kNm, r.a.radius / kNm, r.b.radius / kNm,
                    r.a.height / kNm, r.b.height / kNm, r.overlap_lo / kNm, r.overlap_hi / kNm});
  return {t};
}

std::vector<Table> cmd_dicluster(const Context& ctx, const Options& opt) {
  GeometrySpec g = effective_geometry(ctx, opt);
  if (g.kind != GeometryKind::Dicluster && g.kind != GeometryKind::SphereSphere)
    throw ValidationError("dicluster needs a dicluster geometry");
  std::vector<std::pair<double, double>> pairs{{g.sphere_a.radius, g.sphere_b.radius}};
  for (const auto& p : g.pairs) pairs.push_back(p);
  EquilibriumOptions eo = eq_options(ctx.cfg);

  Table designs, curves;
  designs.name = "designs";
  designs.meta.emplace_back("additive_approx", "true");
  designs.columns = {nm_col("R_a"), nm_col("R_b"), nm_col("d_SS"), nm_col("h_a"), nm_col("h_b"), plain("feasible")};
  curves.name = "curves";
  curves.columns = {nm_col("R_a"), nm_col("R_b"), nm_col("d"), pn_col("F_SS")};
  for (const auto& [ra, rb] : pairs) {
    SphereBody a{ra, g.sphere_a.material}, b{rb, g.sphere_b.material};
    std::optional<double> ha, hb;
    if (!g.plate.layers.empty()) {
      SuspensionOptions so = suspension_options(ctx.cfg);
      auto sa = solve_heights(ctx.db, {a, g.plate, g.fluid, g.gravity, g.buoyancy}, so);
      auto sb = solve_heights(ctx.db, {b, g.plate, g.fluid, g.gravity, g.buoyancy}, so);
      ha = sa.h_c;
      hb = sb.h_c;
    }
    DiclusterDesign d = design_dicluster(ctx.db, a, b, g.fluid, eo, ctx.cfg.scattering, ha, ctx.jobs);
    designs.rows.push_back({ra / kNm, rb / kNm, opt_nm(d.gap), opt_nm(ha), opt_nm(hb),
                            static_cast<long long>(d.feasible ? 1 : 0)});
    for (const auto& s : d.curve) curves.rows.push_back({ra / kNm, rb / kNm, s.separation / kNm, s.force / kPicoNewton});
  }
  return {designs, curves};
}

}  // namespace

Context make_context(const Options& opt) {
  Context ctx;
  ctx.cfg = opt.config_path ? load_run_config(*opt.config_path) : parse_run_config("", "<defaults>");
  ctx.db = MaterialDb::builtins();
  std::optional<std::string> path;
  if (const char* env = std::getenv("CASIMIR_MATERIALS"); env && *env) path = env;
  if (ctx.cfg.materials_file) path = ctx.cfg.materials_file;
  if (opt.materials_file) path = opt.materials_file;
  if (path) merge_materials_text(ctx.db, read_file(*path), *path);
  merge_materials_text(ctx.db, ctx.cfg.text, ctx.cfg.origin);

  RunConfig& cfg = ctx.cfg;
  if (opt.lmax) cfg.scattering.lmax = *opt.lmax;
  if (opt.xi_points) cfg.scattering.xi_points = cfg.planar.xi_points = *opt.xi_points;
  if (opt.k_points) cfg.scattering.k_points = cfg.planar.k_points = *opt.k_points;
  if (cfg.scattering.lmax < 1) throw ValidationError("--lmax must be at least 1");
  if (cfg.planar.xi_points < 2 || cfg.planar.k_points < 2) throw ValidationError("quadrature needs at least 2 points");
  if (opt.pfa) {
    if (*opt.pfa == "r-scaled") cfg.pfa = PfaNormalization::RScaled;
    else if (*opt.pfa == "caption") cfg.pfa = PfaNormalization::CaptionLiteral;
    else throw ValidationError("--pfa must be r-scaled or caption");
  }
  if (opt.separations) cfg.separations = parse_grid(*opt.separations, kNm, true);
  if (!cfg.scan && cfg.geometry.kind == GeometryKind::NormalForm) cfg.scan = ScanSpec{"mu", Wall::A, {0, 0, 0, false}};
  if (opt.grid) {
    if (!cfg.scan && opt.command == "suspend") cfg.scan = ScanSpec{"radius", Wall::A, {}};
    if (!cfg.scan) throw ValidationError("--grid needs a 'scan' section naming the parameter");
    cfg.scan->grid = parse_grid(*opt.grid, cfg.scan->parameter == "mu" ? 1.0 : kNm, cfg.scan->grid.log);
  }
  ctx.jobs = opt.jobs > 0 ? opt.jobs : default_jobs();
  return ctx;
}

std::vector<Table> run_command(const Context& ctx, const Options& opt) {
  static const std::map<std::string, std::vector<Table> (*)(const Context&, const Options&)> table = {
      {"eps", cmd_eps},         {"force", cmd_force},     {"equilibria", cmd_equilibria},
      {"scan", cmd_scan},       {"fold", cmd_fold},       {"suspend", cmd_suspend},
      {"pair", cmd_pair},       {"dicluster", cmd_dicluster}};
  auto it = table.find(opt.command);
  if (it == table.end()) throw ValidationError("unknown command '" + opt.command + "'");
  return it->second(ctx, opt);
}

Provenance provenance(const Context& ctx, const Options& opt) {
  std::ostringstream key;
  key << opt.command << "\n" << ctx.cfg.text << "\n";
  auto kv = [&](const char* k, const auto& v) { key << k << "=" << v << "\n"; };
  for (const auto& m : opt.materials) kv("material", m);
  if (opt.materials_file) kv("materials_file", *opt.materials_file);
  if (opt.xi) kv("xi", *opt.xi);
  if (opt.crossings) kv("crossings", 1);
  if (opt.separations) kv("d", *opt.separations);
  if (opt.grid) kv("grid", *opt.grid);
  if (opt.swap) kv("swap", 1);
  if (opt.lmax) kv("lmax", *opt.lmax);
  if (opt.xi_points) kv("xi_points", *opt.xi_points);
  if (opt.k_points) kv("k_points", *opt.k_points);
  if (opt.pfa) kv("pfa", *opt.pfa);
  if (opt.mode) kv("mode", *opt.mode);
  if (opt.target_nm) kv("target_nm", *opt.target_nm);
  return {opt.command, sha256_hex(key.str()), ctx.cfg.scattering.lmax, ctx.cfg.scattering.xi_points,
          ctx.cfg.scattering.k_points};
}

std::string render(const Context& ctx, const Options& opt, const std::vector<Table>& tables) {
  std::string fmt = opt.format ? *opt.format : (ctx.cfg.format ? *ctx.cfg.format : "csv");
  std::ostringstream os;
  Provenance p = provenance(ctx, opt);
  if (fmt == "csv")
    write_csv(os, p, tables);
  else if (fmt == "json")
    write_json(os, p, tables);
  else
    throw ValidationError("--format must be csv or json");
  return os.str();
}

}  // namespace casimir::cli
