#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"

namespace casimir::cli {

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : -1; }

template <class T>
T as(const YAML::Node& n, const std::string& what) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError("field '" + what + "' has the wrong type", line_of(n));
  }
}

double positive_length(const YAML::Node& n, const std::string& what) {
  double v = as<double>(n, what);
  if (!(v > 0.0)) throw ValidationError("'" + what + "' must be positive");
  return v * kNanometer;
}

const YAML::Node require(const YAML::Node& sec, const std::string& key, const std::string& ctx) {
  YAML::Node n = sec[key];
  if (!n) throw ParseError(ctx + ": missing field '" + key + "'", line_of(sec));
  return n;
}

LayerStack parse_stack(const YAML::Node& n, const std::string& fluid, const std::string& what) {
  if (n.IsScalar()) return LayerStack::semi_infinite(as<std::string>(n, what));
  auto layer = [&](const YAML::Node& l) {
    if (!l.IsMap()) throw ParseError("'" + what + "' layers must be mappings", line_of(l));
    Layer out{as<std::string>(require(l, "material", what), what + ".material"), std::nullopt};
    if (YAML::Node t = l["thickness_nm"]) out.thickness = positive_length(t, what + ".thickness_nm");
    return out;
  };
  LayerStack s;
  if (n.IsMap()) {
    Layer top = layer(n);
    s.layers.push_back(top);
    if (top.thickness) {
      std::string backing = n["backing"] ? as<std::string>(n["backing"], what + ".backing") : fluid;
      s.layers.push_back(Layer::half_space(backing));
    }
  } else if (n.IsSequence()) {
    for (const auto& l : n) s.layers.push_back(layer(l));
  } else {
    throw ParseError("'" + what + "' must be a material name, a layer or a list of layers", line_of(n));
  }
  s.validate();
  return s;
}

SphereBody parse_sphere(const YAML::Node& n, const std::string& what) {
  if (!n.IsMap()) throw ParseError("'" + what + "' must be a mapping with material and radius_nm", line_of(n));
  return {positive_length(require(n, "radius_nm", what), what + ".radius_nm"),
          as<std::string>(require(n, "material", what), what + ".material")};
}

GridSpec parse_grid_node(const YAML::Node& n, const std::string& what, double unit) {
  if (!n.IsMap()) throw ParseError("'" + what + "' must be a mapping", line_of(n));
  GridSpec g;
  const std::string suffix = unit == kNanometer ? "_nm" : "";
  g.lo = as<double>(require(n, "lo" + suffix, what), what + ".lo") * unit;
  g.hi = as<double>(require(n, "hi" + suffix, what), what + ".hi") * unit;
  g.points = as<int>(require(n, "points", what), what + ".points");
  std::string sp = n["spacing"] ? as<std::string>(n["spacing"], what + ".spacing") : "log";
  if (sp != "log" && sp != "linear") throw ValidationError("'" + what + ".spacing' must be log or linear");
  g.log = sp == "log";
  if (g.points < 1 || !(g.hi >= g.lo) || (g.points > 1 && !(g.hi > g.lo)))
    throw ValidationError("'" + what + "' needs hi > lo and at least one point");
  if (g.log && !(g.lo > 0.0)) throw ValidationError("'" + what + "' log spacing needs lo > 0");
  return g;
}

GeometryKind parse_kind(const YAML::Node& n) {
  std::string k = as<std::string>(n, "geometry.kind");
  if (k == "slab-slab") return GeometryKind::SlabSlab;
  if (k == "plate-sphere") return GeometryKind::PlateSphere;
  if (k == "sphere-sphere") return GeometryKind::SphereSphere;
  if (k == "suspension") return GeometryKind::Suspension;
  if (k == "dicluster") return GeometryKind::Dicluster;
  if (k == "normal-form") return GeometryKind::NormalForm;
  throw ValidationError("unknown geometry kind '" + k + "'");
}

GeometrySpec parse_geometry(const YAML::Node& n) {
  if (!n.IsMap()) throw ParseError("'geometry' must be a mapping", line_of(n));
  GeometrySpec g;
  g.kind = parse_kind(require(n, "kind", "geometry"));
  if (YAML::Node f = n["fluid"]) g.fluid = as<std::string>(f, "geometry.fluid");
  switch (g.kind) {
    case GeometryKind::SlabSlab:
      g.wall_a = parse_stack(require(n, "wall_a", "geometry"), g.fluid, "geometry.wall_a");
      g.wall_b = parse_stack(require(n, "wall_b", "geometry"), g.fluid, "geometry.wall_b");
      break;
    case GeometryKind::PlateSphere:
    case GeometryKind::Suspension:
      g.plate = parse_stack(require(n, "plate", "geometry"), g.fluid, "geometry.plate");
      g.sphere = parse_sphere(require(n, "sphere", "geometry"), "geometry.sphere");
      break;
    case GeometryKind::SphereSphere:
    case GeometryKind::Dicluster:
      g.sphere_a = parse_sphere(require(n, "sphere_a", "geometry"), "geometry.sphere_a");
      g.sphere_b = parse_sphere(require(n, "sphere_b", "geometry"), "geometry.sphere_b");
      if (YAML::Node p = n["plate"]) g.plate = parse_stack(p, g.fluid, "geometry.plate");
      if (YAML::Node ps = n["pairs_nm"]) {
        if (!ps.IsSequence()) throw ParseError("'geometry.pairs_nm' must be a list of [R_a, R_b]", line_of(ps));
        for (const auto& p : ps) {
          if (!p.IsSequence() || p.size() != 2)
            throw ParseError("'geometry.pairs_nm' entries must be [R_a, R_b]", line_of(p));
          g.pairs.emplace_back(positive_length(p[0], "pairs_nm"), positive_length(p[1], "pairs_nm"));
        }
      }
      break;
    case GeometryKind::NormalForm:
      if (YAML::Node c = n["center_nm"]) g.center = as<double>(c, "geometry.center_nm");
      break;
  }
  if (YAML::Node v = n["gravity"]) g.gravity = as<double>(v, "geometry.gravity");
  if (YAML::Node v = n["buoyancy"]) g.buoyancy = as<bool>(v, "geometry.buoyancy");
  if (!(g.gravity >= 0.0)) throw ValidationError("'geometry.gravity' must be nonnegative");
  return g;
}

}  // namespace

const char* geometry_kind_name(GeometryKind k) {
  switch (k) {
    case GeometryKind::SlabSlab: return "slab-slab";
    case GeometryKind::PlateSphere: return "plate-sphere";
    case GeometryKind::SphereSphere: return "sphere-sphere";
    case GeometryKind::Suspension: return "suspension";
    case GeometryKind::Dicluster: return "dicluster";
    case GeometryKind::NormalForm: return "normal-form";
  }
  return "?";
}

std::vector<double> GridSpec::values() const {
  if (points == 1) return {lo};
  return log ? log_grid(lo, hi, points) : linear_grid(lo, hi, points);
}

GridSpec parse_grid(const std::string& spec, double unit, bool log) {
  std::istringstream is(spec);
  std::string a, b, c;
  if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c))
    throw ValidationError("grid '" + spec + "' must look like lo:hi:n");
  GridSpec g;
  try {
    g.lo = std::stod(a) * unit;
    g.hi = std::stod(b) * unit;
    g.points = std::stoi(c);
  } catch (const std::exception&) {
    throw ValidationError("grid '" + spec + "' has a non-numeric field");
  }
  g.log = log;
  if (g.points < 1 || !(g.hi >= g.lo) || (log && !(g.lo > 0.0)))
    throw ValidationError("grid '" + spec + "' needs 0 < lo <= hi and n >= 1");
  return g;
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(origin + ": " + e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
  }
  RunConfig cfg;
  cfg.origin = origin;
  cfg.text = text;
  if (!root || root.IsNull()) return cfg;
  if (!root.IsMap()) throw ParseError(origin + ": top level must be a mapping", line_of(root));
  try {
    if (YAML::Node m = root["materials_file"]) cfg.materials_file = as<std::string>(m, "materials_file");
    if (YAML::Node g = root["geometry"]) cfg.geometry = parse_geometry(g);
    if (YAML::Node s = root["separations"]) cfg.separations = parse_grid_node(s, "separations", kNanometer);
    if (YAML::Node n = root["numerics"]) {
      if (!n.IsMap()) throw ParseError("'numerics' must be a mapping", line_of(n));
      if (n["lmax"]) cfg.scattering.lmax = as<int>(n["lmax"], "numerics.lmax");
      if (n["xi_points"]) cfg.planar.xi_points = cfg.scattering.xi_points = as<int>(n["xi_points"], "numerics.xi_points");
      if (n["k_points"]) cfg.planar.k_points = cfg.scattering.k_points = as<int>(n["k_points"], "numerics.k_points");
      if (n["tolerance"]) cfg.tolerance = as<double>(n["tolerance"], "numerics.tolerance");
      if (n["merge_nm"]) cfg.merge_distance = as<double>(n["merge_nm"], "numerics.merge_nm") * kNanometer;
      if (n["xi_cutoff"]) cfg.scattering.xi_cutoff = as<double>(n["xi_cutoff"], "numerics.xi_cutoff");
      if (n["pfa"]) {
        std::string p = as<std::string>(n["pfa"], "numerics.pfa");
        if (p == "r-scaled") cfg.pfa = PfaNormalization::RScaled;
        else if (p == "caption") cfg.pfa = PfaNormalization::CaptionLiteral;
        else throw ValidationError("'numerics.pfa' must be r-scaled or caption");
      }
      if (cfg.scattering.lmax < 1) throw ValidationError("'numerics.lmax' must be at least 1");
      if (cfg.planar.xi_points < 2 || cfg.planar.k_points < 2)
        throw ValidationError("quadrature point counts must be at least 2");
      if (!(cfg.tolerance > 0.0)) throw ValidationError("'numerics.tolerance' must be positive");
    }
    if (YAML::Node s = root["scan"]) {
      ScanSpec sc;
      sc.parameter = as<std::string>(require(s, "parameter", "scan"), "scan.parameter");
      if (sc.parameter != "radius" && sc.parameter != "thickness" && sc.parameter != "mu")
        throw ValidationError("'scan.parameter' must be radius, thickness or mu");
      if (YAML::Node w = s["wall"]) {
        std::string v = as<std::string>(w, "scan.wall");
        if (v != "a" && v != "b") throw ValidationError("'scan.wall' must be a or b");
        sc.wall = v == "a" ? Wall::A : Wall::B;
      }
      sc.grid = parse_grid_node(s, "scan", sc.parameter == "mu" ? 1.0 : kNanometer);
      cfg.scan = sc;
    }
    if (YAML::Node f = root["fold"]) {
      FoldSpec fs;
      const bool mu = (cfg.scan && cfg.scan->parameter == "mu") || cfg.geometry.kind == GeometryKind::NormalForm;
      const double unit = mu ? 1.0 : kNanometer;
      const std::string sfx = mu ? "" : "_nm";
      fs.lo = as<double>(require(f, "lo" + sfx, "fold"), "fold.lo") * unit;
      fs.hi = as<double>(require(f, "hi" + sfx, "fold"), "fold.hi") * unit;
      if (YAML::Node w = f["width" + sfx]) fs.width = as<double>(w, "fold.width") * unit;
      else if (mu) fs.width = 1e-4;
      if (!(fs.hi > fs.lo) || !(fs.width > 0.0)) throw ValidationError("'fold' needs hi > lo and a positive width");
      cfg.fold = fs;
    }
    if (YAML::Node p = root["pairing"]) {
      PairSpec ps;
      ps.material_a = as<std::string>(require(p, "material_a", "pairing"), "pairing.material_a");
      ps.material_b = as<std::string>(require(p, "material_b", "pairing"), "pairing.material_b");
      std::string mode = p["mode"] ? as<std::string>(p["mode"], "pairing.mode") : "match_h";
      if (mode == "match_h") ps.mode = MatchMode::Height;
      else if (mode == "match_L") ps.mode = MatchMode::CenterHeight;
      else throw ValidationError("'pairing.mode' must be match_h or match_L");
      ps.target = positive_length(require(p, "target_nm", "pairing"), "pairing.target_nm");
      if (YAML::Node r = p["radii"]) ps.radii = parse_grid_node(r, "pairing.radii", kNanometer);
      cfg.pair = ps;
    }
    if (YAML::Node o = root["output"]) {
      if (o["format"]) cfg.format = as<std::string>(o["format"], "output.format");
      if (o["path"]) cfg.out = as<std::string>(o["path"], "output.path");
    }
  } catch (const YAML::Exception& e) {
    throw ParseError(origin + ": " + e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path);
}

}  // namespace casimir::cli
