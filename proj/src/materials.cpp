#include "casimir/materials.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir {

namespace {

template <class... Fs>
struct Overload : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overload(Fs...) -> Overload<Fs...>;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string canonical_name(const std::string& name) {
  static const std::map<std::string, std::string> aliases = {
      {"au", "gold"}, {"silicon", "si"}, {"silica", "sio2"}, {"ptfe", "teflon"},
      {"pec", "perfect_metal"}, {"perfect-metal", "perfect_metal"}};
  std::string key = lower(name);
  auto it = aliases.find(key);
  return it == aliases.end() ? key : it->second;
}

double tabulated_eps(const TabulatedModel& t, double xi) {
  const auto& x = t.xi;
  const auto& e = t.eps;
  if (xi <= x.front()) return e.front();
  if (xi >= x.back()) {
    double a = (e.back() - 1.0) * x.back() * x.back();
    return 1.0 + a / (xi * xi);
  }
  auto hi = std::upper_bound(x.begin(), x.end(), xi);
  size_t j = static_cast<size_t>(hi - x.begin());
  size_t i = j - 1;
  if (xi == x[i]) return e[i];
  double s = (std::log(xi) - std::log(x[i])) / (std::log(x[j]) - std::log(x[i]));
  return std::exp(std::log(e[i]) + s * (std::log(e[j]) - std::log(e[i])));
}

}  // namespace

double permittivity_at(const DielectricModel& model, double xi) {
  if (!(xi >= 0.0)) throw DomainError("permittivity requested at negative frequency xi = " + std::to_string(xi));
  return std::visit(
      Overload{
          [](const ConstantModel& m) { return m.eps; },
          [xi](const DrudeModel& m) {
            if (xi == 0.0) throw DomainError("Drude permittivity diverges at xi = 0");
            return 1.0 + m.plasma * m.plasma / (xi * (xi + m.damping));
          },
          [xi](const OscillatorModel& m) {
            double e = m.eps_inf;
            for (const auto& o : m.terms) {
              double w2 = o.resonance * o.resonance;
              e += o.strength * w2 / (w2 + xi * xi + o.damping * xi);
            }
            return e;
          },
          [xi](const TabulatedModel& m) { return tabulated_eps(m, xi); },
      },
      model);
}

const char* variant_name(const DielectricModel& model) {
  return std::visit(Overload{[](const ConstantModel&) { return "constant"; },
                             [](const DrudeModel&) { return "drude"; },
                             [](const OscillatorModel&) { return "oscillators"; },
                             [](const TabulatedModel&) { return "table"; }},
                    model);
}

void validate_model(const DielectricModel& model, const std::string& name) {
  auto fail = [&](const std::string& why) { throw ValidationError("material '" + name + "': " + why); };
  std::visit(Overload{
                 [&](const ConstantModel& m) {
                   if (!(m.eps >= 1.0)) fail("constant permittivity must be >= 1");
                 },
                 [&](const DrudeModel& m) {
                   if (!(m.plasma >= 0.0)) fail("plasma frequency must be nonnegative");
                   if (!(m.damping >= 0.0)) fail("damping must be nonnegative");
                 },
                 [&](const OscillatorModel& m) {
                   if (!(m.eps_inf >= 1.0)) fail("eps_inf must be >= 1");
                   for (size_t j = 0; j < m.terms.size(); ++j) {
                     const auto& o = m.terms[j];
                     std::string at = "oscillator " + std::to_string(j);
                     if (!(o.strength >= 0.0)) fail(at + " has negative strength");
                     if (!(o.resonance > 0.0)) fail(at + " needs a positive resonance frequency");
                     if (!(o.damping >= 0.0)) fail(at + " has negative damping");
                   }
                 },
                 [&](const TabulatedModel& m) {
                   if (m.xi.size() < 2 || m.xi.size() != m.eps.size())
                     fail("table needs at least two (xi, eps) pairs of equal length");
                   for (size_t i = 0; i < m.xi.size(); ++i) {
                     if (!(m.xi[i] > 0.0)) fail("table frequencies must be positive");
                     if (i > 0 && !(m.xi[i] > m.xi[i - 1])) fail("table frequencies must be strictly increasing");
                     if (!(m.eps[i] >= 1.0)) fail("table permittivities must be >= 1");
                   }
                 },
             },
             model);
}

double Material::eps(double xi) const {
  if (!model) throw DomainError("material '" + name + "' is an ideal conductor and has no permittivity");
  return permittivity_at(*model, xi);
}

MaterialDb MaterialDb::builtins() {
  MaterialDb db;
  db.insert({"vacuum", ConstantModel{1.0}, std::nullopt, "exact"});
  db.insert({"perfect_metal", std::nullopt, std::nullopt, "ideal conductor, |r| = 1"});
  db.insert({"si",
             OscillatorModel{1.035, {{10.835, 6.6e15, 0.0}}},
             2330.0,
             "intrinsic silicon, eps_inf = 1.035, eps_0 = 11.87, w0 = 6.6e15 rad/s "
             "(Bordag, Mohideen, Mostepanenko, Phys. Rep. 353, 1 (2001))"});
  db.insert({"gold",
             DrudeModel{1.37e16, 5.3e13},
             19300.0,
             "Drude gold, wp = 1.37e16 rad/s, gamma = 5.3e13 rad/s "
             "(Lambrecht, Reynaud, Eur. Phys. J. D 8, 309 (2000))"});
  db.insert({"ethanol",
             OscillatorModel{1.0, {{1.190, 6.683e15, 0.0}}},
             789.0,
             "effective single UV oscillator; n^2 = 2.19 in the visible; calibrated with the silica "
             "and teflon entries against planar equilibria in ethanol (docs/materials.md)"});
  db.insert({"sio2",
             OscillatorModel{1.0, {{0.5145, 4.0e16, 0.0}, {2.637, 5.402e14, 0.0}}},
             2200.0,
             "effective UV + IR oscillator fit for fused silica, calibrated against planar "
             "equilibria in ethanol (docs/materials.md)"});
  db.insert({"teflon",
             OscillatorModel{1.0, {{0.3042, 4.0e16, 0.0}, {1.898, 9.874e14, 0.0}}},
             2200.0,
             "effective UV + IR oscillator fit for PTFE, calibrated against planar equilibria in "
             "ethanol (docs/materials.md)"});
  return db;
}

void MaterialDb::insert(Material m) {
  m.name = canonical_name(m.name);
  if (m.model) validate_model(*m.model, m.name);
  if (m.density && !(*m.density > 0.0))
    throw ValidationError("material '" + m.name + "': density must be positive");
  entries_[m.name] = std::move(m);
}

const Material& MaterialDb::lookup(const std::string& name) const {
  auto it = entries_.find(canonical_name(name));
  if (it == entries_.end()) throw LookupError("unknown material '" + name + "'");
  return it->second;
}

bool MaterialDb::contains(const std::string& name) const {
  return entries_.count(canonical_name(name)) > 0;
}

std::vector<std::string> MaterialDb::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : -1; }

double number(const YAML::Node& n, const std::string& what, const std::string& entry) {
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    throw ParseError("material '" + entry + "': field '" + what + "' is not a number", line_of(n));
  }
}

double required(const YAML::Node& sec, const std::string& key, const std::string& entry) {
  YAML::Node n = sec[key];
  if (!n) throw ParseError("material '" + entry + "': missing field '" + key + "'", line_of(sec));
  return number(n, key, entry);
}

std::vector<double> number_list(const YAML::Node& sec, const std::string& key, const std::string& entry) {
  YAML::Node n = sec[key];
  if (!n || !n.IsSequence())
    throw ParseError("material '" + entry + "': field '" + key + "' must be a list", line_of(n ? n : sec));
  std::vector<double> out;
  for (const auto& v : n) out.push_back(number(v, key, entry));
  return out;
}

Material parse_entry(const YAML::Node& sec) {
  if (!sec.IsMap()) throw ParseError("each material entry must be a mapping", line_of(sec));
  YAML::Node nn = sec["name"];
  if (!nn) throw ParseError("material entry without 'name'", line_of(sec));
  std::string name = nn.as<std::string>();
  YAML::Node vn = sec["variant"];
  if (!vn) throw ParseError("material '" + name + "': missing field 'variant'", line_of(sec));
  std::string variant = lower(vn.as<std::string>());

  double fscale = 1.0;
  if (YAML::Node un = sec["unit"]) {
    std::string u = lower(un.as<std::string>());
    if (u == "2pic_um") fscale = kXiUnit;
    else if (u != "rad_s") throw ParseError("material '" + name + "': unknown unit '" + u + "'", line_of(un));
  }

  Material m;
  m.name = name;
  if (YAML::Node d = sec["density_kg_m3"]) {
    double rho = number(d, "density_kg_m3", name);
    if (!(rho > 0.0)) throw ValidationError("material '" + name + "': density must be positive");
    m.density = rho;
  }
  if (YAML::Node s = sec["source"]) m.source = s.as<std::string>();

  if (variant == "constant") {
    m.model = ConstantModel{required(sec, "eps", name)};
  } else if (variant == "drude") {
    double wp = required(sec, "plasma", name) * fscale;
    double g = sec["damping"] ? number(sec["damping"], "damping", name) * fscale : 0.0;
    m.model = DrudeModel{wp, g};
  } else if (variant == "oscillators") {
    OscillatorModel om;
    om.eps_inf = sec["eps_inf"] ? number(sec["eps_inf"], "eps_inf", name) : 1.0;
    YAML::Node terms = sec["oscillators"];
    if (!terms || !terms.IsSequence())
      throw ParseError("material '" + name + "': 'oscillators' must be a list", line_of(terms ? terms : sec));
    for (const auto& t : terms) {
      if (!t.IsSequence() || t.size() < 2 || t.size() > 3)
        throw ParseError("material '" + name + "': oscillator must be [strength, resonance, damping]", line_of(t));
      Oscillator o;
      o.strength = number(t[0], "strength", name);
      o.resonance = number(t[1], "resonance", name) * fscale;
      o.damping = t.size() == 3 ? number(t[2], "damping", name) * fscale : 0.0;
      om.terms.push_back(o);
    }
    m.model = om;
  } else if (variant == "table") {
    TabulatedModel tm;
    tm.xi = number_list(sec, "xi", name);
    for (double& x : tm.xi) x *= fscale;
    tm.eps = number_list(sec, "eps", name);
    m.model = tm;
  } else if (variant == "perfect_metal") {
    m.model = std::nullopt;
  } else {
    throw ParseError("material '" + name + "': unknown variant '" + variant + "'", line_of(vn));
  }
  return m;
}

}  // namespace

void merge_materials_text(MaterialDb& db, const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(origin + ": " + e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
  }
  if (!root || root.IsNull()) return;
  if (!root.IsMap()) throw ParseError(origin + ": top level must be a mapping", line_of(root));
  YAML::Node list = root["materials"];
  if (!list || list.IsNull()) return;
  if (!list.IsSequence()) throw ParseError(origin + ": 'materials' must be a list", line_of(list));
  for (const auto& sec : list) {
    try {
      db.insert(parse_entry(sec));
    } catch (const YAML::Exception& e) {
      throw ParseError(origin + ": " + e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
    }
  }
}

MaterialDb load_materials_text(const std::string& text, const std::string& origin) {
  MaterialDb db = MaterialDb::builtins();
  merge_materials_text(db, text, origin);
  return db;
}

MaterialDb load_materials(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open materials file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_materials_text(ss.str(), path);
}

std::vector<double> find_crossings(const DielectricModel& m1, const DielectricModel& m2, double xi_lo,
                                   double xi_hi, int grid_points) {
  std::vector<double> out;
  if (!(xi_lo > 0.0) || !(xi_hi > xi_lo) || grid_points < 2) return out;
  auto diff = [&](double xi) { return permittivity_at(m1, xi) - permittivity_at(m2, xi); };
  const double step = std::log(xi_hi / xi_lo) / (grid_points - 1);
  double xa = xi_lo;
  double fa = diff(xa);
  for (int i = 1; i < grid_points; ++i) {
    double xb = i == grid_points - 1 ? xi_hi : xi_lo * std::exp(step * i);
    double fb = diff(xb);
    if (fa == 0.0) {
      out.push_back(xa);
    } else if (fa * fb < 0.0) {
      double a = xa, b = xb, ga = fa;
      while ((b - a) > 1e-9 * a) {
        double m = 0.5 * (a + b);
        double gm = diff(m);
        if (gm == 0.0) { a = b = m; break; }
        if ((gm < 0.0) == (ga < 0.0)) { a = m; ga = gm; } else { b = m; }
      }
      out.push_back(0.5 * (a + b));
    }
    xa = xb;
    fa = fb;
  }
  if (fa == 0.0) out.push_back(xa);
  return out;
}

bool repulsion_criterion(const DielectricModel& inner, const DielectricModel& fluid,
                         const DielectricModel& outer, double xi) {
  double a = permittivity_at(inner, xi);
  double f = permittivity_at(fluid, xi);
  double b = permittivity_at(outer, xi);
  return a < f && f < b;
}

}  // namespace casimir
