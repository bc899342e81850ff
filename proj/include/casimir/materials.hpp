#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace casimir {

struct ConstantModel {
  double eps = 1.0;
};

struct DrudeModel {
  double plasma = 0.0;   // rad/s
  double damping = 0.0;  // rad/s
};

struct Oscillator {
  double strength = 0.0;
  double resonance = 0.0;  // rad/s
  double damping = 0.0;    // rad/s
};

struct OscillatorModel {
  double eps_inf = 1.0;
  std::vector<Oscillator> terms;
};

// Log-log interpolation between nodes. Below the first node the first value
// is held; above the last node eps decays as 1 + A/xi^2, continuous at the node.
struct TabulatedModel {
  std::vector<double> xi;   // rad/s, strictly increasing, > 0
  std::vector<double> eps;  // >= 1
};

using DielectricModel = std::variant<ConstantModel, DrudeModel, OscillatorModel, TabulatedModel>;

// eps(i xi). Throws DomainError for xi < 0 and for xi == 0 with a Drude model.
double permittivity_at(const DielectricModel& model, double xi);

// Throws ValidationError if parameters violate eps >= 1 or table ordering.
void validate_model(const DielectricModel& model, const std::string& name);

const char* variant_name(const DielectricModel& model);

struct Material {
  std::string name;
  // Empty for the ideal conductor, which is handled as |r| = 1 by callers.
  std::optional<DielectricModel> model;
  std::optional<double> density;  // kg/m^3
  std::string source;

  bool is_perfect_conductor() const { return !model.has_value(); }
  // Throws DomainError for the ideal conductor.
  double eps(double xi) const;
};

class MaterialDb {
 public:
  static MaterialDb builtins();

  void insert(Material m);  // replaces an entry with the same name
  const Material& lookup(const std::string& name) const;  // LookupError when absent
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Material> entries_;
};

// Built-ins merged with the entries of a YAML materials file.
MaterialDb load_materials(const std::string& path);
// Same, from an in-memory document (used by tests and config files).
MaterialDb load_materials_text(const std::string& text, const std::string& origin = "<string>");
// Merge the entries of a parsed document into an existing database.
void merge_materials_text(MaterialDb& db, const std::string& text, const std::string& origin);

// Sign changes of eps1 - eps2 on a log-spaced grid, bisected to 1e-9 relative.
std::vector<double> find_crossings(const DielectricModel& m1, const DielectricModel& m2, double xi_lo,
                                   double xi_hi, int grid_points);

// eps_inner < eps_fluid < eps_outer, strictly.
bool repulsion_criterion(const DielectricModel& inner, const DielectricModel& fluid,
                         const DielectricModel& outer, double xi);

}  // namespace casimir
