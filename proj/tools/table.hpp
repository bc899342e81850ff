#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace casimir::cli {

struct Column {
  std::string name;
  std::string unit;     // display unit, "1" for dimensionless, "" for text
  double si_scale = 1.0;  // display value times si_scale gives the SI value
  std::string si_unit;    // empty when the display unit is already SI or text
};

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> meta;  // ordered key/value notes
};

struct Provenance {
  std::string command;
  std::string config_hash;  // hex SHA-256
  int lmax = 0;
  int xi_points = 0;
  int k_points = 0;
};

std::string sha256_hex(const std::string& data);

// Numbers are rounded to 10 significant digits so both formats carry the
// same values.
double rounded(double v);

void write_csv(std::ostream& os, const Provenance& p, const std::vector<Table>& tables);
void write_json(std::ostream& os, const Provenance& p, const std::vector<Table>& tables);

}  // namespace casimir::cli
