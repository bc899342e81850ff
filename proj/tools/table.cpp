#include "table.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <iomanip>
#include "json.hpp"
#include <ostream>
#include <sstream>

namespace casimir::cli {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  if (std::holds_alternative<std::string>(c)) return csv_escape(std::get<std::string>(c));
  return "";
}

nlohmann::ordered_json cell_json(const Cell& c, double scale) {
  if (std::holds_alternative<double>(c)) {
    double v = std::get<double>(c);
    if (!std::isfinite(v)) return format_number(v);
    return rounded(scale == 1.0 ? v : v * scale);
  }
  if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

std::string provenance_line(const Provenance& p) {
  std::ostringstream os;
  os << "# casimir " << p.command << " config_sha256=" << p.config_hash << " lmax=" << p.lmax
     << " xi_points=" << p.xi_points << " k_points=" << p.k_points;
  return os.str();
}

}  // namespace

double rounded(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  return std::stod(format_number(v));
}

void write_csv(std::ostream& os, const Provenance& p, const std::vector<Table>& tables) {
  os << provenance_line(p) << "\n";
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const Table& tab = tables[t];
    if (t) os << "\n";
    os << "# table " << tab.name << "\n";
    for (const auto& [k, v] : tab.meta) os << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < tab.columns.size(); ++i) {
      if (i) os << ",";
      const Column& c = tab.columns[i];
      os << c.name;
      if (!c.unit.empty()) os << " [" << c.unit << "]";
    }
    os << "\n";
    for (const auto& row : tab.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ",";
        os << cell_text(row[i]);
      }
      os << "\n";
    }
  }
}

void write_json(std::ostream& os, const Provenance& p, const std::vector<Table>& tables) {
  nlohmann::ordered_json doc;
  doc["provenance"] = {{"command", p.command},
                       {"config_sha256", p.config_hash},
                       {"lmax", p.lmax},
                       {"xi_points", p.xi_points},
                       {"k_points", p.k_points}};
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Table& tab : tables) {
    nlohmann::ordered_json jt;
    jt["name"] = tab.name;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : tab.meta) meta[k] = v;
    jt["meta"] = meta;
    nlohmann::ordered_json cols = nlohmann::ordered_json::array();
    for (const Column& c : tab.columns) {
      nlohmann::ordered_json jc = {{"name", c.name}, {"unit", c.unit}};
      if (!c.si_unit.empty()) jc["si_unit"] = c.si_unit;
      cols.push_back(jc);
    }
    jt["columns"] = cols;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array(), rows_si = nlohmann::ordered_json::array();
    for (const auto& row : tab.rows) {
      nlohmann::ordered_json r = nlohmann::ordered_json::array(), rs = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < row.size(); ++i) {
        const Column& c = tab.columns[i];
        r.push_back(cell_json(row[i], 1.0));
        rs.push_back(cell_json(row[i], c.si_unit.empty() ? 1.0 : c.si_scale));
      }
      rows.push_back(r);
      rows_si.push_back(rs);
    }
    jt["rows"] = rows;
    jt["rows_si"] = rows_si;
    arr.push_back(jt);
  }
  doc["tables"] = arr;
  os << doc.dump(2) << "\n";
}

}  // namespace casimir::cli
