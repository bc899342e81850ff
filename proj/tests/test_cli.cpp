#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

fs::path scratch_dir() {
  fs::path p = fs::temp_directory_path() / ("casimir_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
  fs::path p = scratch_dir() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

RunResult run(const std::string& args, const std::string& env = "") {
  const fs::path out = scratch_dir() / "stdout.txt";
  const std::string cmd = env + " \"" CASIMIR_CLI_PATH "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  return r;
}

std::string config(const std::string& name) { return std::string("\"") + CASIMIR_CONFIG_DIR + "/" + name + "\""; }

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream is(csv);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("eps prints the default grid") {
  auto r = run("eps");
  REQUIRE(r.status == 0);
  CHECK(data_lines(r.out).size() == 200);
  CHECK(r.out.find("xi [2pi c/um]") != std::string::npos);
  CHECK(r.out.find("# casimir eps config_sha256=") == 0);
}

TEST_CASE("vacuum column is exactly one") {
  auto r = run("eps --materials vacuum,si --xi 0.1:100:20");
  REQUIRE(r.status == 0);
  auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 20);
  for (const auto& row : rows) CHECK(std::stod(split(row, ',')[1]) == 1.0);
}

TEST_CASE("eps crossings are reported") {
  auto r = run("eps --materials sio2,ethanol --crossings");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("# crossings sio2/ethanol [2pi c/um]=") != std::string::npos);
}

TEST_CASE("unknown material and malformed configuration exit with status 1") {
  CHECK(run("eps --materials unobtainium").status == 1);
  CHECK(run("eps --materials perfect_metal").status == 1);
  auto bad = write_file("bad.yaml", "geometry: [unbalanced\n");
  CHECK(run("force --config \"" + bad.string() + "\"").status == 1);
  auto badkind = write_file("badkind.yaml", "geometry: {kind: cube}\n");
  CHECK(run("force --config \"" + badkind.string() + "\"").status == 1);
  CHECK(run("force --definitely-not-a-flag").status == 1);
}

TEST_CASE("slab force table") {
  auto r = run("force --config " + config("slab_teflon_si.yaml") + " --d 50:200:3");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("d [nm],P [Pa],F_norm [1]") != std::string::npos);
  auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(std::stod(split(rows[0], ',')[1]) < 0.0);
  CHECK(std::stod(split(rows[2], ',')[1]) > 0.0);
}

TEST_CASE("index-matched spheres feel no force") {
  auto cfg = write_file("matched.yaml", R"(geometry:
  kind: sphere-sphere
  fluid: ethanol
  sphere_a: {material: ethanol, radius_nm: 100}
  sphere_b: {material: si, radius_nm: 100}
separations: {lo_nm: 20, hi_nm: 200, points: 4}
numerics: {lmax: 4}
)");
  auto r = run("force --config \"" + cfg.string() + "\"");
  REQUIRE(r.status == 0);
  auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) CHECK(std::stod(split(row, ',')[1]) == 0.0);
}

TEST_CASE("output is deterministic across runs and job counts") {
  const std::string args = "equilibria --config " + config("slab_sio2_si.yaml");
  auto a = run(args + " --jobs 1"), b = run(args + " --jobs 1"), c = run(args + " --jobs 3");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("csv and json carry the same numbers") {
  const std::string args = "force --config " + config("slab_sio2_si.yaml") + " --d 20:300:5";
  auto csv = run(args), js = run(args + " --format json");
  REQUIRE(csv.status == 0);
  REQUIRE(js.status == 0);
  auto doc = nlohmann::json::parse(js.out);
  CHECK(doc["provenance"]["command"] == "force");
  auto rows = data_lines(csv.out);
  const auto& jrows = doc["tables"][0]["rows"];
  REQUIRE(rows.size() == jrows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto cells = split(rows[i], ',');
    for (std::size_t j = 0; j < cells.size(); ++j) CHECK(std::stod(cells[j]) == jrows[i][j].get<double>());
  }
}

TEST_CASE("provenance records the configuration hash and numerics") {
  auto r = run("force --config " + config("slab_sio2_si.yaml") + " --d 20:300:2");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("config_sha256=") != std::string::npos);
  CHECK(r.out.find("lmax=") != std::string::npos);
  auto other = run("force --config " + config("slab_sio2_si.yaml") + " --d 20:300:3");
  CHECK(r.out.substr(0, r.out.find('\n')) != other.out.substr(0, other.out.find('\n')));
}

TEST_CASE("equilibria table classifies each zero") {
  auto r = run("equilibria --config " + config("slab_sio2_si.yaml"));
  REQUIRE(r.status == 0);
  auto rows = data_lines(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].find("unstable") != std::string::npos);
  CHECK(rows[1].find(",stable") != std::string::npos);
}

TEST_CASE("fold without a change in count exits with status 2") {
  auto cfg = write_file("nofold.yaml", R"(geometry: {kind: normal-form, center_nm: 1}
separations: {lo_nm: 0.01, hi_nm: 3, points: 101, spacing: linear}
fold: {lo: 0.1, hi: 0.5, width: 1e-3}
)");
  CHECK(run("fold --config \"" + cfg.string() + "\"").status == 2);
  auto ok = run("fold --config " + config("normal_form.yaml"));
  REQUIRE(ok.status == 0);
  CHECK(data_lines(ok.out).size() == 1);
}

TEST_CASE("infeasible dicluster is reported without failing") {
  auto cfg = write_file("dimatched.yaml", R"(geometry:
  kind: dicluster
  fluid: ethanol
  sphere_a: {material: ethanol, radius_nm: 100}
  sphere_b: {material: ethanol, radius_nm: 100}
separations: {lo_nm: 30, hi_nm: 300, points: 6}
numerics: {lmax: 3}
)");
  auto r = run("dicluster --config \"" + cfg.string() + "\"");
  CHECK(r.status == 0);
  CHECK(r.out.find("additive_approx=true") != std::string::npos);
}

TEST_CASE("material overrides from the environment and the command line") {
  auto mats = write_file("mats.yaml", "materials:\n  - name: ethanol\n    variant: constant\n    eps: 1.85\n");
  auto env = run("eps --materials ethanol --xi 1:10:2", "CASIMIR_MATERIALS=\"" + mats.string() + "\"");
  REQUIRE(env.status == 0);
  for (const auto& row : data_lines(env.out)) CHECK(std::stod(split(row, ',')[1]) == 1.85);
  auto flag = run("eps --materials ethanol --xi 1:10:2 --materials-file \"" + mats.string() + "\"");
  REQUIRE(flag.status == 0);
  CHECK(data_lines(flag.out) == data_lines(env.out));
  CHECK(data_lines(run("eps --materials ethanol --xi 1:10:2").out) != data_lines(env.out));
}

TEST_CASE("out flag writes the file") {
  const fs::path out = scratch_dir() / "eps.csv";
  auto r = run("eps --xi 1:10:3 --out \"" + out.string() + "\"");
  REQUIRE(r.status == 0);
  CHECK(r.out.empty());
  CHECK(data_lines(slurp(out)).size() == 3);
}

}
