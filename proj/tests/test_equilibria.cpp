#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "casimir/equilibria.hpp"
#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"

using namespace casimir;

namespace {

PlanarGap gap(const std::string& a, const std::string& b, double d = 0.0) {
  return {LayerStack::semi_infinite(a), LayerStack::semi_infinite(b), "ethanol", d};
}

ForceFamily normal_form() {
  return [](double mu, double d) {
    const double x = d / 1e-9 - 1.0;
    return x * x - mu;
  };
}

EquilibriumOptions normal_form_options() {
  EquilibriumOptions o;
  o.d_lo = 0.01e-9;
  o.d_hi = 3e-9;
  o.grid_points = 601;
  o.merge_distance = 1e-15;
  return o;
}

}  // namespace

TEST_SUITE("equilibria") {

TEST_CASE("synthetic linear force") {
  auto pts = find_equilibria([](double d) { return d - 100e-9; });
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].separation == doctest::Approx(100e-9).epsilon(1e-7));
  CHECK(pts[0].stability == Stability::Stable);
  CHECK(pts[0].slope_sign == 1);
  auto neg = find_equilibria([](double d) { return 100e-9 - d; });
  REQUIRE(neg.size() == 1);
  CHECK(neg[0].stability == Stability::Unstable);
}

TEST_CASE("planar equilibria of the reference material pairs") {
  MaterialDb db = MaterialDb::builtins();
  auto tef = find_equilibria(planar_force(db, gap("teflon", "si")));
  REQUIRE(tef.size() == 1);
  CHECK(tef[0].stability == Stability::Stable);
  CHECK(tef[0].separation == doctest::Approx(120.6e-9).epsilon(0.01));
  auto sio2 = find_equilibria(planar_force(db, gap("sio2", "si")));
  REQUIRE(sio2.size() == 2);
  CHECK(sio2[0].stability == Stability::Unstable);
  CHECK(sio2[1].stability == Stability::Stable);
  CHECK(find_equilibria(planar_force(db, gap("teflon", "sio2"))).empty());
}

TEST_CASE("force sign is constant between equilibria on a refined grid") {
  MaterialDb db = MaterialDb::builtins();
  auto force = planar_force(db, gap("sio2", "si"));
  EquilibriumOptions o;
  auto pts = find_equilibria(force, o);
  auto fine = log_grid(o.d_lo, o.d_hi, 10 * o.grid_points);
  std::vector<double> edges = {o.d_lo};
  for (const auto& p : pts) edges.push_back(p.separation);
  edges.push_back(o.d_hi);
  for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    int sign = 0;
    for (double d : fine) {
      if (d <= edges[seg] * (1 + 1e-6) || d >= edges[seg + 1] * (1 - 1e-6)) continue;
      const int s = force(d) > 0 ? 1 : -1;
      if (sign == 0) sign = s;
      CHECK(s == sign);
    }
  }
}

TEST_CASE("stable and unstable points alternate") {
  auto f = [](double d) {
    const double x = d / 1e-9;
    return (x - 20) * (x - 50) * (x - 90) * (x - 200);
  };
  auto pts = find_equilibria(f);
  REQUIRE(pts.size() == 4);
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].stability != pts[i - 1].stability);
}

TEST_CASE("rescaling the force leaves the equilibria unchanged") {
  MaterialDb db = MaterialDb::builtins();
  auto force = planar_force(db, gap("sio2", "si"));
  auto a = find_equilibria(force);
  auto b = find_equilibria([&](double d) { return 1e-20 * force(d); });
  auto c = find_equilibria([&](double d) { return 1e6 * force(d); });
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == c.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].separation == doctest::Approx(b[i].separation).epsilon(1e-6));
    CHECK(a[i].separation == doctest::Approx(c[i].separation).epsilon(1e-6));
    CHECK(a[i].stability == b[i].stability);
  }
}

TEST_CASE("nearly coincident roots are merged") {
  auto f = [](double d) { return (d - 100.0e-9) * (d - 100.3e-9); };
  EquilibriumOptions o;
  o.d_lo = 99e-9;
  o.d_hi = 102e-9;
  o.grid_points = 301;
  auto pts = find_equilibria(f, o);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].merged);
  CHECK(pts[0].multiplicity == 2);
  CHECK(equilibrium_count(pts) == 2);
  o.merge_distance = 0.1e-9;
  CHECK(find_equilibria(f, o).size() == 2);
}

TEST_CASE("identically vanishing force has no equilibria") {
  CHECK(find_equilibria([](double) { return 0.0; }).empty());
}

TEST_CASE("invalid separation ranges") {
  EquilibriumOptions o;
  o.d_lo = 0.0;
  CHECK_THROWS_AS(find_equilibria([](double d) { return d; }, o), ValidationError);
  o.d_lo = 2e-7;
  o.d_hi = 1e-7;
  CHECK_THROWS_AS(find_equilibria([](double d) { return d; }, o), ValidationError);
}

TEST_CASE("scan records failures per grid value") {
  ForceFamily fam = [](double p, double d) {
    if (p == 2.0) throw EvaluationError("synthetic failure");
    return d - p * 50e-9;
  };
  auto scan = scan_parameter(fam, "test", {1.0, 2.0, 3.0});
  REQUIRE(scan.entries.size() == 3);
  CHECK(!scan.entries[0].error);
  CHECK(scan.entries[1].error);
  CHECK(scan.entries[1].error->find("synthetic") != std::string::npos);
  REQUIRE(scan.entries[2].points.size() == 1);
  CHECK(scan.entries[2].points[0].separation == doctest::Approx(150e-9).epsilon(1e-7));
  CHECK_THROWS_AS(scan_parameter(fam, "test", {1.0, 1.0}), ValidationError);
}

TEST_CASE("parallel scan equals serial scan") {
  MaterialDb db = MaterialDb::builtins();
  auto fam = slab_thickness_family(db, {LayerStack::coated("si", 100e-9, "sio2"), LayerStack::semi_infinite("sio2"), "ethanol", 0.0}, Wall::A);
  auto grid = log_grid(5e-9, 500e-9, 7);
  auto s1 = scan_parameter(fam, "thickness", grid, {}, 1);
  auto s3 = scan_parameter(fam, "thickness", grid, {}, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    REQUIRE(s1.entries[i].points.size() == s3.entries[i].points.size());
    for (std::size_t j = 0; j < s1.entries[i].points.size(); ++j)
      CHECK(s1.entries[i].points[j].separation == s3.entries[i].points[j].separation);
  }
}

TEST_CASE("normal-form fold") {
  auto f = find_fold(normal_form(), -0.5, 0.5, normal_form_options(), 1e-4);
  CHECK(std::fabs(f.critical) < 1e-3);
  CHECK(f.separation == doctest::Approx(1e-9).epsilon(1e-2));
  CHECK(f.count_lo == 0);
  CHECK(f.count_hi == 2);
  CHECK(f.bracket_hi - f.bracket_lo <= 1e-4);
  CHECK_THROWS_AS(find_fold(normal_form(), 0.1, 0.5, normal_form_options(), 1e-4), BracketError);
  CHECK_THROWS_AS(find_fold(normal_form(), 0.5, 0.1, normal_form_options(), 1e-4), ValidationError);
}

TEST_CASE("thick film approaches the half-space equilibrium") {
  MaterialDb db = MaterialDb::builtins();
  auto fam = slab_thickness_family(db, {LayerStack::coated("teflon", 100e-9, "teflon"), LayerStack::semi_infinite("si"), "ethanol", 0.0}, Wall::A);
  const double semi = find_equilibria(planar_force(db, gap("teflon", "si")))[0].separation;
  for (double t : {50e-9, 200e-9, 2000e-9}) {
    auto pts = find_equilibria([&](double d) { return fam(t, d); });
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].separation == doctest::Approx(semi).epsilon(1e-6));
  }
  auto film = slab_thickness_family(db, {LayerStack::film("teflon", 100e-9, "ethanol"), LayerStack::semi_infinite("si"), "ethanol", 0.0}, Wall::A);
  auto far = find_equilibria([&](double d) { return film(5000e-9, d); });
  REQUIRE(far.size() == 1);
  CHECK(far[0].separation == doctest::Approx(semi).epsilon(1e-3));
}

TEST_CASE("plate-sphere radius scan has one stable point per radius") {
  MaterialDb db = MaterialDb::builtins();
  PlateSphereGeometry base{LayerStack::semi_infinite("si"), {100e-9, "teflon"}, "ethanol", 0.0};
  ScatteringSettings s;
  s.lmax = 12;
  auto fam = plate_sphere_radius_family(db, base, s);
  EquilibriumOptions o;
  o.d_lo = 40e-9;
  o.d_hi = 300e-9;
  o.grid_points = 16;
  auto scan = scan_parameter(fam, "radius", {20e-9, 50e-9, 120e-9}, o);
  double prev = INFINITY;
  for (const auto& e : scan.entries) {
    REQUIRE(!e.error);
    REQUIRE(e.points.size() == 1);
    CHECK(e.points[0].stability == Stability::Stable);
    CHECK(e.points[0].separation < prev);
    prev = e.points[0].separation;
  }
}

}
