#include <doctest.h>

#include <cmath>

#include "casimir/errors.hpp"
#include "casimir/suspension.hpp"

using namespace casimir;

namespace {

SuspendedSphere over_gold(const std::string& m, double radius) {
  return {{radius, m}, LayerStack::semi_infinite("gold"), "ethanol"};
}

SuspensionOptions quick() {
  SuspensionOptions o;
  o.heights.d_lo = 40e-9;
  o.heights.d_hi = 400e-9;
  o.heights.grid_points = 20;
  o.scattering.lmax = 14;
  return o;
}

}  // namespace

TEST_SUITE("suspension") {

TEST_CASE("effective weight") {
  MaterialDb db = MaterialDb::builtins();
  auto cfg = over_gold("teflon", 100e-9);
  const double vol = 4.0 / 3.0 * kPi * 1e-21;
  CHECK(effective_weight(db, cfg) == doctest::Approx((2200.0 - 789.0) * vol * kStandardGravity));
  cfg.buoyancy = false;
  CHECK(effective_weight(db, cfg) == doctest::Approx(2200.0 * vol * kStandardGravity));
  Material ethanol_twin = db.lookup("ethanol");
  ethanol_twin.name = "ethanol_twin";
  db.insert(ethanol_twin);
  CHECK(effective_weight(db, over_gold("ethanol_twin", 100e-9)) == 0.0);
  CHECK(net_vertical_force(db, over_gold("ethanol_twin", 100e-9), 50e-9) == 0.0);
}

TEST_CASE("built-in densities") {
  MaterialDb db = MaterialDb::builtins();
  CHECK(*db.lookup("si").density == 2330.0);
  CHECK(*db.lookup("gold").density == 19300.0);
  CHECK(*db.lookup("teflon").density == 2200.0);
  CHECK(*db.lookup("sio2").density == 2200.0);
  CHECK(*db.lookup("ethanol").density == 789.0);
}

TEST_CASE("missing density is rejected") {
  MaterialDb db = MaterialDb::builtins();
  db.insert({"nodensity", ConstantModel{2.0}, std::nullopt, "test"});
  CHECK_THROWS_AS(effective_weight(db, over_gold("nodensity", 100e-9)), ValidationError);
  CHECK_THROWS_AS(effective_weight(db, over_gold("teflon", 0.0)), ValidationError);
  CHECK_THROWS_AS(net_vertical_force(db, over_gold("teflon", 100e-9), 0.0), ValidationError);
}

TEST_CASE("far from the slab only the weight remains") {
  MaterialDb db = MaterialDb::builtins();
  auto cfg = over_gold("teflon", 100e-9);
  const double w = effective_weight(db, cfg);
  CHECK(net_vertical_force(db, cfg, 20e-6, quick().scattering) == doctest::Approx(-w).epsilon(1e-3));
}

TEST_CASE("teflon sphere floats above gold") {
  MaterialDb db = MaterialDb::builtins();
  auto cfg = over_gold("teflon", 100e-9);
  auto opt = quick();
  auto res = solve_heights(db, cfg, opt);
  REQUIRE(res.suspendable);
  CHECK(*res.h_c > 60e-9);
  CHECK(*res.h_c < 150e-9);
  CHECK(*res.L_c == doctest::Approx(*res.h_c + 100e-9));
  CHECK(*res.stiffness < 0.0);
  const double w = effective_weight(db, cfg);
  CHECK(std::fabs(net_vertical_force(db, cfg, *res.h_c, opt.scattering)) < 1e-6 * w);
  CHECK(net_vertical_force(db, cfg, 0.8 * *res.h_c, opt.scattering) > 0.0);
  CHECK(net_vertical_force(db, cfg, 1.2 * *res.h_c, opt.scattering) < 0.0);
}

TEST_CASE("center height follows from the surface height") {
  MaterialDb db = MaterialDb::builtins();
  auto curve = height_curve(db, over_gold("teflon", 50e-9), {50e-9, 150e-9}, quick(), 2);
  for (const auto& p : curve) {
    REQUIRE(!p.error);
    REQUIRE(p.result.suspendable);
    CHECK(*p.result.L_c == doctest::Approx(*p.result.h_c + p.radius));
  }
  CHECK(*curve[1].result.h_c < *curve[0].result.h_c);
}

TEST_CASE("pairing a material with itself returns equal radii") {
  MaterialDb db = MaterialDb::builtins();
  PairingRequest req;
  req.material_a = req.material_b = "teflon";
  req.slab = LayerStack::semi_infinite("gold");
  req.fluid = "ethanol";
  req.target = 100e-9;
  req.r_lo = 40e-9;
  req.r_hi = 160e-9;
  req.radius_points = 4;
  auto res = pair_radii(db, req, quick());
  CHECK(res.a.radius == doctest::Approx(res.b.radius).epsilon(1e-9));
  CHECK(std::fabs(res.a.height - 100e-9) < 1e-9);
  auto cfg = over_gold("teflon", res.a.radius);
  CHECK(std::fabs(*solve_heights(db, cfg, quick()).h_c - 100e-9) < 1e-9);
  CHECK(res.overlap_lo < 100e-9);
  CHECK(res.overlap_hi > 100e-9);
  req.target = 10e-6;
  CHECK_THROWS_AS(pair_radii(db, req, quick()), RangeError);
  req.target = -1.0;
  CHECK_THROWS_AS(pair_radii(db, req, quick()), ValidationError);
}

TEST_CASE("index-matched dicluster is infeasible") {
  MaterialDb db = MaterialDb::builtins();
  EquilibriumOptions eq;
  eq.grid_points = 8;
  ScatteringSettings s;
  s.lmax = 4;
  auto d = design_dicluster(db, {100e-9, "ethanol"}, {100e-9, "ethanol"}, "ethanol", eq, s);
  CHECK(!d.feasible);
  CHECK(!d.gap);
  CHECK(d.additive_approx);
  CHECK(d.equilibria.empty());
}

}
