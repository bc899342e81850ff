#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/materials.hpp"

using namespace casimir;

TEST_SUITE("materials") {

TEST_CASE("closed-form permittivities") {
  CHECK(permittivity_at(ConstantModel{2.5}, 3e15) == doctest::Approx(2.5));
  const double w0 = 5e15;
  CHECK(permittivity_at(OscillatorModel{1.0, {{10.0, w0, 0.0}}}, w0) == doctest::Approx(6.0).epsilon(1e-14));
  const double wp = 1e16;
  CHECK(permittivity_at(DrudeModel{wp, 0.0}, wp) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(permittivity_at(DrudeModel{1e16, 1e13}, 0.0), DomainError);
  CHECK_THROWS_AS(permittivity_at(ConstantModel{2.0}, -1.0), DomainError);
  CHECK_THROWS_AS(permittivity_at(OscillatorModel{1.0, {{1.0, 1e15, 0.0}}}, -1e15), DomainError);
  CHECK(permittivity_at(OscillatorModel{1.0, {{1.0, 1e15, 0.0}}}, 0.0) == doctest::Approx(2.0));
  MaterialDb db = MaterialDb::builtins();
  CHECK_THROWS_AS(db.lookup("perfect_metal").eps(1e15), DomainError);
}

TEST_CASE("crossings") {
  CHECK(find_crossings(ConstantModel{2.0}, ConstantModel{3.0}, 1e13, 1e17, 100).empty());

  // 1 + C w0^2 / (w0^2 + xi^2) = e_c  <=>  xi = w0 sqrt(C / (e_c - 1) - 1); e_c = 1 + C/2 puts it at w0.
  const double w0 = 4e15, C = 10.0;
  const double ec = 1.0 + C / 2.0;
  auto cr = find_crossings(OscillatorModel{1.0, {{C, w0, 0.0}}}, ConstantModel{ec}, 1e14, 1e17, 50);
  REQUIRE(cr.size() == 1);
  CHECK(cr[0] == doctest::Approx(w0).epsilon(1e-8));

  MaterialDb db = MaterialDb::builtins();
  auto se = find_crossings(*db.lookup("sio2").model, *db.lookup("ethanol").model, xi_from_cli(0.1), xi_from_cli(100), 1000);
  CHECK(se.size() == 2);
  CHECK(std::is_sorted(se.begin(), se.end()));
}

TEST_CASE("crossing residual is tiny") {
  MaterialDb db = MaterialDb::builtins();
  const auto names = db.names();
  for (const auto& a : names)
    for (const auto& b : names) {
      if (a >= b) continue;
      const Material &ma = db.lookup(a), &mb = db.lookup(b);
      if (ma.is_perfect_conductor() || mb.is_perfect_conductor()) continue;
      for (double x : find_crossings(*ma.model, *mb.model, 1e12, 1e17, 400)) {
        const double e1 = ma.eps(x), e2 = mb.eps(x);
        CHECK(std::fabs(e1 - e2) < 1e-6 * e1);
      }
    }
}

TEST_CASE("repulsion criterion") {
  CHECK(repulsion_criterion(ConstantModel{1}, ConstantModel{2}, ConstantModel{3}, 1e15));
  MaterialDb db = MaterialDb::builtins();
  const auto& tef = *db.lookup("teflon").model;
  const auto& eth = *db.lookup("ethanol").model;
  const auto& si = *db.lookup("si").model;
  const double xi = xi_from_cli(5.0);
  // Oracle: evaluate the three permittivities directly.
  const bool expected = permittivity_at(tef, xi) < permittivity_at(eth, xi) && permittivity_at(eth, xi) < permittivity_at(si, xi);
  CHECK(expected);
  CHECK(repulsion_criterion(tef, eth, si, xi) == expected);
  CHECK_FALSE(repulsion_criterion(si, eth, tef, xi));
}

TEST_CASE("repulsion criterion is antisymmetric in the walls") {
  MaterialDb db = MaterialDb::builtins();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lx(std::log(1e12), std::log(1e17));
  std::vector<std::string> dielectric;
  for (const auto& n : db.names())
    if (!db.lookup(n).is_perfect_conductor()) dielectric.push_back(n);
  for (int it = 0; it < 500; ++it) {
    const auto& a = *db.lookup(dielectric[rng() % dielectric.size()]).model;
    const auto& f = *db.lookup(dielectric[rng() % dielectric.size()]).model;
    const auto& b = *db.lookup(dielectric[rng() % dielectric.size()]).model;
    const double xi = std::exp(lx(rng));
    CHECK_FALSE((repulsion_criterion(a, f, b, xi) && repulsion_criterion(b, f, a, xi)));
  }
}

TEST_CASE("built-in models are >= 1 and nonincreasing") {
  MaterialDb db = MaterialDb::builtins();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lx(std::log(1e12), std::log(1e17));
  std::vector<double> xs(1000);
  for (double& x : xs) x = std::exp(lx(rng));
  std::sort(xs.begin(), xs.end());
  for (const auto& n : db.names()) {
    const Material& m = db.lookup(n);
    CHECK_FALSE(m.source.empty());
    if (m.is_perfect_conductor()) continue;
    double prev = INFINITY;
    for (double x : xs) {
      const double e = m.eps(x);
      CHECK(e >= 1.0);
      CHECK(e <= prev);
      prev = e;
    }
  }
}

TEST_CASE("asymptotes") {
  OscillatorModel o{1.7, {{2.0, 1e15, 1e13}}};
  CHECK(permittivity_at(o, 1e22) == doctest::Approx(1.7).epsilon(1e-9));
  DrudeModel d{1e16, 1e13};
  CHECK(permittivity_at(d, 1e24) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(permittivity_at(d, 1e3) > 1e15);
}

TEST_CASE("tabulated model reproduces nodes and extrapolates") {
  TabulatedModel t{{1e14, 1e15, 1e16}, {5.0, 3.0, 1.5}};
  for (std::size_t i = 0; i < t.xi.size(); ++i) CHECK(permittivity_at(t, t.xi[i]) == doctest::Approx(t.eps[i]).epsilon(1e-14));
  CHECK(permittivity_at(t, 1e12) == doctest::Approx(5.0));
  // Above the table: 1 + A / xi^2 continuous at the last node.
  const double A = 0.5 * 1e32;
  CHECK(permittivity_at(t, 1e17) == doctest::Approx(1.0 + A / 1e34).epsilon(1e-12));
  CHECK_THROWS_AS(validate_model(TabulatedModel{{1e15, 1e14}, {2.0, 3.0}}, "bad"), ValidationError);
}

TEST_CASE("material files") {
  MaterialDb empty = load_materials_text("", "<empty>");
  CHECK(empty.names() == MaterialDb::builtins().names());

  MaterialDb db = load_materials_text(R"(
materials:
  - name: ethanol
    variant: constant
    eps: 1.85
)");
  const Material& e = db.lookup("ethanol");
  REQUIRE(e.model);
  CHECK(std::holds_alternative<ConstantModel>(*e.model));
  CHECK(e.eps(1e15) == doctest::Approx(1.85));

  CHECK_THROWS_AS(load_materials_text(R"(
materials:
  - name: broken
    variant: oscillators
    oscillators: [[-1.0, 1e15, 0.0]]
)"),
                  ValidationError);
  CHECK_THROWS_AS(load_materials_text(R"(
materials:
  - name: heavy
    variant: constant
    eps: 2.0
    density_kg_m3: -5
)"),
                  ValidationError);
  try {
    load_materials_text("materials:\n  - name: x\n    variant: nonsense\n", "f.yaml");
    FAIL("expected a parse error");
  } catch (const ParseError& ex) {
    CHECK(ex.line() == 3);
  }
  CHECK_THROWS_AS(db.lookup("unobtainium"), LookupError);
}

TEST_CASE("frequency unit flag") {
  MaterialDb db = load_materials_text(R"(
materials:
  - name: osc
    variant: oscillators
    unit: 2pic_um
    oscillators: [[10.0, 1.0, 0.0]]
)");
  CHECK(db.lookup("osc").eps(kXiUnit) == doctest::Approx(6.0).epsilon(1e-12));
}

}
