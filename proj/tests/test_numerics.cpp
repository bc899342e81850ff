#include <doctest.h>

#include <cmath>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"

using namespace casimir;

TEST_SUITE("numerics") {

TEST_CASE("semi-infinite quadrature examples") {
  auto r1 = SemiInfiniteRule::make(40, 1.0);
  CHECK(integrate_semi_infinite([](double x) { return std::exp(-x); }, r1) == doctest::Approx(1.0).epsilon(1e-8));
  auto r3 = SemiInfiniteRule::make(40, 3.0);
  CHECK(integrate_semi_infinite([](double x) { return x * x * x * std::exp(-x); }, r3) ==
        doctest::Approx(6.0).epsilon(1e-6));
  auto bose = [](double x) { return x / std::expm1(x); };
  CHECK(integrate_semi_infinite(bose, r1) == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-6));
}

TEST_CASE("doubling the node count changes results by < 1e-6") {
  auto f1 = [](double x) { return std::exp(-x); };
  auto f2 = [](double x) { return x * x * x * std::exp(-x); };
  auto f3 = [](double x) { return x / std::expm1(x); };
  for (auto [f, s] : {std::pair<std::function<double(double)>, double>{f1, 1.0}, {f2, 3.0}, {f3, 1.0}}) {
    const double a = integrate_semi_infinite(f, SemiInfiniteRule::make(40, s));
    const double b = integrate_semi_infinite(f, SemiInfiniteRule::make(80, s));
    CHECK(std::fabs(a - b) < 1e-6 * std::fabs(b));
  }
}

TEST_CASE("rule nodes, weights and polynomial exactness") {
  const int n = 12;
  const double s = 2.5;
  auto r = SemiInfiniteRule::make(n, s);
  REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    CHECK(r.nodes[i] > 0.0);
    CHECK(r.weights[i] > 0.0);
    if (i) CHECK(r.nodes[i] > r.nodes[i - 1]);
  }
  // With t = x / (s + x) the integrand g(t) (1 - t)^2 / s integrates g over (0, 1);
  // Gauss-Legendre is exact for degree <= 2n - 1.
  for (int k = 0; k <= 2 * n - 1; ++k) {
    auto f = [&](double x) {
      const double t = x / (s + x);
      return std::pow(t, k) * (1 - t) * (1 - t) / s;
    };
    CHECK(integrate_semi_infinite(f, r) == doctest::Approx(1.0 / (k + 1)).epsilon(1e-12));
  }
}

TEST_CASE("non-finite integrand names the node") {
  auto r = SemiInfiniteRule::make(10, 1.0);
  CHECK_THROWS_AS(integrate_semi_infinite([](double) { return NAN; }, r), EvaluationError);
}

TEST_CASE("bracketed roots") {
  auto c = find_root_bracketed([](double x) { return std::cos(x); }, 1.0, 2.0, 1e-12);
  CHECK(c.x == doctest::Approx(kPi / 2).epsilon(1e-11));
  CHECK(c.slope_sign == -1);
  CHECK(std::fabs(c.residual) < 1e-10);
  auto s = find_root_bracketed([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-12);
  CHECK(s.x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
  CHECK(s.slope_sign == 1);
  auto t = find_root_bracketed([](double x) { return std::pow(x - 1.0, 3); }, 0.0, 2.0, 1e-10);
  CHECK(t.x == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(t.x >= 0.0);
  CHECK(t.x <= 2.0);
  CHECK_THROWS_AS(find_root_bracketed([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-10), BracketError);
}

TEST_CASE("root is invariant under monotone positive rescaling") {
  auto f = [](double x) { return std::tanh(x - 0.3) + 0.1 * (x - 0.3); };
  const double x0 = find_root_bracketed(f, -2.0, 3.0, 1e-12).x;
  for (double a : {1e-20, 1e-3, 7.0, 1e15}) {
    const double x = find_root_bracketed([&](double y) { return a * f(y); }, -2.0, 3.0, 1e-12).x;
    CHECK(x == doctest::Approx(x0).epsilon(1e-10));
    const double xc = find_root_bracketed([&](double y) { return std::cbrt(f(y)); }, -2.0, 3.0, 1e-12).x;
    CHECK(xc == doctest::Approx(x0).epsilon(1e-10));
  }
}

TEST_CASE("sign change scan") {
  auto b = scan_sign_changes([](double x) { return std::sin(x); }, {1, 2, 3, 4});
  REQUIRE(b.size() == 1);
  CHECK(b[0].first == 3);
  CHECK(b[0].second == 4);
  CHECK(scan_sign_changes([](double) { return 2.0; }, linear_grid(0, 1, 10)).empty());
  auto two = scan_sign_changes([](double x) { return (x - 1) * (x - 2) * (x + 5); }, linear_grid(0.01, 3.0, 100));
  REQUIRE(two.size() == 2);
  CHECK(two[0].first < 1.0);
  CHECK(two[0].second > 1.0);
  CHECK(two[1].first < 2.0);
  CHECK(two[1].second > 2.0);
  // A sample exactly at zero closes the bracket on its left and is reported once.
  auto z = scan_sign_changes(std::vector<double>{0, 1, 2, 3}, std::vector<double>{-1, 0, 1, 2});
  REQUIRE(z.size() == 1);
  CHECK(z[0].first == 0);
  CHECK(z[0].second == 1);
}

TEST_CASE("grids") {
  auto g = log_grid(10e-9, 500e-9, 60);
  CHECK(g.size() == 60);
  CHECK(g.front() == 10e-9);
  CHECK(g.back() == 500e-9);
  CHECK(g[1] / g[0] == doctest::Approx(g[59] / g[58]));
  auto l = linear_grid(0.0, 1.0, 5);
  CHECK(l[2] == doctest::Approx(0.5));
}

}
