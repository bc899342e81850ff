#include "casimir/numerics.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "casimir/errors.hpp"

namespace casimir {

const std::pair<std::vector<double>, std::vector<double>>& unit_gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw ConfigError("quadrature order must be positive");

  // Boost returns the nonnegative zeros of P_n in ascending order.
  std::vector<double> pos = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x, w;
  auto weight = [n](double z) {
    double dp = boost::math::legendre_p_prime(n, z);
    return 2.0 / ((1.0 - z * z) * dp * dp);
  };
  for (auto r = pos.rbegin(); r != pos.rend(); ++r) {
    if (*r == 0.0) continue;
    x.push_back(-*r);
    w.push_back(weight(*r));
  }
  for (double z : pos) {
    x.push_back(z);
    w.push_back(weight(z));
  }
  for (size_t i = 0; i < x.size(); ++i) {
    x[i] = 0.5 * (x[i] + 1.0);
    w[i] *= 0.5;
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

SemiInfiniteRule SemiInfiniteRule::make(int n, double scale) {
  if (!(scale > 0.0)) throw ConfigError("quadrature scale must be positive");
  const auto& [t, w] = unit_gauss_legendre(n);
  SemiInfiniteRule r;
  r.n = n;
  r.scale = scale;
  r.nodes.resize(t.size());
  r.weights.resize(t.size());
  for (size_t i = 0; i < t.size(); ++i) {
    double om = 1.0 - t[i];
    r.nodes[i] = scale * t[i] / om;
    r.weights[i] = w[i] * scale / (om * om);
  }
  return r;
}

double integrate_semi_infinite(const std::function<double(double)>& f, const SemiInfiniteRule& rule) {
  double sum = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double v = f(rule.nodes[i]);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "non-finite integrand at node " << i << " (x = " << rule.nodes[i] << ")";
      throw EvaluationError(os.str());
    }
    sum += rule.weights[i] * v;
  }
  return sum;
}

RootResult find_root_bracketed(const std::function<double(double)>& f, double a, double b, double tol,
                               std::optional<double> fa_in, std::optional<double> fb_in) {
  if (a > b) {
    std::swap(a, b);
    std::swap(fa_in, fb_in);
  }
  double fa = fa_in ? *fa_in : f(a);
  double fb = fb_in ? *fb_in : f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) throw EvaluationError("non-finite function value at bracket end");
  int slope = fb > fa ? 1 : (fb < fa ? -1 : 0);
  if (fa == 0.0) return {a, 0.0, slope, 0};
  if (fb == 0.0) return {b, 0.0, slope, 0};
  if (fa * fb > 0.0) {
    std::ostringstream os;
    os << "no sign change on [" << a << ", " << b << "]";
    throw BracketError(os.str());
  }

  double best_x = std::fabs(fa) < std::fabs(fb) ? a : b;
  double best_f = std::min(std::fabs(fa), std::fabs(fb));
  auto g = [&](double x) {
    double v = f(x);
    if (!std::isfinite(v)) throw EvaluationError("non-finite function value during root search");
    if (std::fabs(v) < best_f) {
      best_f = std::fabs(v);
      best_x = x;
    }
    return v;
  };
  auto done = [tol](double lo, double hi) {
    return std::fabs(hi - lo) <= tol * std::min(std::fabs(lo), std::fabs(hi));
  };
  const std::uintmax_t cap = 200;
  std::uintmax_t iters = cap;
  std::pair<double, double> br;
  try {
    br = boost::math::tools::toms748_solve(g, a, b, fa, fb, done, iters);
  } catch (const std::exception& e) {
    throw EvaluationError(std::string("root search failed: ") + e.what());
  }
  if (iters >= cap && !done(br.first, br.second))
    throw ConvergenceError("root search exceeded 200 iterations");
  // Keep the best evaluated point if it lies in the final bracket.
  double x = (best_x >= br.first && best_x <= br.second) ? best_x : 0.5 * (br.first + br.second);
  double res = (x == best_x) ? best_f : std::fabs(f(x));
  return {x, res, slope, static_cast<int>(iters)};
}

std::vector<Bracket> scan_sign_changes(const std::vector<double>& grid, const std::vector<double>& v) {
  std::vector<Bracket> out;
  if (grid.size() < 2 || v.size() != grid.size()) return out;
  if (v[0] == 0.0) out.emplace_back(grid[0], grid[1]);
  for (size_t i = 1; i < grid.size(); ++i) {
    if (v[i] == 0.0) {
      if (v[i - 1] != 0.0) out.emplace_back(grid[i - 1], grid[i]);
    } else if (v[i - 1] != 0.0 && (v[i - 1] < 0.0) != (v[i] < 0.0)) {
      out.emplace_back(grid[i - 1], grid[i]);
    }
  }
  return out;
}

std::vector<Bracket> scan_sign_changes(const std::function<double(double)>& f, const std::vector<double>& grid) {
  std::vector<double> v;
  v.reserve(grid.size());
  for (double x : grid) v.push_back(f(x));
  return scan_sign_changes(grid, v);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<size_t>(std::max(n, 0)));
  if (n == 1) { g[0] = lo; return g; }
  double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = lo * std::exp(step * i);
  if (n > 1) g[n - 1] = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<size_t>(std::max(n, 0)));
  if (n == 1) { g[0] = lo; return g; }
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

}  // namespace casimir
