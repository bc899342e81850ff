#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace casimir {

// Gauss-Legendre on t in (0, 1) mapped to x = s t / (1 - t).
struct SemiInfiniteRule {
  int n = 0;
  double scale = 1.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  static SemiInfiniteRule make(int n, double scale);
  // Same base nodes with a different scale; cheap since the base rule is cached.
  SemiInfiniteRule rescaled(double scale) const { return make(n, scale); }
};

// Gauss-Legendre nodes and weights on (0, 1), ascending. Cached per n.
const std::pair<std::vector<double>, std::vector<double>>& unit_gauss_legendre(int n);

// Throws EvaluationError naming the node when f returns a non-finite value.
double integrate_semi_infinite(const std::function<double(double)>& f, const SemiInfiniteRule& rule);

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int slope_sign = 0;  // sign of f' across the root: +1 for - to +
  int iterations = 0;
};

// Bracketing solve with relative tolerance on x. fa/fb may be supplied when already known.
// BracketError if f(a) f(b) > 0; ConvergenceError if the iteration cap (200) is reached.
RootResult find_root_bracketed(const std::function<double(double)>& f, double a, double b, double tol,
                               std::optional<double> fa = std::nullopt,
                               std::optional<double> fb = std::nullopt);

using Bracket = std::pair<double, double>;

// Adjacent pairs with opposite signs. A sample that is exactly zero closes the
// bracket to its left, so each zero is reported once.
std::vector<Bracket> scan_sign_changes(const std::vector<double>& grid, const std::vector<double>& values);
std::vector<Bracket> scan_sign_changes(const std::function<double(double)>& f, const std::vector<double>& grid);

std::vector<double> log_grid(double lo, double hi, int n);
std::vector<double> linear_grid(double lo, double hi, int n);

}  // namespace casimir
