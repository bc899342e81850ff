#include "casimir/planar.hpp"

#include <cmath>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"

namespace casimir {

void LayerStack::validate() const {
  if (layers.empty()) throw ValidationError("layer stack needs at least one layer");
  for (size_t i = 0; i + 1 < layers.size(); ++i) {
    const auto& t = layers[i].thickness;
    if (!t) throw ValidationError("only the last layer of a stack may be a half-space");
    if (!(*t > 0.0)) throw ValidationError("layer thickness must be positive");
  }
  if (layers.back().thickness) throw ValidationError("the last layer of a stack must be a half-space");
}

std::string LayerStack::describe() const {
  std::ostringstream os;
  for (size_t i = 0; i < layers.size(); ++i) {
    if (i) os << "|";
    os << layers[i].material;
    if (layers[i].thickness) os << "(" << *layers[i].thickness / kNanometer << "nm)";
  }
  return os.str();
}

StackReflector::StackReflector(const MaterialDb& db, const LayerStack& stack, const std::string& fluid)
    : fluid_(&db.lookup(fluid)) {
  stack.validate();
  if (fluid_->is_perfect_conductor()) throw ValidationError("the gap medium cannot be a perfect conductor");
  for (const auto& l : stack.layers) {
    layers_.push_back({&db.lookup(l.material), l.thickness});
    if (layers_.back().material->is_perfect_conductor()) break;
  }
}

bool StackReflector::perfect_conductor_surface() const { return layers_.front().material->is_perfect_conductor(); }

void StackReflector::evaluate(double xi, const double* k2, const double* kappa_f, std::size_t n, double* rte,
                              double* rtm, const kernels::KernelSet& ks) const {
  if (perfect_conductor_surface()) {
    for (std::size_t i = 0; i < n; ++i) {
      rte[i] = -1.0;
      rtm[i] = 1.0;
    }
    return;
  }
  const double xc2 = xi * xi / (kSpeedOfLight * kSpeedOfLight);
  const double ef = fluid_->eps(xi);
  const std::size_t m = layers_.size();
  const bool pec_back = layers_.back().material->is_perfect_conductor();
  const std::size_t dielectric = pec_back ? m - 1 : m;

  // kap[j] holds the layer wavevectors; kap[0] aliases the fluid.
  std::vector<std::vector<double>> kap(dielectric + 1);
  std::vector<double> eps(dielectric + 1);
  kap[0].assign(kappa_f, kappa_f + n);
  eps[0] = ef;
  for (std::size_t j = 1; j <= dielectric; ++j) {
    eps[j] = layers_[j - 1].material->eps(xi);
    kap[j].resize(n);
    ks.layer_kappa(eps[j] * xc2, k2, kap[j].data(), n);
  }

  std::size_t top = dielectric;  // innermost dielectric medium index
  if (pec_back) {
    for (std::size_t i = 0; i < n; ++i) {
      rte[i] = -1.0;
      rtm[i] = 1.0;
    }
  } else {
    ks.interface_reflection(kap[top - 1].data(), kap[top].data(), eps[top - 1], eps[top], rte, rtm, n);
    --top;
  }
  std::vector<double> ite(n), itm(n);
  for (std::size_t j = top; j >= 1; --j) {
    double t = *layers_[j - 1].thickness;
    ks.interface_reflection(kap[j - 1].data(), kap[j].data(), eps[j - 1], eps[j], ite.data(), itm.data(), n);
    ks.layer_recursion(ite.data(), kap[j].data(), t, rte, n);
    ks.layer_recursion(itm.data(), kap[j].data(), t, rtm, n);
  }
}

double fresnel_reflection(const MaterialDb& db, const LayerStack& stack, const std::string& fluid, double xi,
                          double k, Polarization pol) {
  if (!(xi >= 0.0) || !(k >= 0.0) || (xi == 0.0 && k == 0.0))
    throw DomainError("reflection needs xi >= 0, k >= 0, not both zero");
  StackReflector sr(db, stack, fluid);
  double ef = sr.perfect_conductor_surface() ? 1.0 : db.lookup(fluid).eps(xi);
  double k2 = k * k;
  double kf = std::sqrt(ef * xi * xi / (kSpeedOfLight * kSpeedOfLight) + k2);
  double te, tm;
  sr.evaluate(xi, &k2, &kf, 1, &te, &tm, kernels::scalar_kernels());
  return pol == Polarization::TE ? te : tm;
}

namespace {

struct GapSetup {
  StackReflector a, b;
  const Material* fluid;
  double d;
};

GapSetup setup(const MaterialDb& db, const PlanarGap& gap) {
  if (!(gap.separation > 0.0)) throw ValidationError("planar separation must be positive");
  return {StackReflector(db, gap.wall_a, gap.fluid), StackReflector(db, gap.wall_b, gap.fluid),
          &db.lookup(gap.fluid), gap.separation};
}

// Shared (xi, u) sampling with u = kappa_f - q, so k dk = kappa_f du.
template <class PerXi>
double integrate_gap(const GapSetup& g, const PlanarQuadrature& q, PerXi&& per_xi) {
  const double d = g.d;
  SemiInfiniteRule rx = SemiInfiniteRule::make(q.xi_points, kSpeedOfLight / (2.0 * d));
  SemiInfiniteRule ru = SemiInfiniteRule::make(q.k_points, 1.0 / (2.0 * d));
  const std::size_t n = ru.nodes.size();
  std::vector<double> k2(n), kf(n), ate(n), atm(n), bte(n), btm(n);
  double total = 0.0;
  for (std::size_t ix = 0; ix < rx.nodes.size(); ++ix) {
    double xi = rx.nodes[ix];
    double qf = std::sqrt(g.fluid->eps(xi)) * xi / kSpeedOfLight;
    for (std::size_t i = 0; i < n; ++i) {
      double u = ru.nodes[i];
      kf[i] = qf + u;
      k2[i] = u * (u + 2.0 * qf);
    }
    g.a.evaluate(xi, k2.data(), kf.data(), n, ate.data(), atm.data(), kernels::active_kernels());
    g.b.evaluate(xi, k2.data(), kf.data(), n, bte.data(), btm.data(), kernels::active_kernels());
    double v = per_xi(ru, kf, ate, atm, bte, btm);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "non-finite planar integrand at xi node " << ix << " (xi = " << xi << " rad/s, d = " << d << " m)";
      throw EvaluationError(os.str());
    }
    total += rx.weights[ix] * v;
  }
  return total;
}

}  // namespace

double lifshitz_pressure(const MaterialDb& db, const PlanarGap& gap, const PlanarQuadrature& q,
                         const kernels::KernelSet& ks) {
  GapSetup g = setup(db, gap);
  std::vector<double> wk;
  double s = integrate_gap(g, q, [&](const SemiInfiniteRule& ru, const std::vector<double>& kf,
                                     const std::vector<double>& ate, const std::vector<double>& atm,
                                     const std::vector<double>& bte, const std::vector<double>& btm) {
    wk.resize(kf.size());
    for (std::size_t i = 0; i < kf.size(); ++i) wk[i] = ru.weights[i] * kf[i];
    kernels::ModeSum ms =
        ks.mode_sum(wk.data(), kf.data(), ate.data(), bte.data(), atm.data(), btm.data(), g.d, kf.size());
    if (ms.min_denominator < 1e-12) {
      std::ostringstream os;
      os << "denominator 1 - rA rB exp(-2 kappa d) below 1e-12 at d = " << g.d << " m";
      throw EvaluationError(os.str());
    }
    return ms.sum;
  });
  return kHbar / (2.0 * kPi * kPi) * s;
}

double lifshitz_energy(const MaterialDb& db, const PlanarGap& gap, const PlanarQuadrature& q) {
  GapSetup g = setup(db, gap);
  double s = integrate_gap(g, q, [&](const SemiInfiniteRule& ru, const std::vector<double>& kf,
                                     const std::vector<double>& ate, const std::vector<double>& atm,
                                     const std::vector<double>& bte, const std::vector<double>& btm) {
    double acc = 0.0;
    for (std::size_t i = 0; i < kf.size(); ++i) {
      double e = std::exp(-2.0 * kf[i] * g.d);
      acc += ru.weights[i] * kf[i] * (std::log1p(-ate[i] * bte[i] * e) + std::log1p(-atm[i] * btm[i] * e));
    }
    return acc;
  });
  return kHbar / (4.0 * kPi * kPi) * s;
}

double lifshitz_integrand(const MaterialDb& db, const PlanarGap& gap, double xi, double k) {
  GapSetup g = setup(db, gap);
  double ef = g.fluid->eps(xi);
  double k2 = k * k;
  double kf = std::sqrt(ef * xi * xi / (kSpeedOfLight * kSpeedOfLight) + k2);
  double ate, atm, bte, btm;
  const auto& ks = kernels::scalar_kernels();
  g.a.evaluate(xi, &k2, &kf, 1, &ate, &atm, ks);
  g.b.evaluate(xi, &k2, &kf, 1, &bte, &btm, ks);
  double e = std::exp(-2.0 * kf * g.d);
  double xte = ate * bte * e, xtm = atm * btm * e;
  return k * kf * (xte / (1.0 - xte) + xtm / (1.0 - xtm));
}

double perfect_metal_pressure(double d) {
  return kHbar * kSpeedOfLight * kPi * kPi / (240.0 * d * d * d * d);
}

double normalized_pressure(const MaterialDb& db, const PlanarGap& gap, const PlanarQuadrature& q) {
  return lifshitz_pressure(db, gap, q) / perfect_metal_pressure(gap.separation);
}

}  // namespace casimir
