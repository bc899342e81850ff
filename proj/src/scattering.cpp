#include "casimir/scattering.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"
#include "casimir/special.hpp"

namespace casimir {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kFourPi = 4.0 * kPi;

double fluid_wavenumber(const Material& fluid, double xi) {
  return std::sqrt(fluid.eps(xi)) * xi / kSpeedOfLight;
}

// g[m][j][l] lists (2 lam + 1) * int Y*_jm P_lam Y_lm over lam = |j-l|..j+l step 2.
class GauntTable {
 public:
  explicit GauntTable(int lmax) : lmax_(lmax) {
    data_.resize(lmax + 1);
    for (int m = 0; m <= lmax; ++m) {
      auto& dm = data_[m];
      dm.resize((lmax + 2) * (lmax + 1));
      for (int j = m; j <= lmax + 1; ++j) {
        for (int l = std::max(1, m); l <= lmax; ++l) {
          auto& v = dm[j * (lmax + 1) + l];
          for (int lam = std::abs(j - l); lam <= j + l; lam += 2) {
            long double w = wigner_product(j, l, lam, m);
            v.push_back(static_cast<double>((2 * lam + 1) * w));
          }
        }
      }
    }
  }

  const std::vector<double>& at(int m, int j, int l) const { return data_[m][j * (lmax_ + 1) + l]; }

  static const GauntTable& get(int lmax) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GauntTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& p = cache[lmax];
    if (!p) p = std::make_unique<GauntTable>(lmax);
    return *p;
  }

 private:
  static long double wigner_product(int j, int l, int lam, int m) {
    long double s = std::sqrt(static_cast<long double>((2 * l + 1) * (2 * j + 1)));
    long double v = s * special::wigner3j_zero(l, j, lam) * special::wigner3j_m(l, j, lam, m);
    return (m % 2) ? -v : v;
  }

  int lmax_;
  std::vector<std::vector<std::vector<double>>> data_;
};

struct MieScaled {
  VectorXd te, tm;  // indexed l - 1
};

MieScaled mie_scaled(const MieMatrix& mm, int lmax) {
  MieScaled s{VectorXd(lmax), VectorXd(lmax)};
  for (int l = 1; l <= lmax; ++l) {
    s.te(l - 1) = mm.te_scaled[l];
    s.tm(l - 1) = mm.tm_scaled[l];
  }
  return s;
}

// Row scaling of a block by the diagonal T-matrix, M waves first.
void apply_t(const MieScaled& t, int l0, int n, MatrixXd& a) {
  for (int i = 0; i < n; ++i) {
    a.row(i) *= t.te(l0 + i - 1);
    a.row(n + i) *= t.tm(l0 + i - 1);
  }
}

// Translation block for azimuthal number m. dir = +1 when the destination centre
// sits at +L z from the source. Rows are scaled by exp(row_log[l']) and columns
// by exp(col_log[l]).
void translation_block(const GauntTable& gt, int m, int lmax, double q, double L, int dir,
                       const std::vector<double>& row_log, const std::vector<double>& col_log, MatrixXd& u,
                       MatrixXd* du) {
  const int l0 = std::max(1, m);
  const int n = lmax - l0 + 1;
  const double x = q * L;
  const int lam_max = 2 * lmax + 2;
  special::BesselK bk = special::bessel_k(x, lam_max + 1);
  std::vector<double> dlog(lam_max + 1);
  for (int lam = 0; lam <= lam_max; ++lam) dlog[lam] = q * (lam / x - bk.ratio[lam + 1]);

  u.setZero(2 * n, 2 * n);
  if (du) du->setZero(2 * n, 2 * n);
  for (int lp = l0; lp <= lmax; ++lp) {
    for (int l = l0; l <= lmax; ++l) {
      // alpha_j and d alpha_j / dL for j = lp-1, lp, lp+1 with the (lp, l) scaling
      double al[3] = {0, 0, 0}, dal[3] = {0, 0, 0};
      for (int s = 0; s < 3; ++s) {
        int j = lp - 1 + s;
        if (j < m) continue;
        const auto& g = gt.at(m, j, l);
        double acc = 0.0, dacc = 0.0;
        int lam = std::abs(j - l);
        for (double gv : g) {
          if (gv != 0.0) {
            double e = std::exp(bk.log[lam] + row_log[lp] + col_log[l]);
            if (!std::isfinite(e)) {
              std::ostringstream os;
              os << "translation recurrence overflow at xi-scaled argument qL = " << x << " (L = " << L << " m)";
              throw EvaluationError(os.str());
            }
            double sgn = (dir < 0 && (lam % 2)) ? -1.0 : 1.0;
            acc += sgn * gv * e;
            dacc += sgn * gv * e * dlog[lam];
          }
          lam += 2;
        }
        double jsign = (j % 2) ? -1.0 : 1.0;
        al[s] = jsign * acc;
        dal[s] = jsign * dacc;
      }
      const double cm = special::cos_coupling(lp - 1, m) / lp;
      const double cp = special::cos_coupling(lp, m) / (lp + 1);
      const double dq = dir * q;
      const double a = al[1] - dq * L * (cm * al[0] - cp * al[2]);
      const double beta = dq * m * L * al[1] / (lp * (lp + 1.0));
      const int i = lp - l0, k = l - l0;
      u(i, k) = a;
      u(n + i, n + k) = a;
      u(n + i, k) = beta;
      u(i, n + k) = beta;
      if (du) {
        const double da = dal[1] - dq * (cm * al[0] - cp * al[2]) - dq * L * (cm * dal[0] - cp * dal[2]);
        const double dbeta = dq * m * (al[1] + L * dal[1]) / (lp * (lp + 1.0));
        (*du)(i, k) = da;
        (*du)(n + i, n + k) = da;
        (*du)(n + i, k) = dbeta;
        (*du)(i, n + k) = dbeta;
      }
    }
  }
}

struct PlateNodes {
  double q = 0.0;
  std::vector<double> u, kappa, k, w, rte, rtm;
};

PlateNodes plate_nodes(const MaterialDb& db, const PlateSphereGeometry& g, double xi, int k_points) {
  const Material& fluid = db.lookup(g.fluid);
  PlateNodes p;
  p.q = fluid_wavenumber(fluid, xi);
  const double H = g.gap + g.sphere.radius;
  SemiInfiniteRule ru = SemiInfiniteRule::make(k_points, 1.0 / H);
  const std::size_t n = ru.nodes.size();
  p.u = ru.nodes;
  p.w = ru.weights;
  p.kappa.resize(n);
  p.k.resize(n);
  std::vector<double> k2(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.kappa[i] = p.q + p.u[i];
    k2[i] = p.u[i] * (p.u[i] + 2.0 * p.q);
    p.k[i] = std::sqrt(k2[i]);
  }
  p.rte.resize(n);
  p.rtm.resize(n);
  StackReflector sr(db, g.stack, g.fluid);
  sr.evaluate(xi, k2.data(), p.kappa.data(), n, p.rte.data(), p.rtm.data(), kernels::active_kernels());
  return p;
}

// Plate reflection block in the scaled basis (rows times i_l'(qR), columns over k_l(qR)).
void plate_block(const PlateNodes& p, int m, int lmax, double R, double H, const std::vector<double>& log_i,
                 const std::vector<double>& log_k, MatrixXd& r, MatrixXd* dr) {
  const int l0 = std::max(1, m);
  const int n = lmax - l0 + 1;
  const int K = static_cast<int>(p.u.size());
  MatrixXd rows(2 * n, 2 * K), cols(2 * n, 2 * K);
  VectorXd dfac(2 * K);
  const double q = p.q;
  std::vector<double> lognorm(lmax + 2);
  for (int l = m; l <= lmax + 1; ++l) lognorm[l] = special::log_ylm_norm(l, m);
  std::vector<double> lp(lmax + 2, 0.0);  // log Pi_l at this node, l >= m

  for (int node = 0; node < K; ++node) {
    const double kap = p.kappa[node], k = p.k[node];
    std::vector<double> lpd = special::log_legendre_derivative(m, lmax + 1, kap / q);
    const double mlog = m > 0 ? m * std::log(k / q) : 0.0;
    for (int l = m; l <= lmax + 1; ++l) lp[l] = lognorm[l] + mlog + lpd[l - m];
    const double half = kap * H;
    const double logk2 = 2.0 * std::log(k);
    const double f = p.w[node] * kFourPi * q;
    auto pi_at = [&](int l, double base) { return l < m ? 0.0 : std::exp(lp[l] + base); };
    for (int lq = l0; lq <= lmax; ++lq) {
      const int i = lq - l0;
      const double sgn = (lq % 2) ? -1.0 : 1.0;
      // row factors
      const double br = log_i[lq] - half;
      const double wt = special::cos_coupling(lq - 1, m) / lq * pi_at(lq - 1, br) -
                        special::cos_coupling(lq, m) / (lq + 1) * pi_at(lq + 1, br);
      const double vt = m / (lq * (lq + 1.0)) * pi_at(lq, br);
      // column factors
      const double bc = -log_k[lq] - half - logk2;
      const double dt = (lq + 1) * special::cos_coupling(lq - 1, m) * pi_at(lq - 1, bc) -
                        lq * special::cos_coupling(lq, m) * pi_at(lq + 1, bc);
      const double mt = -m * pi_at(lq, bc);
      const double ste = f * p.rte[node] * sgn, stm = f * p.rtm[node] * sgn;
      // TE: rows (W, V), cols (D, M);  TM: rows (V, W), cols (M, D)
      rows(i, 2 * node) = ste * wt;
      rows(n + i, 2 * node) = ste * vt;
      rows(i, 2 * node + 1) = stm * vt;
      rows(n + i, 2 * node + 1) = stm * wt;
      cols(i, 2 * node) = sgn * dt;
      cols(n + i, 2 * node) = sgn * mt;
      cols(i, 2 * node + 1) = sgn * mt;
      cols(n + i, 2 * node + 1) = sgn * dt;
    }
    dfac(2 * node) = dfac(2 * node + 1) = -2.0 * kap;
  }
  (void)R;
  if (!rows.allFinite() || !cols.allFinite()) throw EvaluationError("plate conversion overflow");
  r.noalias() = rows * cols.transpose();
  if (dr) dr->noalias() = rows * dfac.asDiagonal() * cols.transpose();
}

void check_lmax(const WaveBasis& b) {
  if (b.lmax < 1) throw ValidationError("lmax must be at least 1");
}

MieMatrix mie_impl(const MaterialDb& db, const SphereBody& sphere, const std::string& fluid_name, double xi,
                   const WaveBasis& basis, bool guard);

struct SphereData {
  MieScaled t;
  std::vector<double> log_i, log_k;  // at qR, l = 0..lmax+1
};

SphereData sphere_data(const MaterialDb& db, const SphereBody& s, const std::string& fluid, double xi,
                       const WaveBasis& basis) {
  MieMatrix mm = mie_impl(db, s, fluid, xi, basis, false);
  SphereData d{mie_scaled(mm, basis.lmax), {}, {}};
  double x = mm.size_parameter;
  d.log_i = special::bessel_i(x, basis.lmax + 1).log;
  d.log_k = special::bessel_k(x, basis.lmax + 1).log;
  return d;
}

void validate_sphere(const SphereBody& s) {
  if (!(s.radius > 0.0)) throw ValidationError("sphere radius must be positive");
}

}  // namespace

namespace {

// The scaled coefficients stay finite for every size parameter; only the
// physical ones overflow, so the round-trip path skips the size guard.
MieMatrix mie_impl(const MaterialDb& db, const SphereBody& sphere, const std::string& fluid_name, double xi,
                   const WaveBasis& basis, bool guard) {
  check_lmax(basis);
  validate_sphere(sphere);
  if (!(xi > 0.0)) throw DomainError("Mie coefficients need xi > 0");
  const Material& fluid = db.lookup(fluid_name);
  const Material& body = db.lookup(sphere.material);
  const double ef = fluid.eps(xi);
  const double x = std::sqrt(ef) * xi * sphere.radius / kSpeedOfLight;
  const int lmax = basis.lmax;
  if (guard && x > 40.0 * (lmax + 1)) {
    std::ostringstream os;
    os << "size parameter " << x << " too large for lmax = " << lmax;
    throw AccuracyError(os.str());
  }
  MieMatrix out;
  out.size_parameter = x;
  out.te.assign(lmax + 1, 0.0);
  out.tm.assign(lmax + 1, 0.0);
  out.te_scaled.assign(lmax + 1, 0.0);
  out.tm_scaled.assign(lmax + 1, 0.0);

  special::BesselI ix = special::bessel_i(x, lmax + 1);
  special::BesselK kx = special::bessel_k(x, lmax);
  const bool pec = body.is_perfect_conductor();
  double n2 = 0.0, y = 0.0;
  special::BesselI iy;
  if (!pec) {
    n2 = body.eps(xi) / ef;
    y = std::sqrt(n2) * x;
    iy = special::bessel_i(y, lmax + 1);
  }
  for (int l = 1; l <= lmax; ++l) {
    // [z i_l(z)]' / i_l(z) = l + 1 + z i_{l+1}/i_l and [z k_l(z)]' / k_l(z); the
    // i form keeps the small-z difference between inside and outside exact.
    const double ex = x * ix.ratio[l + 1];
    const double ax = l + 1 + ex;
    const double bx = -x / kx.ratio[l] - l;
    double te, tm;
    if (pec) {
      te = -1.0;
      tm = -ax / bx;
    } else {
      const double ey = y * iy.ratio[l + 1];
      const double ay = l + 1 + ey;
      te = -(ex - ey) / (bx - ay);
      tm = -((n2 - 1.0) * (l + 1) + n2 * ex - ey) / (n2 * bx - ay);
    }
    out.te_scaled[l] = te;
    out.tm_scaled[l] = tm;
    const double conv = std::exp(ix.log[l] - kx.log[l]);
    out.te[l] = te * conv;
    out.tm[l] = tm * conv;
  }
  return out;
}

}  // namespace

MieMatrix mie_matrix(const MaterialDb& db, const SphereBody& sphere, const std::string& fluid_name, double xi,
                     const WaveBasis& basis) {
  return mie_impl(db, sphere, fluid_name, xi, basis, true);
}

MatrixXd BlockMatrix::assemble() const {
  int total = 0;
  for (int m = -lmax; m <= lmax; ++m) total += static_cast<int>(blocks[std::abs(m)].rows());
  MatrixXd full = MatrixXd::Zero(total, total);
  int off = 0;
  for (int m = -lmax; m <= lmax; ++m) {
    MatrixXd b = blocks[std::abs(m)];
    const int n = static_cast<int>(b.rows()) / 2;
    if (m < 0) {
      b.topRightCorner(n, n) *= -1.0;
      b.bottomLeftCorner(n, n) *= -1.0;
    }
    full.block(off, off, 2 * n, 2 * n) = b;
    off += 2 * n;
  }
  return full;
}

BlockMatrix translation_matrix(const MaterialDb& db, const std::string& fluid, double xi, double L,
                               const WaveBasis& basis) {
  check_lmax(basis);
  if (!(L > 0.0) || !(xi > 0.0)) throw DomainError("translation needs L > 0 and xi > 0");
  const double q = fluid_wavenumber(db.lookup(fluid), xi);
  const GauntTable& gt = GauntTable::get(basis.lmax);
  std::vector<double> zero(basis.lmax + 2, 0.0);
  BlockMatrix out;
  out.lmax = basis.lmax;
  out.blocks.resize(basis.lmax + 1);
  for (int m = 0; m <= basis.lmax; ++m)
    translation_block(gt, m, basis.lmax, q, L, +1, zero, zero, out.blocks[m], nullptr);
  return out;
}

namespace {

struct RoundTrip {
  std::vector<MatrixXd> n, dn;
};

RoundTrip plate_roundtrip_impl(const MaterialDb& db, const PlateSphereGeometry& g, double xi,
                               const WaveBasis& basis, int k_points, bool deriv) {
  check_lmax(basis);
  validate_sphere(g.sphere);
  if (!(g.gap > 0.0)) throw ValidationError("plate-sphere gap must be positive");
  SphereData sd = sphere_data(db, g.sphere, g.fluid, xi, basis);
  PlateNodes p = plate_nodes(db, g, xi, k_points);
  const double H = g.gap + g.sphere.radius;
  RoundTrip rt;
  rt.n.resize(basis.lmax + 1);
  if (deriv) rt.dn.resize(basis.lmax + 1);
  for (int m = 0; m <= basis.lmax; ++m) {
    MatrixXd r, dr;
    plate_block(p, m, basis.lmax, g.sphere.radius, H, sd.log_i, sd.log_k, r, deriv ? &dr : nullptr);
    const int l0 = basis.lmin(m), n = basis.block_orders(m);
    apply_t(sd.t, l0, n, r);
    rt.n[m] = std::move(r);
    if (deriv) {
      apply_t(sd.t, l0, n, dr);
      rt.dn[m] = std::move(dr);
    }
  }
  return rt;
}

RoundTrip sphere_roundtrip_impl(const MaterialDb& db, const SphereSphereGeometry& g, double xi,
                                const WaveBasis& basis, bool deriv) {
  check_lmax(basis);
  validate_sphere(g.a);
  validate_sphere(g.b);
  if (!(g.gap > 0.0)) throw ValidationError("sphere-sphere gap must be positive");
  SphereData a = sphere_data(db, g.a, g.fluid, xi, basis);
  SphereData b = sphere_data(db, g.b, g.fluid, xi, basis);
  const double q = fluid_wavenumber(db.lookup(g.fluid), xi);
  const double L = g.center_distance();
  const GauntTable& gt = GauntTable::get(basis.lmax);
  std::vector<double> neg_ka(a.log_k.size()), neg_kb(b.log_k.size());
  for (std::size_t i = 0; i < neg_ka.size(); ++i) neg_ka[i] = -a.log_k[i];
  for (std::size_t i = 0; i < neg_kb.size(); ++i) neg_kb[i] = -b.log_k[i];
  RoundTrip rt;
  rt.n.resize(basis.lmax + 1);
  if (deriv) rt.dn.resize(basis.lmax + 1);
  for (int m = 0; m <= basis.lmax; ++m) {
    const int l0 = basis.lmin(m), n = basis.block_orders(m);
    MatrixXd uab, uba, duab, duba;
    // B sits at +L z from A.
    translation_block(gt, m, basis.lmax, q, L, -1, a.log_i, neg_kb, uab, deriv ? &duab : nullptr);
    translation_block(gt, m, basis.lmax, q, L, +1, b.log_i, neg_ka, uba, deriv ? &duba : nullptr);
    MatrixXd tb_uba = uba;
    apply_t(b.t, l0, n, tb_uba);
    MatrixXd left = uab;
    MatrixXd nm = left * tb_uba;
    apply_t(a.t, l0, n, nm);
    rt.n[m] = std::move(nm);
    if (deriv) {
      MatrixXd tb_duba = duba;
      apply_t(b.t, l0, n, tb_duba);
      MatrixXd d = duab * tb_uba + uab * tb_duba;
      apply_t(a.t, l0, n, d);
      rt.dn[m] = std::move(d);
    }
  }
  return rt;
}

BlockMatrix to_blocks(RoundTrip&& rt, int lmax) {
  BlockMatrix b;
  b.lmax = lmax;
  b.blocks = std::move(rt.n);
  return b;
}

double gap_of(const SphereGeometry& g) {
  return std::visit([](const auto& v) { return v.gap; }, g);
}

const std::string& fluid_of(const SphereGeometry& g) {
  return std::visit([](const auto& v) -> const std::string& { return v.fluid; }, g);
}

}  // namespace

BlockMatrix plate_roundtrip(const MaterialDb& db, const PlateSphereGeometry& g, double xi, const WaveBasis& basis,
                            int k_points) {
  return to_blocks(plate_roundtrip_impl(db, g, xi, basis, k_points, false), basis.lmax);
}

BlockMatrix sphere_roundtrip(const MaterialDb& db, const SphereSphereGeometry& g, double xi,
                             const WaveBasis& basis) {
  return to_blocks(sphere_roundtrip_impl(db, g, xi, basis, false), basis.lmax);
}

LogDetResult roundtrip_logdet(const MaterialDb& db, const SphereGeometry& g, double xi, const ScatteringSettings& s,
                              bool with_derivative) {
  WaveBasis basis{s.lmax};
  RoundTrip rt = std::visit(
      [&](const auto& geo) {
        using T = std::decay_t<decltype(geo)>;
        if constexpr (std::is_same_v<T, PlateSphereGeometry>)
          return plate_roundtrip_impl(db, geo, xi, basis, s.k_points, with_derivative);
        else
          return sphere_roundtrip_impl(db, geo, xi, basis, with_derivative);
      },
      g);
  LogDetResult res;
  for (int m = 0; m <= basis.lmax; ++m) {
    const MatrixXd& n = rt.n[m];
    MatrixXd a = MatrixXd::Identity(n.rows(), n.cols()) - n;
    Eigen::PartialPivLU<MatrixXd> lu(a);
    const auto diag = lu.matrixLU().diagonal();
    double logabs = 0.0;
    double sign = lu.permutationP().determinant();
    for (int i = 0; i < diag.size(); ++i) {
      logabs += std::log(std::fabs(diag(i)));
      if (diag(i) < 0.0) sign = -sign;
    }
    if (!(sign > 0.0) || !std::isfinite(logabs)) {
      std::ostringstream os;
      os << "det(I - N) not positive at xi = " << xi << " rad/s, m = " << m;
      throw EvaluationError(os.str());
    }
    const double weight = m == 0 ? 1.0 : 2.0;
    res.logdet += weight * logabs;
    if (with_derivative) res.trace_term += weight * lu.solve(rt.dn[m]).trace();
  }
  return res;
}

namespace {

struct XiRule {
  SemiInfiniteRule rule;
  const Material* fluid;
};

XiRule xi_rule(const MaterialDb& db, const SphereGeometry& g, const ScatteringSettings& s) {
  const Material& fluid = db.lookup(fluid_of(g));
  double d = gap_of(g);
  if (!(d > 0.0)) throw ValidationError("gap must be positive");
  double xi0 = kSpeedOfLight / (2.0 * d);
  double nf = std::sqrt(fluid.eps(xi0));
  return {SemiInfiniteRule::make(s.xi_points, xi0 / nf), &fluid};
}

template <class F>
double integrate_xi(const MaterialDb& db, const SphereGeometry& g, const ScatteringSettings& s, F&& per_xi) {
  XiRule xr = xi_rule(db, g, s);
  const double d = gap_of(g);
  double total = 0.0;
  for (std::size_t i = 0; i < xr.rule.nodes.size(); ++i) {
    const double xi = xr.rule.nodes[i];
    const double q = fluid_wavenumber(*xr.fluid, xi);
    if (std::exp(-2.0 * q * d) < s.xi_cutoff) continue;
    total += xr.rule.weights[i] * per_xi(xi);
  }
  return total;
}

}  // namespace

double casimir_energy(const MaterialDb& db, const SphereGeometry& g, const ScatteringSettings& s) {
  double v = integrate_xi(db, g, s, [&](double xi) { return roundtrip_logdet(db, g, xi, s, false).logdet; });
  return kHbar / (2.0 * kPi) * v;
}

double casimir_force(const MaterialDb& db, const SphereGeometry& g, const ScatteringSettings& s) {
  double v = integrate_xi(db, g, s, [&](double xi) { return roundtrip_logdet(db, g, xi, s, true).trace_term; });
  return -kHbar / (2.0 * kPi) * v;
}

double casimir_force_fd(const MaterialDb& db, const SphereGeometry& g, const ScatteringSettings& s) {
  const double d = gap_of(g);
  const double h = 1e-3 * d;
  // Keep the frequency rule fixed so both energies see the same nodes.
  XiRule xr = xi_rule(db, g, s);
  auto energy = [&](double gap) {
    SphereGeometry gg = with_gap(g, gap);
    double total = 0.0;
    for (std::size_t i = 0; i < xr.rule.nodes.size(); ++i) {
      const double xi = xr.rule.nodes[i];
      if (std::exp(-2.0 * fluid_wavenumber(*xr.fluid, xi) * d) < s.xi_cutoff) continue;
      total += xr.rule.weights[i] * roundtrip_logdet(db, gg, xi, s, false).logdet;
    }
    return kHbar / (2.0 * kPi) * total;
  };
  return (energy(d + h) - energy(d - h)) / (2.0 * h);
}

double geometry_gap(const SphereGeometry& g) { return gap_of(g); }

SphereGeometry with_gap(const SphereGeometry& g, double gap) {
  return std::visit(
      [gap](auto v) -> SphereGeometry {
        v.gap = gap;
        return v;
      },
      g);
}

double pfa_force_normalization(const SphereGeometry& g, PfaNormalization conv) {
  double reff = std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PlateSphereGeometry>)
          return v.sphere.radius;
        else
          return v.a.radius * v.b.radius / (v.a.radius + v.b.radius);
      },
      g);
  const double d = gap_of(g);
  const double base = kHbar * kSpeedOfLight * kPi * kPi * kPi / (d * d * d);
  return conv == PfaNormalization::RScaled ? base * reff / 360.0 : base * reff / 720.0;
}

double normalized_force(const MaterialDb& db, const SphereGeometry& g, const ScatteringSettings& s,
                        PfaNormalization conv) {
  return casimir_force(db, g, s) / pfa_force_normalization(g, conv);
}

}  // namespace casimir
