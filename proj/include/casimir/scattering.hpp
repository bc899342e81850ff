#pragma once

#include <Eigen/Dense>

#include <string>
#include <variant>
#include <vector>

#include "casimir/materials.hpp"
#include "casimir/planar.hpp"

namespace casimir {

struct SphereBody {
  double radius = 0.0;  // meters
  std::string material;
};

struct WaveBasis {
  int lmax = 20;
  int dimension() const { return 2 * lmax * (lmax + 2); }
  // Multipole orders in the block of azimuthal number m.
  int lmin(int m) const { return std::max(1, std::abs(m)); }
  int block_orders(int m) const { return lmax - lmin(m) + 1; }
};

struct SphereSphereGeometry {
  SphereBody a;
  SphereBody b;
  std::string fluid;
  double gap = 0.0;  // surface-to-surface, meters
  double center_distance() const { return gap + a.radius + b.radius; }
};

struct PlateSphereGeometry {
  LayerStack stack;
  SphereBody sphere;
  std::string fluid;
  double gap = 0.0;  // plate surface to sphere surface, meters
};

using SphereGeometry = std::variant<SphereSphereGeometry, PlateSphereGeometry>;

enum class PfaNormalization {
  RScaled,         // hbar c pi^3 R / (360 d^3)
  CaptionLiteral,  // hbar c pi^3 R / (720 d^3)
};

struct ScatteringSettings {
  int lmax = 20;
  int xi_points = 40;
  int k_points = 40;
  // Frequency nodes whose round-trip factor exp(-2 q d) falls below this are skipped.
  double xi_cutoff = 1e-20;
};

// Diagonal sphere T-matrix on the imaginary axis. Entries are indexed by l
// (index 0 unused). `te`/`tm` are the physical coefficients; the scaled
// versions carry the factor k_l(x)/i_l(x) and stay O(1) for all x.
struct MieMatrix {
  std::vector<double> te, tm;
  std::vector<double> te_scaled, tm_scaled;
  double size_parameter = 0.0;
};

MieMatrix mie_matrix(const MaterialDb& db, const SphereBody& sphere, const std::string& fluid, double xi,
                     const WaveBasis& basis);

// Matrix blocks per azimuthal number m = 0..lmax, ordered (M waves, then N
// waves) by increasing l, in the basis where N waves carry a factor i so that
// every block is real.
struct BlockMatrix {
  int lmax = 0;
  std::vector<Eigen::MatrixXd> blocks;
  // Full matrix over m = -lmax..lmax in the same per-m ordering; for m < 0 the
  // polarization cross terms change sign.
  Eigen::MatrixXd assemble() const;
};

// Outgoing waves about one centre re-expanded as regular waves about a centre
// displaced by +L along z.
BlockMatrix translation_matrix(const MaterialDb& db, const std::string& fluid, double xi, double L,
                               const WaveBasis& basis);

// Round-trip operator N of the sphere above the plate.
BlockMatrix plate_roundtrip(const MaterialDb& db, const PlateSphereGeometry& g, double xi, const WaveBasis& basis,
                            int k_points = 40);
BlockMatrix sphere_roundtrip(const MaterialDb& db, const SphereSphereGeometry& g, double xi,
                             const WaveBasis& basis);

struct LogDetResult {
  double logdet = 0.0;  // sum over m with weight 2 for m > 0
  double trace_term = 0.0;  // sum_m tr[(I - N)^-1 dN/dd], same weights
};

// ln det(I - N) and the derivative trace at one frequency.
LogDetResult roundtrip_logdet(const MaterialDb& db, const SphereGeometry& g, double xi, const ScatteringSettings& s,
                              bool with_derivative);

// Joules; negative when attractive.
double casimir_energy(const MaterialDb& db, const SphereGeometry& g, const ScatteringSettings& s = {});
// Newtons; positive when attractive (equal to dE/dd).
double casimir_force(const MaterialDb& db, const SphereGeometry& g, const ScatteringSettings& s = {});
// Central difference of the energy, step 1e-3 d.
double casimir_force_fd(const MaterialDb& db, const SphereGeometry& g, const ScatteringSettings& s = {});

double pfa_force_normalization(const SphereGeometry& g, PfaNormalization conv = PfaNormalization::RScaled);
double normalized_force(const MaterialDb& db, const SphereGeometry& g, const ScatteringSettings& s = {},
                        PfaNormalization conv = PfaNormalization::RScaled);

double geometry_gap(const SphereGeometry& g);
SphereGeometry with_gap(const SphereGeometry& g, double gap);

}  // namespace casimir
