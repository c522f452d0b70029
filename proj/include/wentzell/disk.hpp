#ifndef WENTZELL_DISK_HPP
#define WENTZELL_DISK_HPP

#include <vector>

#include "wentzell/dense.hpp"

namespace wentzell {

/// Fourier-mode model of the Laplacian on the unit disk with Wentzell
/// boundary condition beta * normal derivative + gamma + q * Laplace-Beltrami.
///
/// The Dirichlet lifting of mode k is the harmonic function r^{|k|} e^{ik theta};
/// everything reduces to per-mode scalars:
///   dtn_B0(k) = beta |k|,  beltrami(k) = -k^2,  C(k) = -q k^2 + gamma,
///   N_B(k) = dtn_B0(k) + C(k),  W(k) = |k|.
struct DiskModel {
  int max_mode = 0;  // K; modes run over -K..K
  double beta = -1.0;
  double gamma = 0.0;
  double q = 0.0;

  std::vector<double> dtn_B0;    // indexed by k + K
  std::vector<double> beltrami;
  std::vector<double> C;
  std::vector<double> N_B;
  std::vector<double> W;

  std::size_t index(int k) const { return static_cast<std::size_t>(k + max_mode); }
  std::size_t mode_count() const { return static_cast<std::size_t>(2 * max_mode + 1); }
};

/// Throws BadParameters unless K >= 1, beta < 0, q >= 0.
DiskModel build_disk_model(int K, double beta, double gamma, double q);

/// max_k | dtn_B0(k) - beta * W(k) |; identically zero on the disk, where
/// the lower-order correction to the DtN operator vanishes.
double disk_wq_identity_check(const DiskModel& model);

struct DiskRelativeBoundRow {
  double eps;
  double M;            // max_k max(0, |beta| |k| - eps |C(k)|)
  int k_star;          // attaining mode
  bool at_truncation;  // attained at K: inconclusive
};

struct DiskRelativeBoundReport {
  std::vector<DiskRelativeBoundRow> rows;
  bool bound_zero = false;  // every M finite and attained below the truncation
};

/// Relative bound of the normal-derivative DtN part against C. Throws
/// BoundFails when q = 0 (linear growth in |k| cannot be dominated by a
/// bounded C).
DiskRelativeBoundReport disk_relative_bound(const DiskModel& model,
                                            const std::vector<double>& eps_list);

struct DiskGenerationReport {
  std::vector<double> ts;
  double spectral_abscissa = 0.0;  // max_k N_B(k) = N_B(0) = gamma
  int abscissa_mode = 0;
  double angle = 0.0;              // pi/2: real spectrum, bounded above
  std::vector<int> ks;             // 0..K (quantities are even in k)
  std::vector<double> n_b;         // N_B per listed mode
  std::vector<std::vector<double>> factors;  // factors[i][j] = exp(ts[i] * N_B(ks[j]))
  std::vector<double> tail_factor;           // factor at K per t: compactness surrogate
};

DiskGenerationReport disk_generation_report(const DiskModel& model, const std::vector<double>& ts);

struct DiskSplitReport {
  double additivity_residual = 0.0;  // max_k |N_B - (dtn_B0 + C)|
  double angle_full = 0.0;           // per-mode semigroup of N_B
  double angle_comparator = 0.0;     // per-mode semigroup of C
  bool pass = false;
};

/// Disk rendering of the dominant-C split: both N_B and C are diagonal with
/// real spectrum bounded above, hence sectorial of angle pi/2.
DiskSplitReport disk_split_experiment(const DiskModel& model);

}  // namespace wentzell

#endif
