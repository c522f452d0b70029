#ifndef WENTZELL_PROBES_HPP
#define WENTZELL_PROBES_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wentzell/decomposition.hpp"

namespace wentzell {

/// 30 log-spaced samples in [lo, hi].
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

struct HilleYosidaResult {
  double lambda0 = 0.0;              // smallest sample with all larger samples regular
  double bound = 0.0;                // M = sup of ||lambda R(lambda)||
  std::vector<double> lambdas;       // regular samples
  std::vector<double> values;        // ||lambda R(lambda)|| per sample
  std::vector<double> skipped;       // samples that hit the spectrum
};

/// Resolvent procedure variant: `resolvent` returns R(lambda, op) and may
/// throw ResolventPole / SingularMatrix for samples on the spectrum.
HilleYosidaResult hille_yosida_probe(const std::function<Matrix(double)>& resolvent,
                                     const std::vector<double>& lambdas, Norm norm);
HilleYosidaResult hille_yosida_probe(const Matrix& op, const std::vector<double>& lambdas,
                                     Norm norm = Norm::Sup);

struct RayEntry {
  double theta;     // radians, measured from the positive real axis
  double sup_norm;  // sup over r of ||lambda R(lambda, op - shift)||
  bool bounded;     // sup below threshold
};

struct SectorReport {
  double lambda0 = 0.0;         // start of the real-ray probe
  double sup_real_ray = 0.0;    // M on the real ray
  double angle_estimate = 0.0;  // radians in [0, pi/2]
  std::vector<RayEntry> ray_table;
  Norm norm = Norm::Spectral;
  double threshold = 0.0;
  double shift = 0.0;  // omega
};

struct SectorScanOptions {
  double theta_step = 3.14159265358979323846 / 180.0;
  std::size_t r_per_decade = 4;
  double threshold = 1e3;
  Norm norm = Norm::Spectral;
};

/// Scans || lambda R(lambda, op - shift) || along rays lambda = r e^{i theta}
/// for theta in (pi/2, pi). The angle estimate is the last ray before the
/// first unbounded one (poles inside the sector lower the estimate). When no
/// shift is given, omega = spectral abscissa + 1.
SectorReport sector_angle_estimate(const Matrix& op, std::optional<double> shift = {},
                                   const SectorScanOptions& options = {});

struct RelativeBoundReport {
  std::vector<double> lambdas;
  std::vector<double> values;  // ||B R(lambda, A0)||
  double slope = 0.0;          // fitted log-log slope
  double extrapolated = 0.0;   // bound at infinity implied by the fit
  bool bound_zero = false;     // values decrease toward 0
};

/// Relative-bound surrogate: decay of ||feedback . R(lambda, A0)|| along a
/// log-spaced real lambda list.
RelativeBoundReport relative_bound_probe(const DiscreteModel& model, const LinOp& feedback,
                                         const std::vector<double>& lambdas);
RelativeBoundReport relative_bound_probe(const DiscreteModel& model,
                                         const std::vector<double>& lambdas);

struct EvolutionEntry {
  double t;
  double exp_norm;            // ||exp(t A0_product)||
  double lower_left;          // lower-left block, relative to exp_norm
  double upper_left_residual; // against exp(t G00), relative to exp_norm
  double lower_right_residual;// against exp(t N), relative to exp_norm
  double conservation;        // ||exp(t G) 1 - 1||_inf, when applicable
};

struct EvolutionReport {
  std::vector<EvolutionEntry> entries;
  bool conservation_applicable = false;  // c = 0, N0 = N1 = 0, P = 0
  double max_lower_left = 0.0;
  double max_block_residual = 0.0;
  double max_conservation = 0.0;
};

EvolutionReport evolve_and_structure_check(const DiscreteModel& model,
                                           const std::vector<double>& ts);

struct CompactnessReport {
  std::vector<std::size_t> grid_sizes;
  // sigma[g][k]: k-th singular value of the resolvent on grid g
  std::vector<std::vector<double>> sigma_wentzell;
  std::vector<std::vector<double>> sigma_dirichlet;
  std::vector<std::vector<double>> sigma_dtn;
  // Max relative change between the two finest grids. For the Wentzell
  // resolvent the first 2n values carry the boundary-coupling scaling of
  // the unweighted grid inner product (they grow ~ sqrt(N) and are reported
  // verbatim); the metric starts past them.
  double stabilization_wentzell = 0.0;
  double stabilization_dirichlet = 0.0;
  double max_dtn_change = 0.0;  // should be ~0: boundary space never refines
};

CompactnessReport compactness_proxy(const WentzellProblem& problem, double lambda,
                                    const std::vector<std::size_t>& grid_sizes,
                                    std::size_t count = 10);

struct Theorem31Report {
  double angle_wentzell = 0.0;  // A^B
  double angle_dirichlet = 0.0; // A0
  double angle_g0 = 0.0;        // G00 surrogate
  double angle_dtn = 0.0;       // N
  bool pass = false;
  double angle_floor = 0.0;
  std::string failure;          // minimizing ray description when failing
  SectorReport report_wentzell, report_dirichlet, report_g0, report_dtn;
};

/// Sector reports for A^B, A0, the G00 surrogate and N, with the equivalence
/// verdict: PASS when angle(A^B) >= min(other angles) - 0.1 and all angles
/// reach the floor. Throws AssumptionFailed when one of the assumption
/// surrogates (Hille-Yosida bound, relative bound decay, Dirichlet map)
/// does not hold.
Theorem31Report theorem31_experiment(const WentzellProblem& problem, std::size_t N,
                                     const SectorScanOptions& options = {},
                                     double angle_floor = 3.14159265358979323846 / 2 - 0.05);

}  // namespace wentzell

#endif
