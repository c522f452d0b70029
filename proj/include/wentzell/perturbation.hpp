#ifndef WENTZELL_PERTURBATION_HPP
#define WENTZELL_PERTURBATION_HPP

#include "wentzell/decomposition.hpp"
#include "wentzell/probes.hpp"

namespace wentzell {

/// Residuals of the Dirichlet-map perturbation identity
///   L_lambda^{A+P} - L_lambda^{A} = R(lambda, A0+P) P L_lambda^{A}
///                                 = R(lambda, A0)   P L_lambda^{A+P},
/// exact in discrete arithmetic: the difference of the liftings has zero
/// trace and satisfies the perturbed interior equation.
struct DirichletIdentityReport {
  Complex lambda;
  double residual1 = 0.0;  // first identity
  double residual2 = 0.0;  // roles of A_m and A_m+P swapped
  double scale = 1.0;
};

DirichletIdentityReport dirichlet_identity_check(const DiscreteModel& model, Complex lambda);

/// Residual of the DtN difference formula
///   (N_lambda - N_lambda^P) + B R(lambda, A0) P L_lambda^{A+P} = 0,
/// plus the norm of the difference itself.
struct DtnDifferenceReport {
  Complex lambda;
  double residual = 0.0;
  double difference_norm = 0.0;  // ||N_lambda - N_lambda^P||
};

DtnDifferenceReport dtn_difference_check(const DiscreteModel& model, Complex lambda);

/// Feedback split B = B0 + C L with a boundary operator C.
struct SplitFeedback {
  LinOp B0;  // FullGrid -> Boundary
  Matrix C;  // 2n x 2n

  /// B0 + C L on the model's grid.
  LinOp composed(const DiscreteModel& model) const;

  /// Split the model's own feedback against a given C: B0 := B - C L.
  static SplitFeedback from_boundary_part(const DiscreteModel& model, const Matrix& C);
};

enum class SplitScenario { CBounded, CDominant };

struct SplitExperimentReport {
  SplitScenario scenario;
  double additivity_residual = 0.0;  // || N^B - (N^{B0} + C) ||
  double angle_full = 0.0;           // A^B
  double angle_comparator = 0.0;     // A^{B0} or A^{CL}
  bool pass = false;
};

/// Verifies N^B = N^{B0} + C and compares the sector angle of the full
/// generator with the scenario's comparator (A^{B0} when C is the bounded
/// part, A^{CL} when C dominates).
SplitExperimentReport feedback_split_experiment(const DiscreteModel& model,
                                                const SplitFeedback& split,
                                                SplitScenario scenario,
                                                const SectorScanOptions& options = {});

}  // namespace wentzell

#endif
