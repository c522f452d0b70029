#include "wentzell/perturbation.hpp"

#include <cmath>
#include <sstream>

namespace wentzell {

namespace {

// Interior Dirichlet realization of the perturbation: restriction of P to
// zero-trace data.
Matrix perturbation_interior(const DiscreteModel& model) {
  const Matrix R = interior_restriction(model.grid);
  const Matrix E = zero_extension(model.grid);
  return R * model.P.mat * E;
}

Matrix dirichlet_resolvent(const Matrix& interior_op, Complex lambda, const char* what) {
  Matrix M = Matrix::identity(interior_op.rows()) * lambda - interior_op;
  try {
    return inverse(M);
  } catch (const SingularMatrix&) {
    std::ostringstream os;
    os << what << ": lambda = " << lambda.real() << "+" << lambda.imag() << "i is a pole";
    throw ResolventPole(os.str());
  }
}

}  // namespace

DirichletIdentityReport dirichlet_identity_check(const DiscreteModel& model, Complex lambda) {
  const Matrix L_A = dirichlet_map(model, lambda, OperatorTag::AM).map.mat;
  const Matrix L_AP = dirichlet_map(model, lambda, OperatorTag::AMP).map.mat;
  const Matrix R = interior_restriction(model.grid);
  const Matrix E = zero_extension(model.grid);
  const Matrix P_int = perturbation_interior(model);

  const Matrix R_A0 = dirichlet_resolvent(model.A0.mat, lambda, "dirichlet_identity_check A0");
  const Matrix R_A0P =
      dirichlet_resolvent(model.A0.mat + P_int, lambda, "dirichlet_identity_check A0+P");

  const Matrix diff = L_AP - L_A;
  const Matrix rhs1 = E * (R_A0P * (R * (model.P.mat * L_A)));
  const Matrix rhs2 = E * (R_A0 * (R * (model.P.mat * L_AP)));

  DirichletIdentityReport report;
  report.lambda = lambda;
  report.scale = std::max(1.0, std::max(L_A.sup_norm(), L_AP.sup_norm()));
  report.residual1 = (diff - rhs1).sup_norm() / report.scale;
  report.residual2 = (diff - rhs2).sup_norm() / report.scale;
  return report;
}

DtnDifferenceReport dtn_difference_check(const DiscreteModel& model, Complex lambda) {
  const Matrix L_A = dirichlet_map(model, lambda, OperatorTag::AM).map.mat;
  const Matrix L_AP = dirichlet_map(model, lambda, OperatorTag::AMP).map.mat;
  const Matrix E = zero_extension(model.grid);
  const Matrix R = interior_restriction(model.grid);

  const Matrix N_A = model.B.mat * L_A;
  const Matrix N_AP = model.B.mat * L_AP;
  const Matrix R_A0 = dirichlet_resolvent(model.A0.mat, lambda, "dtn_difference_check A0");
  const Matrix correction = model.B.mat * (E * (R_A0 * (R * (model.P.mat * L_AP))));

  DtnDifferenceReport report;
  report.lambda = lambda;
  report.difference_norm = (N_A - N_AP).sup_norm();
  const double scale = std::max(1.0, N_A.sup_norm());
  report.residual = ((N_A - N_AP) + correction).sup_norm() / scale;
  return report;
}

LinOp SplitFeedback::composed(const DiscreteModel& model) const {
  if (B0.domain != model.grid.full_space() || B0.codomain != model.grid.boundary_space()) {
    throw TagMismatch("SplitFeedback: B0 must map FullGrid -> Boundary");
  }
  if (C.rows() != model.grid.boundary_dim() || C.cols() != model.grid.boundary_dim()) {
    throw BadDimensions("SplitFeedback: C must be 2n x 2n");
  }
  return LinOp(B0.mat + C * model.L.mat, model.grid.full_space(), model.grid.boundary_space());
}

SplitFeedback SplitFeedback::from_boundary_part(const DiscreteModel& model, const Matrix& C) {
  if (C.rows() != model.grid.boundary_dim() || C.cols() != model.grid.boundary_dim()) {
    throw BadDimensions("SplitFeedback: C must be 2n x 2n");
  }
  SplitFeedback split;
  split.B0 = LinOp(model.B.mat - C * model.L.mat, model.grid.full_space(),
                   model.grid.boundary_space());
  split.C = C;
  return split;
}

SplitExperimentReport feedback_split_experiment(const DiscreteModel& model,
                                                const SplitFeedback& split,
                                                SplitScenario scenario,
                                                const SectorScanOptions& options) {
  SplitExperimentReport report;
  report.scenario = scenario;

  // Additivity of the DtN operator under trace-coupled feedback.
  const LinOp B_full = split.composed(model);
  const Matrix N_B = dtn_operator(model, Complex(0.0, 0.0), OperatorTag::AM, B_full, "B").mat;
  const Matrix N_B0 =
      dtn_operator(model, Complex(0.0, 0.0), OperatorTag::AM, split.B0, "B0").mat;
  report.additivity_residual = (N_B - (N_B0 + split.C)).sup_norm();

  // Sector angles of the full generator and the scenario's comparator.
  DiscreteModel full = model;
  full.B = B_full;
  DiscreteModel comparator = model;
  if (scenario == SplitScenario::CBounded) {
    comparator.B = split.B0;
  } else {
    comparator.B = LinOp(split.C * model.L.mat, model.grid.full_space(),
                         model.grid.boundary_space());
  }
  report.angle_full = sector_angle_estimate(wentzell_generator(full).mat, {}, options).angle_estimate;
  report.angle_comparator =
      sector_angle_estimate(wentzell_generator(comparator).mat, {}, options).angle_estimate;
  report.pass = report.additivity_residual <= 1e-10 &&
                std::abs(report.angle_full - report.angle_comparator) <= 0.1;
  return report;
}

}  // namespace wentzell
