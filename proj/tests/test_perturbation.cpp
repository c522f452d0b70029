#include <doctest.h>

#include <cmath>

#include "wentzell/perturbation.hpp"

using namespace wentzell;

namespace {

WentzellProblem with_p0(const Poly& p0_entry) {
  WentzellProblem p = WentzellProblem::laplacian(-1.0, 0.0);
  MatrixPoly mp;
  mp.n = 1;
  for (Complex c : p0_entry.coeffs) {
    Matrix m(1, 1);
    m(0, 0) = c;
    mp.coeff.push_back(m);
  }
  p.p0 = mp;
  return p;
}

WentzellProblem with_p1_one() {
  WentzellProblem p = WentzellProblem::laplacian(-1.0, 0.0);
  Matrix m(1, 1);
  m(0, 0) = Complex(1.0, 0.0);
  p.p1 = MatrixPoly::constant(m);
  return p;
}

}  // namespace

TEST_CASE("dirichlet identity collapses when P = 0") {
  const DiscreteModel model = build_model(WentzellProblem::laplacian(-1.0, 0.0), 31);
  const DirichletIdentityReport rep = dirichlet_identity_check(model, Complex(5.0, 0.0));
  CHECK(rep.residual1 == 0.0);
  CHECK(rep.residual2 == 0.0);
}

TEST_CASE("dirichlet identity for a zeroth-order perturbation p0(s) = s") {
  const DiscreteModel model = build_model(with_p0(Poly{{Complex(0, 0), Complex(1, 0)}}), 41);
  const DirichletIdentityReport rep = dirichlet_identity_check(model, Complex(5.0, 0.0));
  CHECK(rep.residual1 <= 1e-10);
  CHECK(rep.residual2 <= 1e-10);
}

TEST_CASE("dirichlet identity for a first-order perturbation p1 = 1") {
  const DiscreteModel model = build_model(with_p1_one(), 41);
  const DirichletIdentityReport rep = dirichlet_identity_check(model, Complex(10.0, 0.0));
  CHECK(rep.residual1 <= 1e-10);
  CHECK(rep.residual2 <= 1e-10);
}

TEST_CASE("swapping the roles of A_m and A_m+P swaps the residual roles") {
  // Build the model of A_m + P as the unperturbed operator with
  // perturbation -P; the two identity residuals exchange places and both
  // checks pass identically.
  WentzellProblem forward = with_p0(Poly{{Complex(1.0, 0.0)}});
  WentzellProblem swapped = forward;
  Matrix one(1, 1);
  one(0, 0) = Complex(1.0, 0.0);
  swapped.c = MatrixPoly::constant(one);  // A_m absorbs +P
  Matrix minus(1, 1);
  minus(0, 0) = Complex(-1.0, 0.0);
  swapped.p0 = MatrixPoly::constant(minus);

  const DirichletIdentityReport a =
      dirichlet_identity_check(build_model(forward, 31), Complex(5.0, 0.0));
  const DirichletIdentityReport b =
      dirichlet_identity_check(build_model(swapped, 31), Complex(5.0, 0.0));
  CHECK(a.residual1 <= 1e-10);
  CHECK(a.residual2 <= 1e-10);
  CHECK(b.residual1 <= 1e-10);
  CHECK(b.residual2 <= 1e-10);
}

TEST_CASE("dtn difference formula") {
  SUBCASE("P = 0 gives a zero difference") {
    const DiscreteModel model = build_model(WentzellProblem::laplacian(-1.0, 0.0), 31);
    const DtnDifferenceReport rep = dtn_difference_check(model, Complex(5.0, 0.0));
    CHECK(rep.residual == 0.0);
    CHECK(rep.difference_norm == 0.0);
  }

  SUBCASE("constant shift p0 = 1") {
    const DiscreteModel model = build_model(with_p0(Poly{{Complex(1.0, 0.0)}}), 41);
    const DtnDifferenceReport rep = dtn_difference_check(model, Complex(5.0, 0.0));
    CHECK(rep.residual <= 1e-9);
    CHECK(rep.difference_norm > 0.0);
  }

  SUBCASE("first-order perturbation") {
    const DiscreteModel model = build_model(with_p1_one(), 41);
    const DtnDifferenceReport rep = dtn_difference_check(model, Complex(10.0, 0.0));
    CHECK(rep.residual <= 1e-9);
  }
}

TEST_CASE("dtn additivity in the feedback") {
  const DiscreteModel model = build_model(WentzellProblem::laplacian(-1.0, 0.5), 31);
  // Two deterministic feedback operators.
  Matrix F1(2, model.grid.full_dim());
  Matrix F2(2, model.grid.full_dim());
  for (std::size_t j = 0; j < model.grid.full_dim(); ++j) {
    F1(0, j) = Complex(0.01 * double(j % 5), 0.0);
    F1(1, j) = Complex(-0.02, 0.01);
    F2(0, j) = Complex(0.0, 0.03);
    F2(1, j) = Complex(0.05 * double(j % 3), 0.0);
  }
  const LinOp f1(F1, model.grid.full_space(), model.grid.boundary_space());
  const LinOp f2(F2, model.grid.full_space(), model.grid.boundary_space());
  const LinOp f12(F1 + F2, model.grid.full_space(), model.grid.boundary_space());
  const Complex lambda(3.0, 0.0);
  const Matrix lhs = dtn_operator(model, lambda, OperatorTag::AM, f12).mat;
  const Matrix rhs = dtn_operator(model, lambda, OperatorTag::AM, f1).mat +
                     dtn_operator(model, lambda, OperatorTag::AM, f2).mat;
  CHECK((lhs - rhs).max_abs() <= 1e-12 * std::max(1.0, lhs.max_abs()));
}

TEST_CASE("feedback_split_experiment with C = gamma I") {
  const WentzellProblem p = WentzellProblem::laplacian(-1.0, -0.7);
  const DiscreteModel model = build_model(p, 41);
  const Matrix C = Matrix::identity(2) * Complex(-0.7, 0.0);
  const SplitFeedback split = SplitFeedback::from_boundary_part(model, C);

  // B0 is then exactly the beta * normal-derivative part.
  const DiscreteModel derivative_only = build_model(WentzellProblem::laplacian(-1.0, 0.0), 41);
  CHECK((split.B0.mat - derivative_only.B.mat).max_abs() <= 1e-12);

  const SplitExperimentReport rep =
      feedback_split_experiment(model, split, SplitScenario::CBounded);
  CHECK(rep.additivity_residual <= 1e-10);
  CHECK(rep.pass);
}

TEST_CASE("feedback_split_experiment with C = 0 is trivial") {
  const DiscreteModel model = build_model(WentzellProblem::laplacian(-1.0, 0.0), 41);
  const SplitFeedback split = SplitFeedback::from_boundary_part(model, Matrix(2, 2));
  // With C = 0 the comparator generator of the bounded scenario is the full
  // generator itself, so the two angles coincide exactly.
  const SplitExperimentReport rep =
      feedback_split_experiment(model, split, SplitScenario::CBounded);
  CHECK(rep.additivity_residual <= 1e-12);
  CHECK(rep.angle_full == rep.angle_comparator);
  CHECK(rep.pass);
}
