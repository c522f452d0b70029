#include <doctest.h>

#include <cmath>

#include "wentzell/decomposition.hpp"
#include "wentzell/fit.hpp"

using namespace wentzell;

namespace {

WentzellProblem canonical() { return WentzellProblem::laplacian(-1.0, 0.0); }

WentzellProblem variable_coefficients() {
  WentzellProblem p = WentzellProblem::laplacian(-1.0, 0.0);
  p.a = {Poly{{Complex(1.0, 0.0), Complex(0.5, 0.0)}}};  // 1 + s/2
  Matrix b1(1, 1);
  b1(0, 0) = Complex(1.0, 0.0);
  p.b = MatrixPoly::constant(b1);
  return p;
}

}  // namespace

TEST_CASE("dirichlet_map at lambda = 0 reproduces harmonic liftings exactly") {
  const DiscreteModel model = build_model(canonical(), 21);
  const DirichletMap map = dirichlet_map(model, Complex(0.0, 0.0));

  SUBCASE("constants are discretely harmonic") {
    Vector x(2);
    x[0] = Complex(1, 0);
    x[1] = Complex(1, 0);
    const Vector lifted = map.map.apply(x);
    for (std::size_t i = 0; i < lifted.size(); ++i) {
      CHECK(std::abs(lifted[i] - Complex(1, 0)) < 1e-13);
    }
  }

  SUBCASE("the lifting of (x0, x1) is the linear interpolant") {
    Vector x(2);
    x[0] = Complex(2, 0);
    x[1] = Complex(-1, 0);
    const Vector lifted = map.map.apply(x);
    for (std::size_t i = 0; i < model.grid.nodes; ++i) {
      const double s = model.grid.node(i);
      CHECK(std::abs(lifted[i] - (Complex(2, 0) * (1 - s) + Complex(-1, 0) * s)) < 1e-12);
    }
  }
}

TEST_CASE("dirichlet_map converges at second order to the sinh profile") {
  // lambda = 1, x = (1, 0): closed-form solution sinh(1-s)/sinh(1).
  std::vector<double> hs, errs;
  for (std::size_t N : {51, 101, 201, 401}) {
    const DiscreteModel model = build_model(canonical(), N);
    const DirichletMap map = dirichlet_map(model, Complex(1.0, 0.0));
    Vector x(2);
    x[0] = Complex(1, 0);
    const Vector lifted = map.map.apply(x);
    double err = 0.0;
    for (std::size_t i = 0; i < model.grid.nodes; ++i) {
      const double s = model.grid.node(i);
      err = std::max(err, std::abs(lifted[i] - Complex(std::sinh(1.0 - s) / std::sinh(1.0), 0)));
    }
    hs.push_back(model.grid.spacing());
    errs.push_back(err);
  }
  const double order = fit_convergence_order(hs, errs);
  CHECK(order == doctest::Approx(2.0).epsilon(0.15));  // 2.0 +/- 0.3
}

TEST_CASE("dirichlet_map raises ResolventPole on the Dirichlet spectrum") {
  const DiscreteModel model = build_model(canonical(), 11);
  const double h = model.grid.spacing();
  const double s = std::sin(3.14159265358979323846 * h / 2.0);
  const double eig = -4.0 / (h * h) * s * s;  // first eigenvalue of A0
  CHECK_THROWS_AS(dirichlet_map(model, Complex(eig, 0.0)), ResolventPole);
}

TEST_CASE("dtn_operator canonical matrix") {
  const DiscreteModel model = build_model(canonical(), 41);
  const DtnMatrix dtn = dtn_operator(model, Complex(0.0, 0.0));
  CHECK(std::abs(dtn.mat(0, 0) - Complex(-1, 0)) <= 1e-12);
  CHECK(std::abs(dtn.mat(0, 1) - Complex(1, 0)) <= 1e-12);
  CHECK(std::abs(dtn.mat(1, 0) - Complex(1, 0)) <= 1e-12);
  CHECK(std::abs(dtn.mat(1, 1) - Complex(-1, 0)) <= 1e-12);
}

TEST_CASE("dtn_operator with trace-only feedback is gamma times the identity") {
  const DiscreteModel model = build_model(WentzellProblem::laplacian(0.0, -2.5), 31);
  const DtnMatrix dtn = dtn_operator(model, Complex(0.0, 0.0));
  const Matrix expected = Matrix::identity(2) * Complex(-2.5, 0.0);
  CHECK((dtn.mat - expected).max_abs() <= 1e-12);
}

TEST_CASE("dtn_operator for M = 0 stacks N0 and N1 columnwise") {
  WentzellProblem p;
  p.n = 2;
  p.a = {Poly::constant(Complex(1, 0)), Poly::constant(Complex(2, 0))};
  p.b = MatrixPoly::zero(2);
  p.c = MatrixPoly::zero(2);
  p.p1 = MatrixPoly::zero(2);
  p.p0 = MatrixPoly::zero(2);
  p.M0 = Matrix(4, 2);
  p.M1 = Matrix(4, 2);
  p.N0 = Matrix(4, 2);
  p.N1 = Matrix(4, 2);
  // Arbitrary complex entries.
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      p.N0(i, j) = Complex(0.3 * double(i) - 0.1 * double(j), 0.2 * double(i + j));
      p.N1(i, j) = Complex(-0.4 * double(j) + 0.05 * double(i), 0.1 * double(i) - 0.3);
    }
  }
  const DiscreteModel model = build_model(p, 17);
  const DtnMatrix dtn = dtn_operator(model, Complex(0.0, 0.0));
  // Brute force: N = [N0 | N1] on (x(0); x(1)).
  const Matrix expected = Matrix::hstack(p.N0, p.N1);
  CHECK((dtn.mat - expected).max_abs() <= 1e-12);
}

TEST_CASE("similarity_pair is an inverse pair with the right projections") {
  const DiscreteModel model = build_model(canonical(), 31);
  const SimilarityPair pair = similarity_pair(model);
  const std::size_t full = model.grid.full_dim();
  const std::size_t prod = model.grid.interior_dim() + model.grid.boundary_dim();

  const Matrix tti = (pair.T * pair.T_inv).mat - Matrix::identity(prod);
  const Matrix tit = (pair.T_inv * pair.T).mat - Matrix::identity(full);
  CHECK(tti.max_abs() <= 1e-12);
  CHECK(tit.max_abs() <= 1e-12);

  SUBCASE("a lifting maps to (0, x)") {
    const DirichletMap map = dirichlet_map(model, Complex(0.0, 0.0));
    Vector x(2);
    x[0] = Complex(0.5, -1.0);
    x[1] = Complex(2.0, 0.25);
    const Vector out = pair.T.apply(map.map.apply(x));
    for (std::size_t i = 0; i < model.grid.interior_dim(); ++i) CHECK(std::abs(out[i]) < 1e-12);
    CHECK(std::abs(out[model.grid.interior_dim()] - x[0]) < 1e-12);
    CHECK(std::abs(out[model.grid.interior_dim() + 1] - x[1]) < 1e-12);
  }

  SUBCASE("zero-trace data maps to (f, 0)") {
    Vector f(full);
    for (std::size_t i = 1; i + 1 < model.grid.nodes; ++i) {
      f[i] = Complex(std::sin(3.0 * model.grid.node(i)), 0.1);
    }
    const Vector out = pair.T.apply(f);
    for (std::size_t i = 0; i < model.grid.interior_dim(); ++i) {
      CHECK(std::abs(out[i] - f[i + 1]) < 1e-12);
    }
    CHECK(std::abs(out[model.grid.interior_dim()]) < 1e-12);
    CHECK(std::abs(out[model.grid.interior_dim() + 1]) < 1e-12);
  }
}

TEST_CASE("L0 L is a projection") {
  const DiscreteModel model = build_model(variable_coefficients(), 25);
  const Matrix L0 = dirichlet_map(model, Complex(0.0, 0.0)).map.mat;
  const Matrix P = L0 * model.L.mat;
  CHECK((P * P - P).max_abs() <= 1e-12 * std::max(1.0, P.max_abs()));
}

TEST_CASE("lifting columns are transversal to the zero-trace subspace") {
  const DiscreteModel model = build_model(canonical(), 21);
  const Matrix L0 = dirichlet_map(model, Complex(0.0, 0.0)).map.mat;
  const Matrix stacked = Matrix::hstack(zero_extension(model.grid), L0);
  CHECK(numerical_rank(stacked) == model.grid.full_dim());
}

TEST_CASE("trace of the lifting is the identity across lambda") {
  const DiscreteModel model = build_model(variable_coefficients(), 21);
  for (double lambda : {0.0, 1.0, 10.0}) {
    const DirichletMap map = dirichlet_map(model, Complex(lambda, 0.0));
    const Matrix defect = model.L.mat * map.map.mat - Matrix::identity(2);
    CHECK(defect.max_abs() <= 1e-12);
  }
}

TEST_CASE("lifting columns solve the interior equation") {
  const DiscreteModel model = build_model(variable_coefficients(), 31);
  const Complex lambda(1.0, 0.5);
  const DirichletMap map = dirichlet_map(model, lambda);
  const Matrix W =
      Matrix::identity(model.grid.full_dim()) * lambda * map.map.mat - model.A_m.mat * map.map.mat;
  const double scale = model.A_m.mat.sup_norm() * std::max(1.0, map.map.mat.max_abs());
  double interior_residual = 0.0;
  for (std::size_t i = 1; i + 1 < model.grid.nodes; ++i) {
    for (std::size_t j = 0; j < 2; ++j) interior_residual = std::max(interior_residual, std::abs(W(i, j)));
  }
  CHECK(interior_residual <= 1e-10 * scale);
}

TEST_CASE("build_G") {
  SUBCASE("zero feedback collapses G_m to A_m") {
    const DiscreteModel model = build_model(WentzellProblem::laplacian(0.0, 0.0), 17);
    const GOperators g = build_G(model);
    CHECK((g.G_m.mat - model.A_m.mat).max_abs() == 0.0);
  }

  SUBCASE("on zero-trace data G_m f = A_m f - L0 B f") {
    const DiscreteModel model = build_model(canonical(), 17);
    const GOperators g = build_G(model);
    Vector f(model.grid.full_dim());
    for (std::size_t i = 1; i + 1 < model.grid.nodes; ++i) {
      f[i] = Complex(model.grid.node(i) * (1 - model.grid.node(i)), 0.0);
    }
    const Vector lhs = g.G_m.mat * f;
    const Vector rhs = model.A_m.mat * f - g.lifting * (model.B.mat * f);
    CHECK((lhs - rhs).sup_norm() <= 1e-10);
  }

  SUBCASE("resolvent residual") {
    const DiscreteModel model = build_model(canonical(), 33);
    const GOperators g = build_G(model);
    const Complex lambda(7.0, 0.0);
    const Matrix R = g.resolvent_interior(lambda);
    const Matrix M = Matrix::identity(model.grid.interior_dim()) * lambda - g.g00;
    CHECK((M * R - Matrix::identity(model.grid.interior_dim())).sup_norm() <= 1e-10);
  }

  SUBCASE("full-grid resolvent solves the interior system with zero trace") {
    const DiscreteModel model = build_model(canonical(), 33);
    const GOperators g = build_G(model);
    const Complex lambda(7.0, 0.0);
    const Matrix Rf = g.resolvent_full(lambda);
    Vector rhs(model.grid.full_dim());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      rhs[i] = Complex(std::sin(2.0 * model.grid.node(i)), -0.25);
    }
    const Vector f = Rf * rhs;
    CHECK(std::abs(f[0]) == 0.0);
    CHECK(std::abs(f[model.grid.full_dim() - 1]) == 0.0);
    // lambda f - A_m f + L0 B f = rhs at the interior nodes.
    const Vector residual =
        lambda * f - model.A_m.mat * f + g.lifting * (model.B.mat * f) - rhs;
    for (std::size_t i = 1; i + 1 < model.grid.nodes; ++i) {
      CHECK(std::abs(residual[i]) <= 1e-10 * model.A_m.mat.sup_norm());
    }
  }
}

TEST_CASE("operator_matrix block actions") {
  const DiscreteModel model = build_model(canonical(), 19);
  const OperatorMatrix om = operator_matrix(model);
  const GOperators g = build_G(model);
  const std::size_t ni = model.grid.interior_dim();
  const std::size_t nb = model.grid.boundary_dim();
  const Matrix E = zero_extension(model.grid);
  const Matrix R = interior_restriction(model.grid);

  SUBCASE("x = 0 column") {
    Vector fx(ni + nb);
    for (std::size_t i = 0; i < ni; ++i) fx[i] = Complex(std::cos(double(i)), 0.3);
    const Vector out = om.A.apply(fx);
    Vector f_int(ni);
    for (std::size_t i = 0; i < ni; ++i) f_int[i] = fx[i];
    const Vector g0f = g.g00 * f_int;
    const Vector bf = model.B.mat * (E * f_int);
    for (std::size_t i = 0; i < ni; ++i) CHECK(std::abs(out[i] - g0f[i]) < 1e-10);
    for (std::size_t i = 0; i < nb; ++i) CHECK(std::abs(out[ni + i] - bf[i]) < 1e-10);
  }

  SUBCASE("f = 0 column") {
    Vector fx(ni + nb);
    fx[ni] = Complex(1.0, -2.0);
    fx[ni + 1] = Complex(0.5, 0.0);
    Vector x(nb);
    x[0] = fx[ni];
    x[1] = fx[ni + 1];
    const Vector out = om.A.apply(fx);
    const Vector coupling = R * (g.lifting * (om.dtn * x));
    const Vector nx = om.dtn * x;
    for (std::size_t i = 0; i < ni; ++i) CHECK(std::abs(out[i] + coupling[i]) < 1e-10);
    for (std::size_t i = 0; i < nb; ++i) CHECK(std::abs(out[ni + i] - nx[i]) < 1e-10);
  }

  SUBCASE("A - A0 is the feedback block") {
    const Matrix diff = om.A.mat - om.A0.mat;
    const Matrix BE = model.B.mat * E;
    for (std::size_t i = 0; i < nb; ++i) {
      for (std::size_t j = 0; j < ni; ++j) CHECK(std::abs(diff(ni + i, j) - BE(i, j)) < 1e-12);
      for (std::size_t j = 0; j < nb; ++j) CHECK(std::abs(diff(ni + i, ni + j)) < 1e-12);
    }
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t j = 0; j < ni + nb; ++j) CHECK(std::abs(diff(i, j)) < 1e-12);
    }
  }

  SUBCASE("A0 lower-left block is structurally zero") {
    for (std::size_t i = 0; i < nb; ++i) {
      for (std::size_t j = 0; j < ni; ++j) CHECK(om.A0.mat(ni + i, j) == Complex(0.0, 0.0));
    }
  }

  SUBCASE("domain membership residual vanishes on transformed domain vectors") {
    const SimilarityPair pair = similarity_pair(model);
    const DomainBasis basis = wentzell_domain_basis(model);
    const Vector tf = pair.T.apply(basis.basis.front().values);
    Vector f_int(ni), x(nb);
    for (std::size_t i = 0; i < ni; ++i) f_int[i] = tf[i];
    for (std::size_t i = 0; i < nb; ++i) x[i] = tf[ni + i];
    CHECK(om.domain_membership_residual(f_int, x) <= 1e-8);
  }
}

TEST_CASE("similarity_check") {
  SUBCASE("exact tier at N = 101") {
    const DiscreteModel model = build_model(canonical(), 101);
    const SimilarityReport rep = similarity_check(model, 20, 0);
    CHECK(rep.exact_tier);
    CHECK(rep.max_residual <= 1e-9);
  }

  SUBCASE("pure Wentzell still passes (upper triangular case)") {
    const DiscreteModel model = build_model(WentzellProblem::laplacian(0.0, 0.0), 61);
    const SimilarityReport rep = similarity_check(model, 10, 1);
    CHECK(rep.max_residual <= 1e-9);
  }

  SUBCASE("general tier holds to solver precision on refined grids") {
    // The transform, the operator matrix and the domain constraint are all
    // built from one discrete operator family, so the identity stays exact
    // (well under the order-2 requirement) even with variable coefficients.
    for (std::size_t N : {51, 101, 201, 401}) {
      const DiscreteModel model = build_model(variable_coefficients(), N);
      const SimilarityReport rep = similarity_check(model, 10, 0);
      CHECK_FALSE(rep.exact_tier);
      CHECK(rep.max_residual <= 1e-9);
    }
  }

  SUBCASE("deterministic given the seed") {
    const DiscreteModel model = build_model(canonical(), 41);
    const SimilarityReport a = similarity_check(model, 8, 42);
    const SimilarityReport b = similarity_check(model, 8, 42);
    REQUIRE(a.residuals.size() == b.residuals.size());
    for (std::size_t i = 0; i < a.residuals.size(); ++i) CHECK(a.residuals[i] == b.residuals[i]);
  }
}

TEST_CASE("resolvent_block_check") {
  const DiscreteModel model = build_model(canonical(), 41);

  SUBCASE("residuals at the default lambda list") {
    const ResolventBlockReport rep = resolvent_block_check(model, {1.0, 10.0, 100.0});
    CHECK(rep.max_res_interior <= 1e-9);
    CHECK(rep.max_res_boundary <= 1e-12);
    CHECK(rep.max_lower_left <= 1e-12);
    CHECK(rep.max_block_vs_direct <= 1e-8);
  }

  SUBCASE("lambda = 0 with gamma = 0 hits the spectrum of N") {
    // N = [[-1,1],[1,-1]] has eigenvalue 0.
    CHECK_THROWS_AS(resolvent_block_check(model, {0.0}), SpectrumHit);
  }
}

TEST_CASE("dirichlet_map for the G_m tag") {
  // With zero feedback G_m = A_m, so the two liftings coincide; with the
  // canonical feedback they still share exact traces.
  const DiscreteModel pure = build_model(WentzellProblem::laplacian(0.0, 0.0), 21);
  const Matrix lift_am = dirichlet_map(pure, Complex(2.0, 0.0), OperatorTag::AM).map.mat;
  const Matrix lift_gm = dirichlet_map(pure, Complex(2.0, 0.0), OperatorTag::GM).map.mat;
  CHECK((lift_am - lift_gm).max_abs() <= 1e-11);

  const DiscreteModel model = build_model(canonical(), 21);
  const DirichletMap gm = dirichlet_map(model, Complex(2.0, 0.0), OperatorTag::GM);
  CHECK((model.L.mat * gm.map.mat - Matrix::identity(2)).max_abs() <= 1e-12);
  // Interior rows of (lambda - G_m) annihilate the lifting columns.
  const Matrix Gm = build_G(model).G_m.mat;
  const Matrix W = gm.map.mat * Complex(2.0, 0.0) - Gm * gm.map.mat;
  for (std::size_t i = 1; i + 1 < model.grid.nodes; ++i) {
    CHECK(std::abs(W(i, 0)) <= 1e-9);
    CHECK(std::abs(W(i, 1)) <= 1e-9);
  }
}

TEST_CASE("dtn continuity in lambda") {
  const DiscreteModel model = build_model(canonical(), 41);
  const Matrix n2 = dtn_operator(model, Complex(2.0, 0.0)).mat;
  const Matrix n21 = dtn_operator(model, Complex(2.1, 0.0)).mat;
  const Matrix n205 = dtn_operator(model, Complex(2.05, 0.0)).mat;
  const double d1 = (n21 - n2).sup_norm();
  const double d2 = (n205 - n2).sup_norm();
  // Lipschitz on compacts away from poles: halving the step roughly halves
  // the difference.
  CHECK(d2 <= 0.75 * d1);
  CHECK(d1 <= 10.0 * 0.1);  // crude Lipschitz constant bound
}
