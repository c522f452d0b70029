#include "wentzell/decomposition.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace wentzell {

std::string to_string(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::AM: return "A_m";
    case OperatorTag::AMP: return "A_m+P";
    case OperatorTag::GM: return "G_m";
  }
  return "?";
}

namespace {

// Full matrix of the tagged maximal operator.
Matrix tagged_operator(const DiscreteModel& model, OperatorTag op) {
  switch (op) {
    case OperatorTag::AM: return model.A_m.mat;
    case OperatorTag::AMP: return model.A_m.mat + model.P.mat;
    case OperatorTag::GM: {
      const Matrix L0 = dirichlet_map(model, Complex(0.0, 0.0), OperatorTag::AM).map.mat;
      const Matrix id = Matrix::identity(model.grid.full_dim());
      return model.A_m.mat - L0 * (model.B.mat * (id - L0 * model.L.mat));
    }
  }
  throw BadParameters("tagged_operator: unknown tag");
}

}  // namespace

DirichletMap dirichlet_map(const DiscreteModel& model, Complex lambda, OperatorTag op) {
  const Grid& grid = model.grid;
  const std::size_t n = grid.components;
  const std::size_t N = grid.nodes;
  const Matrix full = tagged_operator(model, op);

  // Interior rows: lambda - op.  Boundary rows: trace = prescribed data.
  Matrix S(grid.full_dim(), grid.full_dim());
  Matrix rhs(grid.full_dim(), 2 * n);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t row = i * n + c;
      if (i == 0 || i == N - 1) {
        S(row, row) = Complex(1.0, 0.0);
        rhs(row, (i == 0 ? c : n + c)) = Complex(1.0, 0.0);
      } else {
        for (std::size_t j = 0; j < grid.full_dim(); ++j) S(row, j) = -full(row, j);
        S(row, row) += lambda;
      }
    }
  }

  Matrix columns;
  try {
    columns = solve_linear(S, rhs);
  } catch (const SingularMatrix&) {
    std::ostringstream os;
    os << "dirichlet_map: lambda = " << lambda.real() << "+" << lambda.imag()
       << "i hits the discrete Dirichlet spectrum of " << to_string(op);
    throw ResolventPole(os.str());
  }
  return DirichletMap{lambda, op,
                      LinOp(std::move(columns), grid.boundary_space(), grid.full_space())};
}

DtnMatrix dtn_operator(const DiscreteModel& model, Complex lambda, OperatorTag op,
                       const LinOp& feedback, std::string feedback_name) {
  const DirichletMap lift = dirichlet_map(model, lambda, op);
  return DtnMatrix{lambda, op, std::move(feedback_name), (feedback * lift.map).mat};
}

DtnMatrix dtn_operator(const DiscreteModel& model, Complex lambda, OperatorTag op) {
  return dtn_operator(model, lambda, op, model.B, "B");
}

SimilarityPair similarity_pair(const DiscreteModel& model, OperatorTag op) {
  const Grid& grid = model.grid;
  const Matrix L0 = dirichlet_map(model, Complex(0.0, 0.0), op).map.mat;
  const Matrix R = interior_restriction(grid);
  const Matrix E = zero_extension(grid);
  const Matrix id = Matrix::identity(grid.full_dim());

  Matrix T = Matrix::vstack(R * (id - L0 * model.L.mat), model.L.mat);
  Matrix T_inv = Matrix::hstack(E, L0);
  return SimilarityPair{LinOp(std::move(T), grid.full_space(), grid.product_space()),
                        LinOp(std::move(T_inv), grid.product_space(), grid.full_space())};
}

GOperators build_G(const DiscreteModel& model, OperatorTag op) {
  if (op == OperatorTag::GM) throw BadParameters("build_G: tag must be A_m or A_m+P");
  const Grid& grid = model.grid;
  const Matrix full = tagged_operator(model, op);
  const Matrix L0 = dirichlet_map(model, Complex(0.0, 0.0), op).map.mat;
  const Matrix R = interior_restriction(grid);
  const Matrix E = zero_extension(grid);
  const Matrix id = Matrix::identity(grid.full_dim());

  GOperators g;
  g.grid = grid;
  g.op = op;
  g.G_m = LinOp(full - L0 * (model.B.mat * (id - L0 * model.L.mat)), grid.full_space(),
                grid.full_space());
  g.g00 = R * full * E - R * (L0 * (model.B.mat * E));
  g.lifting = L0;
  g.feedback = model.B.mat;
  return g;
}

Matrix GOperators::resolvent_interior(Complex lambda) const {
  Matrix M = Matrix::identity(grid.interior_dim()) * lambda - g00;
  try {
    return inverse(M);
  } catch (const SingularMatrix&) {
    std::ostringstream os;
    os << "R(lambda, G00): lambda = " << lambda.real() << "+" << lambda.imag() << "i is a pole";
    throw ResolventPole(os.str());
  }
}

Matrix GOperators::resolvent_full(Complex lambda) const {
  const Matrix R = interior_restriction(grid);
  const Matrix E = zero_extension(grid);
  return E * resolvent_interior(lambda) * R;
}

OperatorMatrix operator_matrix(const DiscreteModel& model, OperatorTag op) {
  if (op == OperatorTag::GM) throw BadParameters("operator_matrix: tag must be A_m or A_m+P");
  const Grid& grid = model.grid;
  const std::size_t ni = grid.interior_dim();
  const std::size_t nb = grid.boundary_dim();

  const GOperators g = build_G(model, op);
  const Matrix dtn = g.feedback * g.lifting;  // N = B L0
  const Matrix R = interior_restriction(grid);
  const Matrix E = zero_extension(grid);

  const Matrix coupling = R * (g.lifting * dtn);   // interior part of L0 N
  const Matrix feedback_int = g.feedback * E;      // B restricted to zero-trace data

  Matrix A(ni + nb, ni + nb);
  A.set_block(0, 0, g.g00);
  A.set_block(0, ni, Complex(-1.0, 0.0) * coupling);
  A.set_block(ni, 0, feedback_int);
  A.set_block(ni, ni, dtn);

  Matrix A0 = A;
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < ni; ++j) A0(ni + i, j) = Complex(0.0, 0.0);
  }

  OperatorMatrix om;
  om.grid = grid;
  om.op = op;
  om.dtn = dtn;
  om.A = LinOp(std::move(A), grid.product_space(), grid.product_space());
  om.A0 = LinOp(std::move(A0), grid.product_space(), grid.product_space());
  om.op_full_ = tagged_operator(model, op);
  om.lifting_ = g.lifting;
  om.feedback_ = g.feedback;
  return om;
}

double OperatorMatrix::domain_membership_residual(const Vector& f_interior,
                                                  const Vector& x) const {
  if (f_interior.size() != grid.interior_dim() || x.size() != grid.boundary_dim()) {
    throw DimensionMismatch("domain_membership_residual: bad input sizes");
  }
  const Matrix E = zero_extension(grid);
  Vector f_full = E * f_interior;
  Vector w = op_full_ * f_full - lifting_ * (feedback_ * f_full) - lifting_ * (dtn * x);
  // Trace of w: the first and last node blocks.
  const std::size_t n = grid.components;
  double r = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    r = std::max(r, std::abs(w[c]));
    r = std::max(r, std::abs(w[(grid.nodes - 1) * n + c]));
  }
  return r;
}

bool exact_tier(const WentzellProblem& problem) {
  if (!problem.b.is_zero() || !problem.c.is_zero() || problem.has_perturbation()) return false;
  for (const Poly& p : problem.a) {
    for (std::size_t k = 1; k < p.coeffs.size(); ++k) {
      if (p.coeffs[k] != Complex(0.0, 0.0)) return false;
    }
  }
  return true;
}

SimilarityReport similarity_check(const DiscreteModel& model, std::size_t samples,
                                  std::uint64_t seed) {
  const OperatorTag tag =
      model.problem.has_perturbation() ? OperatorTag::AMP : OperatorTag::AM;
  const DomainBasis domain = wentzell_domain_basis(model);
  const SimilarityPair pair = similarity_pair(model, tag);
  const OperatorMatrix om = operator_matrix(model, tag);
  const Matrix gen = model.A_m.mat + model.P.mat;
  const double am_norm = model.A_m.mat.sup_norm();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SimilarityReport report;
  report.samples = samples;
  report.seed = seed;
  report.op = tag;
  report.exact_tier = exact_tier(model.problem);
  report.residuals.reserve(samples);

  for (std::size_t s = 0; s < samples; ++s) {
    Vector f(model.grid.full_dim());
    for (const GridFunction& b : domain.basis) {
      const Complex w(gauss(rng), gauss(rng));
      for (std::size_t i = 0; i < f.size(); ++i) f[i] += w * b.values[i];
    }
    const double fnorm = f.sup_norm();
    if (fnorm == 0.0) continue;

    Vector lhs = pair.T.apply(gen * f);
    Vector rhs = om.A.apply(pair.T.apply(f));
    const double r = (lhs - rhs).sup_norm() / (fnorm * am_norm);
    report.residuals.push_back(r);
    report.max_residual = std::max(report.max_residual, r);
  }
  return report;
}

ResolventBlockReport resolvent_block_check(const DiscreteModel& model,
                                           const std::vector<double>& lambdas) {
  const OperatorTag tag =
      model.problem.has_perturbation() ? OperatorTag::AMP : OperatorTag::AM;
  const GOperators g = build_G(model, tag);
  const OperatorMatrix om = operator_matrix(model, tag);
  const Grid& grid = model.grid;
  const std::size_t ni = grid.interior_dim();
  const std::size_t nb = grid.boundary_dim();
  const Matrix R = interior_restriction(grid);
  const Matrix id_b = Matrix::identity(nb);
  const Matrix id_i = Matrix::identity(ni);

  ResolventBlockReport report;
  for (double lambda : lambdas) {
    const Complex lam(lambda, 0.0);

    // The boundary block is tiny, so a full singular-value health check is
    // the robust way to catch lambda on the spectrum of N (the LU pivot
    // alone can ride just above its threshold on lifting-solve noise).
    const Matrix shifted_dtn = id_b * lam - om.dtn;
    const std::vector<double> sv = singular_values(shifted_dtn);
    Matrix r22;
    try {
      if (sv.back() <= 1e-10 * std::max(sv.front(), 1.0)) {
        throw SingularMatrix("spectrum of N");
      }
      r22 = solve_linear(shifted_dtn, id_b);
    } catch (const SingularMatrix&) {
      std::ostringstream os;
      os << "resolvent_block_check: lambda = " << lambda << " is in the spectrum of N";
      throw SpectrumHit(os.str());
    }

    const Matrix M = id_i * lam - g.g00;
    const Matrix r11 = g.resolvent_interior(lam);
    const Matrix coupling = R * (g.lifting * om.dtn);  // interior part of L0 N
    const Matrix r12 = Complex(-1.0, 0.0) * (r11 * (coupling * r22));

    // Defining system, all basis right-hand sides at once.
    const double res_g = (M * r11 - id_i).sup_norm();
    const Matrix drive = coupling * r22;
    const double drive_scale = std::max(1.0, drive.sup_norm());
    const double res_y = (M * r12 + drive).sup_norm() / drive_scale;
    const double res_boundary = ((id_b * lam - om.dtn) * r22 - id_b).sup_norm();

    // Brute-force route: invert (lambda - A0) on the product space and
    // compare with the assembled block formula.
    const std::size_t m = ni + nb;
    Matrix direct;
    try {
      direct = solve_linear(Matrix::identity(m) * lam - om.A0.mat, Matrix::identity(m));
    } catch (const SingularMatrix&) {
      std::ostringstream os;
      os << "resolvent_block_check: lambda = " << lambda << " is a pole of the product operator";
      throw ResolventPole(os.str());
    }
    double lower_left = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
      for (std::size_t j = 0; j < ni; ++j) {
        lower_left = std::max(lower_left, std::abs(direct(ni + i, j)));
      }
    }
    const double direct_scale = std::max(1.0, direct.max_abs());
    lower_left /= direct_scale;

    Matrix assembled(m, m);
    assembled.set_block(0, 0, r11);
    assembled.set_block(0, ni, r12);
    assembled.set_block(ni, ni, r22);
    const double block_vs_direct = (direct - assembled).max_abs() / direct_scale;

    ResolventBlockReport::Entry e{lambda, std::max(res_g, res_y), res_boundary, lower_left,
                                  block_vs_direct};
    report.entries.push_back(e);
    report.max_res_interior = std::max(report.max_res_interior, e.res_interior);
    report.max_res_boundary = std::max(report.max_res_boundary, e.res_boundary);
    report.max_lower_left = std::max(report.max_lower_left, e.lower_left);
    report.max_block_vs_direct = std::max(report.max_block_vs_direct, e.block_vs_direct);
  }
  return report;
}

}  // namespace wentzell
