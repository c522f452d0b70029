#include "wentzell/interval.hpp"

#include <cmath>
#include <sstream>

namespace wentzell {

GridFunction::GridFunction(Grid g, Vector v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.full_dim()) {
    throw BadDimensions("GridFunction: value length does not match grid");
  }
}

Matrix interior_restriction(const Grid& grid) {
  Matrix R(grid.interior_dim(), grid.full_dim());
  for (std::size_t i = 0; i < grid.interior_dim(); ++i) {
    R(i, grid.components + i) = Complex(1.0, 0.0);
  }
  return R;
}

Matrix zero_extension(const Grid& grid) { return interior_restriction(grid).transpose(); }

Matrix node_extraction(const Grid& grid, std::size_t node) {
  Matrix E(grid.components, grid.full_dim());
  for (std::size_t c = 0; c < grid.components; ++c) {
    E(c, node * grid.components + c) = Complex(1.0, 0.0);
  }
  return E;
}

Matrix boundary_derivative(const Grid& grid) {
  const std::size_t n = grid.components;
  const std::size_t N = grid.nodes;
  const double h = grid.spacing();
  Matrix D(2 * n, grid.full_dim());
  for (std::size_t c = 0; c < n; ++c) {
    // f'(0) ~ (-3 f0 + 4 f1 - f2) / 2h
    D(c, 0 * n + c) = Complex(-3.0 / (2.0 * h), 0.0);
    D(c, 1 * n + c) = Complex(4.0 / (2.0 * h), 0.0);
    D(c, 2 * n + c) = Complex(-1.0 / (2.0 * h), 0.0);
    // f'(1) ~ (3 f_{N-1} - 4 f_{N-2} + f_{N-3}) / 2h
    D(n + c, (N - 1) * n + c) = Complex(3.0 / (2.0 * h), 0.0);
    D(n + c, (N - 2) * n + c) = Complex(-4.0 / (2.0 * h), 0.0);
    D(n + c, (N - 3) * n + c) = Complex(1.0 / (2.0 * h), 0.0);
  }
  return D;
}

GridFunction ones(const Grid& grid) {
  Vector v(grid.full_dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = Complex(1.0, 0.0);
  return GridFunction(grid, std::move(v));
}

namespace {

// Adds coef * (matrix-valued weight at node `at`) into the block row of
// output node `row`.
void add_block(Matrix& M, std::size_t row, std::size_t at, const Matrix& weight, double coef,
               std::size_t n) {
  for (std::size_t ci = 0; ci < n; ++ci) {
    for (std::size_t cj = 0; cj < n; ++cj) {
      M(row * n + ci, at * n + cj) += coef * weight(ci, cj);
    }
  }
}

// First-derivative stencil of node `row`, written as (node, coefficient)
// triples: central in the interior, one-sided 3-point at the ends. Both are
// exact on quadratics.
std::vector<std::pair<std::size_t, double>> d1_stencil(std::size_t row, std::size_t N, double h) {
  if (row == 0) return {{0, -3.0 / (2 * h)}, {1, 4.0 / (2 * h)}, {2, -1.0 / (2 * h)}};
  if (row == N - 1)
    return {{N - 1, 3.0 / (2 * h)}, {N - 2, -4.0 / (2 * h)}, {N - 3, 1.0 / (2 * h)}};
  return {{row - 1, -1.0 / (2 * h)}, {row + 1, 1.0 / (2 * h)}};
}

// Second-derivative stencil: central (1,-2,1)/h^2, shifted inward at the ends.
std::vector<std::pair<std::size_t, double>> d2_stencil(std::size_t row, std::size_t N, double h) {
  const double w = 1.0 / (h * h);
  if (row == 0) return {{0, w}, {1, -2.0 * w}, {2, w}};
  if (row == N - 1) return {{N - 1, w}, {N - 2, -2.0 * w}, {N - 3, w}};
  return {{row - 1, w}, {row, -2.0 * w}, {row + 1, w}};
}

}  // namespace

DiscreteModel build_model(const WentzellProblem& problem, std::size_t N) {
  problem.validate();
  if (N < 5) throw BadDimensions("build_model: N must be at least 5");

  const std::size_t n = problem.n;
  Grid grid{N, n};
  const double h = grid.spacing();

  // Sample and validate the diffusion coefficient.
  std::vector<Matrix> a_at(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double s = grid.node(i);
    Matrix ai(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      const Complex v = problem.a[c].eval(s);
      if (std::abs(v.imag()) > 1e-14 * (1.0 + std::abs(v.real()))) {
        throw BadParameters("build_model: diffusion coefficient a must be real");
      }
      if (v.real() < problem.a_min) {
        std::ostringstream os;
        os << "build_model: a_" << c << "(" << s << ") = " << v.real() << " < a_min "
           << problem.a_min;
        throw PositivityViolation(os.str());
      }
      ai(c, c) = Complex(v.real(), 0.0);
    }
    a_at[i] = std::move(ai);
  }

  const bool has_b = !problem.b.is_zero();
  const bool has_c = !problem.c.is_zero();
  const bool has_p1 = !problem.p1.is_zero();
  const bool has_p0 = !problem.p0.is_zero();

  Matrix Am(grid.full_dim(), grid.full_dim());
  Matrix P(grid.full_dim(), grid.full_dim());
  const Matrix id_n = Matrix::identity(n);
  for (std::size_t i = 0; i < N; ++i) {
    const double s = grid.node(i);
    for (auto [at, coef] : d2_stencil(i, N, h)) add_block(Am, i, at, a_at[i], coef, n);
    if (has_b) {
      const Matrix bi = problem.b.eval(s);
      for (auto [at, coef] : d1_stencil(i, N, h)) add_block(Am, i, at, bi, coef, n);
    }
    if (has_c) add_block(Am, i, i, problem.c.eval(s), 1.0, n);
    if (has_p1) {
      const Matrix pi = problem.p1.eval(s);
      for (auto [at, coef] : d1_stencil(i, N, h)) add_block(P, i, at, pi, coef, n);
    }
    if (has_p0) add_block(P, i, i, problem.p0.eval(s), 1.0, n);
  }

  // Trace rows and feedback rows.
  Matrix L = Matrix::vstack(node_extraction(grid, 0), node_extraction(grid, N - 1));
  const Matrix D = boundary_derivative(grid);
  const Matrix D0 = D.block(0, 0, n, grid.full_dim());
  const Matrix D1 = D.block(n, 0, n, grid.full_dim());
  Matrix B = problem.M0 * D0 + problem.M1 * D1 + problem.N0 * node_extraction(grid, 0) +
             problem.N1 * node_extraction(grid, N - 1);

  const Matrix R = interior_restriction(grid);
  const Matrix E = zero_extension(grid);
  Matrix A0 = R * Am * E;

  DiscreteModel model;
  model.grid = grid;
  model.problem = problem;
  model.A_m = LinOp(std::move(Am), grid.full_space(), grid.full_space());
  model.L = LinOp(std::move(L), grid.full_space(), grid.boundary_space());
  model.B = LinOp(std::move(B), grid.full_space(), grid.boundary_space());
  model.A0 = LinOp(std::move(A0), grid.interior_space(), grid.interior_space());
  model.P = LinOp(std::move(P), grid.full_space(), grid.full_space());
  return model;
}

LinOp wentzell_generator(const DiscreteModel& model) {
  const Grid& grid = model.grid;
  const std::size_t n = grid.components;
  Matrix G = model.A_m.mat + model.P.mat;
  // Dynamic boundary rows: d/dt of the boundary values is the feedback.
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t j = 0; j < grid.full_dim(); ++j) {
      G(c, j) = model.B.mat(c, j);
      G((grid.nodes - 1) * n + c, j) = model.B.mat(n + c, j);
    }
  }
  return LinOp(std::move(G), grid.full_space(), grid.full_space());
}

DomainBasis wentzell_domain_basis(const DiscreteModel& model) {
  const Grid& grid = model.grid;
  const std::size_t n = grid.components;

  // Constraint rows: boundary rows of (A_m + P) minus the feedback rows.
  Matrix constraint(2 * n, grid.full_dim());
  const Matrix AmP = model.A_m.mat + model.P.mat;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t j = 0; j < grid.full_dim(); ++j) {
      constraint(c, j) = AmP(c, j) - model.B.mat(c, j);
      constraint(n + c, j) = AmP((grid.nodes - 1) * n + c, j) - model.B.mat(n + c, j);
    }
  }

  NullSpace ns = kernel_basis(constraint);
  DomainBasis out;
  out.constraint_rank = ns.rank;
  out.degenerate = ns.rank < 2 * n;
  out.basis.reserve(ns.basis.cols());
  for (std::size_t j = 0; j < ns.basis.cols(); ++j) {
    out.basis.emplace_back(grid, ns.basis.col(j));
  }
  return out;
}

}  // namespace wentzell
