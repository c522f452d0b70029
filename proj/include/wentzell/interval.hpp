#ifndef WENTZELL_INTERVAL_HPP
#define WENTZELL_INTERVAL_HPP

#include <vector>

#include "wentzell/problem.hpp"
#include "wentzell/space.hpp"

namespace wentzell {

/// Uniform grid on [0,1] with N nodes; nodes 0 and N-1 are the boundary.
/// Grid functions are flattened node-major: entry(i, comp) = i*n + comp.
struct Grid {
  std::size_t nodes = 0;       // N >= 5
  std::size_t components = 1;  // n

  double spacing() const { return 1.0 / static_cast<double>(nodes - 1); }
  double node(std::size_t i) const { return static_cast<double>(i) * spacing(); }

  std::size_t full_dim() const { return nodes * components; }
  std::size_t interior_dim() const { return (nodes - 2) * components; }
  std::size_t boundary_dim() const { return 2 * components; }

  Space full_space() const { return {SpaceKind::FullGrid, full_dim()}; }
  Space interior_space() const { return {SpaceKind::InteriorGrid, interior_dim()}; }
  Space boundary_space() const { return {SpaceKind::Boundary, boundary_dim()}; }
  Space product_space() const { return {SpaceKind::Product, interior_dim() + boundary_dim()}; }

  bool operator==(const Grid&) const = default;
};

/// Boundary data: 2n complex values ordered (components at s=0, then s=1).
/// Lengths are enforced wherever boundary vectors meet tagged operators.
using BoundaryVector = Vector;

/// Values of a C^n-valued function sampled on a grid.
struct GridFunction {
  Grid grid;
  Vector values;  // length grid.full_dim()

  GridFunction() = default;
  GridFunction(Grid g, Vector v);

  Complex at(std::size_t node, std::size_t comp = 0) const {
    return values[node * grid.components + comp];
  }
};

/// Grid plus the assembled operator matrices of the interval model.
///
/// A_m: full second-order stencil matrix (central differences at interior
///      nodes, one-sided 3-point stencils at the boundary rows);
/// L:   trace, extracts the boundary node values;
/// B:   feedback rows (one-sided first-derivative stencils with M0, M1,
///      node extraction with N0, N1);
/// A0:  Dirichlet realization, the interior-to-interior block of A_m;
/// P:   perturbation p1 f' + p0 f on the full grid.
struct DiscreteModel {
  Grid grid;
  WentzellProblem problem;
  LinOp A_m;  // FullGrid -> FullGrid
  LinOp L;    // FullGrid -> Boundary
  LinOp B;    // FullGrid -> Boundary
  LinOp A0;   // InteriorGrid -> InteriorGrid
  LinOp P;    // FullGrid -> FullGrid (zero when the problem has none)
};

/// Assembles the finite-difference model. Throws PositivityViolation when
/// some a_i drops below problem.a_min at a grid node, BadDimensions on
/// shape errors or N < 5.
DiscreteModel build_model(const WentzellProblem& problem, std::size_t N);

/// Full-grid generator with dynamic boundary rows: interior rows of
/// A_m + P, boundary rows of B.
LinOp wentzell_generator(const DiscreteModel& model);

struct DomainBasis {
  std::vector<GridFunction> basis;  // N*n - (2n - defect) vectors
  std::size_t constraint_rank;      // rank of the 2n constraint rows
  bool degenerate;                  // constraint rank deficient
};

/// Basis of the discrete Wentzell domain { f : ((A_m + P) f)|boundary = B f }.
/// A rank-deficient constraint is reported through the degenerate flag and
/// rank field; the (then larger) null-space basis is still returned.
DomainBasis wentzell_domain_basis(const DiscreteModel& model);

/// Selection of the interior nodes: (N-2)n x Nn.
Matrix interior_restriction(const Grid& grid);
/// Zero-extension of interior data to the full grid: Nn x (N-2)n.
Matrix zero_extension(const Grid& grid);
/// One-sided 3-point first-derivative rows at s=0 and s=1: 2n x Nn,
/// ordered (components at 0, components at 1).
Matrix boundary_derivative(const Grid& grid);
/// Extraction of one node's components: n x Nn.
Matrix node_extraction(const Grid& grid, std::size_t node);
/// Constant-1 grid function.
GridFunction ones(const Grid& grid);

}  // namespace wentzell

#endif
