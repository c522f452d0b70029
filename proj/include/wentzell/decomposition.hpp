#ifndef WENTZELL_DECOMPOSITION_HPP
#define WENTZELL_DECOMPOSITION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "wentzell/interval.hpp"

namespace wentzell {

/// Which maximal operator a Dirichlet map or operator matrix refers to.
enum class OperatorTag { AM, AMP, GM };

std::string to_string(OperatorTag tag);

/// The discrete Dirichlet operator L_lambda: boundary data to the unique
/// grid function solving (lambda - op) f = 0 at the interior nodes with
/// prescribed trace. Columns are the liftings of the boundary unit vectors.
struct DirichletMap {
  Complex lambda;
  OperatorTag op;
  LinOp map;  // Boundary -> FullGrid
};

/// Throws ResolventPole when lambda hits the spectrum of the corresponding
/// discrete Dirichlet realization.
DirichletMap dirichlet_map(const DiscreteModel& model, Complex lambda,
                           OperatorTag op = OperatorTag::AM);

/// Dirichlet-to-Neumann matrix: feedback applied to each lifting column.
struct DtnMatrix {
  Complex lambda;
  OperatorTag op;
  std::string feedback;  // "B", "B0", "custom"
  Matrix mat;            // 2n x 2n
};

DtnMatrix dtn_operator(const DiscreteModel& model, Complex lambda, OperatorTag op,
                       const LinOp& feedback, std::string feedback_name = "custom");
/// Feedback defaults to the model's B.
DtnMatrix dtn_operator(const DiscreteModel& model, Complex lambda = Complex(0.0, 0.0),
                       OperatorTag op = OperatorTag::AM);

/// The similarity transform of the main decomposition:
///   T f = (f - L0 L f restricted to the interior, L f),
///   T_inv (f, x) = zero-extension of f + L0 x.
struct SimilarityPair {
  LinOp T;      // FullGrid -> Product
  LinOp T_inv;  // Product -> FullGrid
};

SimilarityPair similarity_pair(const DiscreteModel& model, OperatorTag op = OperatorTag::AM);

/// G_m = A_m - L0 B (Id - L0 L) and the resolvent procedures of its
/// Dirichlet-type restrictions. R(lambda, G0) solves the interior system
/// with zero trace; R(lambda, G00) is its restriction to interior data.
struct GOperators {
  Grid grid;
  OperatorTag op;
  LinOp G_m;    // FullGrid -> FullGrid
  Matrix g00;   // interior matrix of the G00 surrogate
  Matrix lifting;  // L0 at lambda = 0 for the tagged operator, Nn x 2n
  Matrix feedback; // B rows, 2n x Nn

  /// (lambda - G00)^{-1} on the interior grid; throws ResolventPole.
  Matrix resolvent_interior(Complex lambda) const;
  /// R(lambda, G0) as FullGrid -> FullGrid with zero-trace output; reads
  /// only the interior part of the input.
  Matrix resolvent_full(Complex lambda) const;
};

GOperators build_G(const DiscreteModel& model, OperatorTag op = OperatorTag::AM);

/// Operator matrices on the product space X0 x dX:
///   A  = (G0, -L0 N; B, N),   A0 = (G0, -L0 N; 0, N).
struct OperatorMatrix {
  Grid grid;
  OperatorTag op;
  Matrix dtn;  // N = B L0
  LinOp A;     // Product -> Product
  LinOp A0;    // Product -> Product

  /// Trace residual of G0 f - L0 N x; the discrete surrogate of the
  /// membership condition "G0 f - L0 N x has zero trace".
  double domain_membership_residual(const Vector& f_interior, const Vector& x) const;

 private:
  friend OperatorMatrix operator_matrix(const DiscreteModel&, OperatorTag);
  Matrix op_full_;   // tagged maximal operator
  Matrix lifting_;   // L0
  Matrix feedback_;  // B
};

OperatorMatrix operator_matrix(const DiscreteModel& model, OperatorTag op = OperatorTag::AM);

/// Residual report for the similarity identity  A = T A T^{-1}  sampled on
/// the discrete Wentzell domain. Residuals are normalized by
/// ||f|| * ||A_m||.
struct SimilarityReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  OperatorTag op = OperatorTag::AM;
  bool exact_tier = false;
  std::vector<double> residuals;
  double max_residual = 0.0;
};

SimilarityReport similarity_check(const DiscreteModel& model, std::size_t samples = 20,
                                  std::uint64_t seed = 0);

/// True when every identity of the model is exact in discrete arithmetic:
/// constant a, b = c = 0, no perturbation.
bool exact_tier(const WentzellProblem& problem);

/// Verification of the block resolvent formula
///   R(lambda, A0) = (R(lambda,G00), -R(lambda,G0) L0 N R(lambda,N); 0, R(lambda,N)).
struct ResolventBlockReport {
  struct Entry {
    double lambda;
    double res_interior;    // defining system, interior rows
    double res_boundary;    // (lambda - N) x = y
    double lower_left;      // lower-left block of the directly inverted resolvent
    double block_vs_direct; // block formula against brute-force inverse of (lambda - A0)
  };
  std::vector<Entry> entries;
  double max_res_interior = 0.0;
  double max_res_boundary = 0.0;
  double max_lower_left = 0.0;
  double max_block_vs_direct = 0.0;
};

/// Throws SpectrumHit when some lambda - N is singular (the offending
/// lambda is named in the message), ResolventPole for interior poles.
ResolventBlockReport resolvent_block_check(const DiscreteModel& model,
                                           const std::vector<double>& lambdas);

}  // namespace wentzell

#endif
