#ifndef WENTZELL_PROBLEM_HPP
#define WENTZELL_PROBLEM_HPP

#include <vector>

#include "wentzell/dense.hpp"

namespace wentzell {

/// Scalar polynomial in the space variable s, lowest degree first.
struct Poly {
  std::vector<Complex> coeffs;

  Complex eval(double s) const;
  bool is_zero() const;

  static Poly constant(Complex c) { return Poly{{c}}; }
};

/// n x n matrix-valued polynomial in s.
struct MatrixPoly {
  std::size_t n = 0;
  std::vector<Matrix> coeff;  // coeff[k] multiplies s^k

  Matrix eval(double s) const;
  bool is_zero() const;

  static MatrixPoly zero(std::size_t n) { return MatrixPoly{n, {}}; }
  static MatrixPoly constant(const Matrix& m);
};

/// Complete parameterization of the interval model
///   A_m f = a f'' + b f' + c f   on [0,1], values in C^n,
/// with feedback  B f = M0 f'(0) + M1 f'(1) + N0 f(0) + N1 f(1)
/// and optional perturbation  P f = p1 f' + p0 f.
///
/// The diffusion coefficient a is a diagonal of strictly positive scalar
/// polynomials; positivity down to a_min is enforced at every grid node
/// when a model is assembled.
struct WentzellProblem {
  std::size_t n = 1;
  std::vector<Poly> a;      // n diagonal entries
  MatrixPoly b;             // n x n, may be zero
  MatrixPoly c;             // n x n, may be zero
  Matrix M0, M1, N0, N1;    // 2n x n feedback matrices
  MatrixPoly p1;            // perturbation, first-order part
  MatrixPoly p0;            // perturbation, zeroth-order part
  double a_min = 1e-8;

  bool has_perturbation() const { return !p1.is_zero() || !p0.is_zero(); }

  /// Shape validation; throws BadDimensions.
  void validate() const;

  /// Canonical n=1 Laplacian with B f = beta * df/dn + gamma * f at both
  /// endpoints (outer normal: -f'(0) at s=0, +f'(1) at s=1).
  static WentzellProblem laplacian(double beta, double gamma);

  /// Populates M0, M1, N0, N1 from the (beta, gamma) shorthand; n must be 1.
  void set_beta_gamma(Complex beta, Complex gamma);
};

}  // namespace wentzell

#endif
