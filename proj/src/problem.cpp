#include "wentzell/problem.hpp"

namespace wentzell {

Complex Poly::eval(double s) const {
  Complex v(0.0, 0.0);
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * s + coeffs[k];
  return v;
}

bool Poly::is_zero() const {
  for (Complex c : coeffs) {
    if (c != Complex(0.0, 0.0)) return false;
  }
  return true;
}

Matrix MatrixPoly::eval(double s) const {
  Matrix v(n, n);
  for (std::size_t k = coeff.size(); k-- > 0;) {
    v *= Complex(s, 0.0);
    v += coeff[k];
  }
  return v;
}

bool MatrixPoly::is_zero() const {
  for (const Matrix& m : coeff) {
    if (m.max_abs() != 0.0) return false;
  }
  return true;
}

MatrixPoly MatrixPoly::constant(const Matrix& m) {
  if (!m.is_square()) throw BadDimensions("MatrixPoly::constant: square matrix required");
  return MatrixPoly{m.rows(), {m}};
}

void WentzellProblem::validate() const {
  if (n == 0) throw BadDimensions("WentzellProblem: n must be positive");
  if (a.size() != n) throw BadDimensions("WentzellProblem: a must have n entries");
  auto check_poly = [&](const MatrixPoly& mp, const char* name) {
    if (mp.is_zero()) return;
    if (mp.n != n) throw BadDimensions(std::string("WentzellProblem: ") + name + " has wrong order");
    for (const Matrix& m : mp.coeff) {
      if (m.rows() != n || m.cols() != n) {
        throw BadDimensions(std::string("WentzellProblem: ") + name + " coefficient shape");
      }
    }
  };
  check_poly(b, "b");
  check_poly(c, "c");
  check_poly(p1, "p1");
  check_poly(p0, "p0");
  auto check_feedback = [&](const Matrix& m, const char* name) {
    if (m.rows() != 2 * n || m.cols() != n) {
      throw BadDimensions(std::string("WentzellProblem: ") + name + " must be 2n x n");
    }
  };
  check_feedback(M0, "M0");
  check_feedback(M1, "M1");
  check_feedback(N0, "N0");
  check_feedback(N1, "N1");
}

WentzellProblem WentzellProblem::laplacian(double beta, double gamma) {
  WentzellProblem p;
  p.n = 1;
  p.a = {Poly::constant(Complex(1.0, 0.0))};
  p.b = MatrixPoly::zero(1);
  p.c = MatrixPoly::zero(1);
  p.p1 = MatrixPoly::zero(1);
  p.p0 = MatrixPoly::zero(1);
  p.M0 = Matrix(2, 1);
  p.M1 = Matrix(2, 1);
  p.N0 = Matrix(2, 1);
  p.N1 = Matrix(2, 1);
  p.set_beta_gamma(Complex(beta, 0.0), Complex(gamma, 0.0));
  return p;
}

void WentzellProblem::set_beta_gamma(Complex beta, Complex gamma) {
  if (n != 1) throw BadParameters("set_beta_gamma: shorthand is defined for n = 1 only");
  // Outer normal derivative: -f'(0) at the left endpoint, +f'(1) at the right.
  M0 = Matrix(2, 1);
  M0(0, 0) = -beta;
  M1 = Matrix(2, 1);
  M1(1, 0) = beta;
  N0 = Matrix(2, 1);
  N0(0, 0) = gamma;
  N1 = Matrix(2, 1);
  N1(1, 0) = gamma;
}

}  // namespace wentzell
