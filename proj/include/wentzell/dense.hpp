#ifndef WENTZELL_DENSE_HPP
#define WENTZELL_DENSE_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "wentzell/errors.hpp"

namespace wentzell {

using Complex = std::complex<double>;

/// Dense complex vector. Entries are kept finite; factories reject NaN/Inf.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n) : data_(n, Complex(0.0, 0.0)) {}
  Vector(std::initializer_list<Complex> init);

  static Vector from(std::vector<Complex> values);

  std::size_t size() const { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

  double sup_norm() const;  // max_i |v_i|
  double two_norm() const;

  Vector& operator+=(const Vector& rhs);
  Vector& operator-=(const Vector& rhs);
  Vector& operator*=(Complex s);

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(Complex s, Vector v) { return v *= s; }

 private:
  std::vector<Complex> data_;
};

/// Dense complex matrix, row-major storage.
///
/// All operator representations in the library live in this type; space
/// bookkeeping is layered on top by LinOp. Factories taking entry data
/// reject non-finite values.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vector& d);
  static Matrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static Matrix from_data(std::size_t rows, std::size_t cols, std::vector<Complex> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& m);
  Vector row(std::size_t i) const;
  Vector col(std::size_t j) const;

  Matrix transpose() const;
  Matrix adjoint() const;

  /// Induced sup norm: max row absolute sum (discrete analogue of the
  /// operator norm on a space of continuous functions).
  double sup_norm() const;
  double one_norm() const;  // max column absolute sum
  double max_abs() const;
  double frobenius_norm() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(Complex s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Complex s, Matrix m) { return m *= s; }
  friend Matrix operator*(Matrix m, Complex s) { return m *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, const Vector& v);

  static Matrix hstack(const Matrix& a, const Matrix& b);
  static Matrix vstack(const Matrix& a, const Matrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

enum class Norm { Sup, Spectral };

/// Solves A X = rhs by LU factorization with partial pivoting and one step
/// of iterative refinement. Throws SingularMatrix when a pivot falls below
/// 1e-14 * sup_norm(A), DimensionMismatch on shape errors.
Matrix solve_linear(const Matrix& A, const Matrix& rhs);
Vector solve_linear(const Matrix& A, const Vector& rhs);

/// Dense inverse via solve_linear against the identity.
Matrix inverse(const Matrix& A);

double operator_norm(const Matrix& A, Norm norm);

/// exp(t*A) by Pade approximation with scaling and squaring.
/// Requires t >= 0; throws Overflow when the result leaves the
/// representable range.
Matrix matrix_exponential(const Matrix& A, double t = 1.0);

struct SpectralQuantities {
  std::vector<Complex> eigenvalues;     // square input only, unordered with multiplicity
  std::vector<double> singular_values;  // sorted descending, nonnegative
  bool converged = true;                // false: eigen iteration cap hit, partial results kept
};

SpectralQuantities spectral_quantities(const Matrix& A);

/// Singular values only (sorted descending).
std::vector<double> singular_values(const Matrix& A);

struct NullSpace {
  Matrix basis;      // columns form an orthonormal basis of ker(A)
  std::size_t rank;  // numerical rank of A
};

/// Null space via SVD. Columns of `basis` are the right singular vectors
/// whose singular values fall below rel_tol * sigma_max.
NullSpace kernel_basis(const Matrix& A, double rel_tol = 1e-11);

/// Numerical rank via SVD with the same tolerance convention.
std::size_t numerical_rank(const Matrix& A, double rel_tol = 1e-11);

}  // namespace wentzell

#endif
