#include "wentzell/dense.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wentzell {

namespace {

using EMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

Eigen::Map<const EMat> emap(const Matrix& m) {
  return Eigen::Map<const EMat>(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                                static_cast<Eigen::Index>(m.cols()));
}

Matrix from_eigen(const EMat& e) {
  Matrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  Eigen::Map<EMat>(m.data().data(), e.rows(), e.cols()) = e;
  return m;
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(const std::vector<Complex>& values, const char* what) {
  for (const Complex& z : values) {
    if (!finite(z)) {
      throw NonFiniteEntry(std::string(what) + ": non-finite entry rejected");
    }
  }
}

}  // namespace

Vector::Vector(std::initializer_list<Complex> init) : data_(init) {
  require_finite(data_, "Vector");
}

Vector Vector::from(std::vector<Complex> values) {
  require_finite(values, "Vector");
  Vector v;
  v.data_ = std::move(values);
  return v;
}

double Vector::sup_norm() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double Vector::two_norm() const {
  double s = 0.0;
  for (const Complex& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

Vector& Vector::operator+=(const Vector& rhs) {
  if (size() != rhs.size()) throw DimensionMismatch("Vector +: size mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& rhs) {
  if (size() != rhs.size()) throw DimensionMismatch("Vector -: size mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Vector& Vector::operator*=(Complex s) {
  for (Complex& z : data_) z *= s;
  return *this;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1.0, 0.0);
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionMismatch("Matrix::from_rows: ragged rows");
    std::size_t j = 0;
    for (Complex z : row) m(i, j++) = z;
    ++i;
  }
  require_finite(m.data_, "Matrix");
  return m;
}

Matrix Matrix::from_data(std::size_t rows, std::size_t cols, std::vector<Complex> data) {
  if (data.size() != rows * cols) {
    throw DimensionMismatch("Matrix::from_data: rows*cols != data size");
  }
  require_finite(data, "Matrix");
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(data);
  return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("Matrix::block out of range");
  Matrix m(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
  if (r0 + m.rows() > rows_ || c0 + m.cols() > cols_) {
    throw DimensionMismatch("Matrix::set_block out of range");
  }
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) (*this)(r0 + i, c0 + j) = m(i, j);
}

Vector Matrix::row(std::size_t i) const {
  Vector v(cols_);
  for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
  return v;
}

Vector Matrix::col(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

double Matrix::sup_norm() const {
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
    m = std::max(m, s);
  }
  return m;
}

double Matrix::one_norm() const {
  double m = 0.0;
  for (std::size_t j = 0; j < cols_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
    m = std::max(m, s);
  }
  return m;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("Matrix +: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("Matrix -: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(Complex s) {
  for (Complex& z : data_) z *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("Matrix *: inner dimensions differ");
  EMat r = emap(a) * emap(b);
  return from_eigen(r);
}

Vector operator*(const Matrix& a, const Vector& v) {
  if (a.cols() != v.size()) throw DimensionMismatch("Matrix * Vector: dimensions differ");
  EVec x = Eigen::Map<const EVec>(v.data().data(), static_cast<Eigen::Index>(v.size()));
  EVec y = emap(a) * x;
  Vector out(a.rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = y(static_cast<Eigen::Index>(i));
  return out;
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hstack: row counts differ");
  Matrix m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("vstack: column counts differ");
  Matrix m(a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

namespace {

// Pivot-health check shared by the solve paths.  The LU diagonal carries the
// pivots of the factorization; a pivot below 1e-14 * sup_norm(A) is treated
// as a singular system.
void check_pivots(const Eigen::PartialPivLU<EMat>& lu, double scale) {
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (std::abs(diag(i)) < 1e-14 * scale) {
      std::ostringstream os;
      os << "solve_linear: pivot " << std::abs(diag(i)) << " below 1e-14 * " << scale;
      throw SingularMatrix(os.str());
    }
  }
}

}  // namespace

Matrix solve_linear(const Matrix& A, const Matrix& rhs) {
  if (!A.is_square()) throw DimensionMismatch("solve_linear: A must be square");
  if (rhs.rows() != A.rows()) throw DimensionMismatch("solve_linear: rhs row count != order of A");
  if (A.rows() == 0) return rhs;

  const double scale = std::max(A.sup_norm(), std::numeric_limits<double>::min());
  Eigen::Map<const EMat> a = emap(A);
  Eigen::PartialPivLU<EMat> lu(a);
  check_pivots(lu, scale);

  EMat b = emap(rhs);
  EMat x = lu.solve(b);
  // One step of fixed-precision refinement; cheap at these sizes and buys
  // an order of magnitude on mildly ill-conditioned systems.
  EMat r = b - a * x;
  x += lu.solve(r);

  Matrix out = from_eigen(x);
  require_finite(out.data(), "solve_linear result");
  return out;
}

Vector solve_linear(const Matrix& A, const Vector& rhs) {
  Matrix b(rhs.size(), 1);
  for (std::size_t i = 0; i < rhs.size(); ++i) b(i, 0) = rhs[i];
  Matrix x = solve_linear(A, b);
  return x.col(0);
}

Matrix inverse(const Matrix& A) { return solve_linear(A, Matrix::identity(A.rows())); }

double operator_norm(const Matrix& A, Norm norm) {
  if (norm == Norm::Sup) return A.sup_norm();
  const std::vector<double> sv = singular_values(A);
  return sv.empty() ? 0.0 : sv.front();
}

namespace {

// Coefficients of the diagonal Pade approximants to exp, orders 3..13,
// and the scaling thresholds from the standard double-precision analysis.
const double kPade3[] = {120.0, 60.0, 12.0, 1.0};
const double kPade5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
const double kPade7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
const double kPade9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                         2162160.0,     110880.0,     3960.0,       90.0,        1.0};
const double kPade13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                          1187353796428800.0,  129060195264000.0,   10559470521600.0,
                          670442572800.0,      33522128640.0,       1323241920.0,
                          40840800.0,          960960.0,            16380.0,
                          182.0,               1.0};

const double kTheta3 = 1.495585217958292e-2;
const double kTheta5 = 2.539398330063230e-1;
const double kTheta7 = 9.504178996162932e-1;
const double kTheta9 = 2.097847961257068e0;
const double kTheta13 = 5.371920351148152e0;

EMat pade_uv_low(const EMat& A, const double* b, int degree, EMat& U, EMat& V) {
  const Eigen::Index n = A.rows();
  const EMat I = EMat::Identity(n, n);
  const EMat A2 = A * A;
  EMat even = b[0] * I;
  EMat odd = b[1] * I;
  EMat P = I;
  for (int k = 2; k <= degree; k += 2) {
    P = P * A2;  // A^k for even k
    even += b[k] * P;
    if (k + 1 <= degree) odd += b[k + 1] * P;
  }
  U = A * odd;
  V = even;
  return V;
}

}  // namespace

Matrix matrix_exponential(const Matrix& A, double t) {
  if (!A.is_square()) throw DimensionMismatch("matrix_exponential: A must be square");
  if (t < 0.0) throw BadParameters("matrix_exponential: t must be >= 0");
  const Eigen::Index n = static_cast<Eigen::Index>(A.rows());
  if (n == 0) return A;

  EMat B = t * emap(A);
  const double norm1 = B.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm1)) throw Overflow("matrix_exponential: non-finite scaled norm");

  EMat U(n, n), V(n, n);
  int squarings = 0;
  if (norm1 <= kTheta3) {
    pade_uv_low(B, kPade3, 3, U, V);
  } else if (norm1 <= kTheta5) {
    pade_uv_low(B, kPade5, 5, U, V);
  } else if (norm1 <= kTheta7) {
    pade_uv_low(B, kPade7, 7, U, V);
  } else if (norm1 <= kTheta9) {
    pade_uv_low(B, kPade9, 9, U, V);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / kTheta13))));
    if (squarings > 1020) throw Overflow("matrix_exponential: scaling exceeds representable range");
    B *= std::pow(2.0, -squarings);
    // Degree-13 Pade with the usual splitting into low and high parts.
    const double* b = kPade13;
    const EMat I = EMat::Identity(n, n);
    const EMat B2 = B * B;
    const EMat B4 = B2 * B2;
    const EMat B6 = B4 * B2;
    EMat u_high = B6 * (b[13] * B6 + b[11] * B4 + b[9] * B2);
    EMat u_low = b[7] * B6 + b[5] * B4 + b[3] * B2 + b[1] * I;
    U = B * (u_high + u_low);
    EMat v_high = B6 * (b[12] * B6 + b[10] * B4 + b[8] * B2);
    V = v_high + b[6] * B6 + b[4] * B4 + b[2] * B2 + b[0] * I;
  }

  EMat num = V + U;
  EMat den = V - U;
  Eigen::PartialPivLU<EMat> lu(den);
  EMat X = lu.solve(num);
  for (int k = 0; k < squarings; ++k) X = X * X;
  if (!X.allFinite()) throw Overflow("matrix_exponential: result overflowed");
  return from_eigen(X);
}

SpectralQuantities spectral_quantities(const Matrix& A) {
  SpectralQuantities out;
  out.singular_values = singular_values(A);
  if (A.is_square() && A.rows() > 0) {
    Eigen::ComplexEigenSolver<EMat> eig(emap(A), /*computeEigenvectors=*/false);
    out.converged = (eig.info() == Eigen::Success);
    const auto& ev = eig.eigenvalues();
    out.eigenvalues.reserve(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) out.eigenvalues.push_back(ev(i));
  }
  return out;
}

std::vector<double> singular_values(const Matrix& A) {
  if (A.rows() == 0 || A.cols() == 0) return {};
  Eigen::Map<const EMat> a = emap(A);
  Eigen::VectorXd sv;
  if (std::min(A.rows(), A.cols()) > 32) {
    Eigen::BDCSVD<EMat> svd(a);
    sv = svd.singularValues();
  } else {
    Eigen::JacobiSVD<EMat> svd(a);
    sv = svd.singularValues();
  }
  std::vector<double> out(sv.data(), sv.data() + sv.size());
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

NullSpace kernel_basis(const Matrix& A, double rel_tol) {
  if (A.rows() == 0 || A.cols() == 0) throw DimensionMismatch("kernel_basis: empty matrix");
  Eigen::JacobiSVD<EMat> svd(emap(A), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = rel_tol * (sv.size() > 0 ? sv(0) : 0.0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  const std::size_t dim = A.cols() - rank;
  Matrix basis(A.cols(), dim);
  const auto& V = svd.matrixV();
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < A.cols(); ++i) {
      basis(i, j) = V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(rank + j));
    }
  }
  return NullSpace{std::move(basis), rank};
}

std::size_t numerical_rank(const Matrix& A, double rel_tol) {
  const std::vector<double> sv = singular_values(A);
  if (sv.empty()) return 0;
  const double cutoff = rel_tol * sv.front();
  std::size_t rank = 0;
  for (double s : sv) {
    if (s > cutoff) ++rank;
  }
  return rank;
}

}  // namespace wentzell
