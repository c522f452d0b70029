#include "wentzell/probes.hpp"

#include <Eigen/Dense>

#include "wentzell/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wentzell {

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (lo <= 0.0 || hi <= lo || count < 2) throw BadParameters("log_spaced: bad range");
  std::vector<double> out(count);
  const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::exp(std::log(lo) + step * i);
  return out;
}

namespace {

using EMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

EMat to_eigen(const Matrix& m) {
  return Eigen::Map<const EMat>(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                                static_cast<Eigen::Index>(m.cols()));
}

// Smallest singular value of (lambda I - T) for upper-triangular T, by
// inverse iteration on the normal equations. Returns 0 at (numerical) poles.
double sigma_min_shifted_triangular(const EMat& T, Complex lambda) {
  const Eigen::Index n = T.rows();
  EMat A = -T;
  A.diagonal().array() += lambda;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (A(i, i) == Complex(0.0, 0.0)) return 0.0;
  }
  const EMat Aadj = A.adjoint();

  EVec x = EVec::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) += Complex(0.0, 1e-3 * double(i % 7));
  x /= x.norm();

  double rho = 0.0, prev = -1.0;
  for (int iter = 0; iter < 40; ++iter) {
    EVec y = Aadj.template triangularView<Eigen::Lower>().solve(x);
    EVec z = A.template triangularView<Eigen::Upper>().solve(y);
    rho = z.norm();
    if (!std::isfinite(rho)) return 0.0;
    if (rho == 0.0) break;
    x = z / rho;
    if (iter >= 3 && std::abs(rho - prev) <= 1e-4 * rho) break;
    prev = rho;
  }
  if (rho <= 0.0) return 0.0;
  return 1.0 / std::sqrt(rho);
}

// || R(lambda, op) || in the requested norm; +inf at poles.
class ResolventNorm {
 public:
  ResolventNorm(const Matrix& op, Norm norm) : norm_(norm), size_(op.rows()) {
    if (norm_ == Norm::Spectral) {
      Eigen::ComplexSchur<EMat> schur(to_eigen(op), /*computeU=*/false);
      if (schur.info() != Eigen::Success) {
        throw NoConvergence("sector scan: Schur decomposition did not converge");
      }
      T_ = schur.matrixT();
    } else {
      dense_ = op;
    }
  }

  double operator()(Complex lambda) const {
    if (norm_ == Norm::Spectral) {
      const double smin = sigma_min_shifted_triangular(T_, lambda);
      return smin == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / smin;
    }
    Matrix M = Matrix::identity(size_) * lambda - dense_;
    try {
      return inverse(M).sup_norm();
    } catch (const SingularMatrix&) {
      return std::numeric_limits<double>::infinity();
    }
  }

 private:
  Norm norm_;
  std::size_t size_;
  EMat T_;
  Matrix dense_;
};

}  // namespace

HilleYosidaResult hille_yosida_probe(const std::function<Matrix(double)>& resolvent,
                                     const std::vector<double>& lambdas, Norm norm) {
  HilleYosidaResult out;
  std::vector<double> sorted = lambdas;
  std::sort(sorted.begin(), sorted.end());
  for (double lambda : sorted) {
    Matrix R;
    try {
      R = resolvent(lambda);
    } catch (const SingularMatrix&) {
      out.skipped.push_back(lambda);
      continue;
    } catch (const ResolventPole&) {
      out.skipped.push_back(lambda);
      continue;
    }
    out.lambdas.push_back(lambda);
    out.values.push_back(lambda * operator_norm(R, norm));
  }
  if (out.lambdas.empty()) {
    throw SpectrumHit("hille_yosida_probe: every sample hit the spectrum");
  }
  // Smallest sample above the last pole.
  double lambda0 = out.lambdas.front();
  if (!out.skipped.empty()) {
    const double worst = *std::max_element(out.skipped.begin(), out.skipped.end());
    for (double l : out.lambdas) {
      if (l > worst) {
        lambda0 = l;
        break;
      }
    }
  }
  out.lambda0 = lambda0;
  out.bound = *std::max_element(out.values.begin(), out.values.end());
  return out;
}

HilleYosidaResult hille_yosida_probe(const Matrix& op, const std::vector<double>& lambdas,
                                     Norm norm) {
  if (!op.is_square()) throw DimensionMismatch("hille_yosida_probe: square operator required");
  const Matrix id = Matrix::identity(op.rows());
  return hille_yosida_probe(
      [&](double lambda) { return solve_linear(id * Complex(lambda, 0.0) - op, id); }, lambdas,
      norm);
}

SectorReport sector_angle_estimate(const Matrix& op, std::optional<double> shift,
                                   const SectorScanOptions& options) {
  if (!op.is_square()) throw DimensionMismatch("sector_angle_estimate: square operator required");

  double omega;
  if (shift) {
    omega = *shift;
  } else {
    const SpectralQuantities sq = spectral_quantities(op);
    double abscissa = -std::numeric_limits<double>::infinity();
    for (Complex ev : sq.eigenvalues) abscissa = std::max(abscissa, ev.real());
    omega = abscissa + 1.0;
  }

  Matrix shifted = op;
  for (std::size_t i = 0; i < op.rows(); ++i) shifted(i, i) -= Complex(omega, 0.0);

  bool complex_entries = false;
  for (const Complex& z : shifted.data()) {
    if (z.imag() != 0.0) {
      complex_entries = true;
      break;
    }
  }

  const ResolventNorm rnorm(shifted, options.norm);
  const double scale = std::max(1.0, shifted.sup_norm());

  SectorReport report;
  report.norm = options.norm;
  report.threshold = options.threshold;
  report.shift = omega;

  // Real-ray probe. The grid extends far enough that lambda R(lambda) is
  // within 1e-8 of the identity at the top end.
  {
    const std::vector<double> rs =
        log_spaced(1e-2, 1e10 * scale, static_cast<std::size_t>(12 * options.r_per_decade));
    report.lambda0 = rs.front();
    double sup = 0.0;
    for (double r : rs) {
      const double v = r * rnorm(Complex(r, 0.0));
      if (std::isfinite(v)) sup = std::max(sup, v);
    }
    report.sup_real_ray = sup;
  }

  // Angular scan on (pi/2, pi). Each ray is swept coarsely in r and then
  // refined around its maximum, so that a pole sitting on the ray between
  // two grid points is still driven past the threshold. The table carries
  // the running sup over the sub-sector up to theta: sectoriality is a
  // uniform bound over the sector, not a per-ray statement.
  const std::vector<double> rs = log_spaced(
      1e-2, 1e4 * scale,
      static_cast<std::size_t>(std::ceil((6.0 + std::log10(scale)) * options.r_per_decade)));
  const double half_pi = 3.14159265358979323846 / 2.0;
  const double grid_factor = std::pow(10.0, 1.0 / static_cast<double>(options.r_per_decade));

  auto ray_sup = [&](double theta) {
    double sup = 0.0;
    double r_at_sup = rs.front();
    const Complex dir(std::cos(theta), std::sin(theta));
    auto eval = [&](double r) {
      double v = r * rnorm(r * dir);
      if (complex_entries) v = std::max(v, r * rnorm(r * std::conj(dir)));
      if (v > sup) {
        sup = v;
        r_at_sup = r;
      }
    };
    for (double r : rs) {
      eval(r);
      if (!std::isfinite(sup)) return sup;
    }
    double lo = r_at_sup / grid_factor, hi = r_at_sup * grid_factor;
    for (int round = 0; round < 6 && sup <= 10.0 * options.threshold; ++round) {
      const std::vector<double> fine = log_spaced(lo, hi, 9);
      for (double r : fine) {
        eval(r);
        if (!std::isfinite(sup)) return sup;
      }
      const double width = std::pow(hi / lo, 1.0 / 8.0);
      lo = r_at_sup / width;
      hi = r_at_sup * width;
    }
    return sup;
  };

  bool hit_unbounded = false;
  double angle = 0.0;
  double running = 0.0;
  for (double theta = half_pi + options.theta_step; theta < 2.0 * half_pi - 1e-12;
       theta += options.theta_step) {
    running = std::max(running, ray_sup(theta));
    const bool bounded = std::isfinite(running) && running <= options.threshold;
    report.ray_table.push_back({theta, running, bounded});
    if (!hit_unbounded && bounded) {
      angle = theta - half_pi;
    } else {
      hit_unbounded = true;
    }
  }
  report.angle_estimate = std::min(angle, half_pi);
  return report;
}

RelativeBoundReport relative_bound_probe(const DiscreteModel& model, const LinOp& feedback,
                                         const std::vector<double>& lambdas) {
  if (feedback.domain != model.grid.full_space() ||
      feedback.codomain != model.grid.boundary_space()) {
    throw TagMismatch("relative_bound_probe: feedback must map FullGrid -> Boundary");
  }
  // Full-grid Dirichlet resolvent surrogate: interior rows of the maximal
  // operator, frozen boundary rows. Its range carries the boundary data
  // scaled by 1/lambda; the interior-block resolvent has exactly zero trace
  // and would hide trace-coupled feedback from the probe.
  const std::size_t n = model.grid.components;
  Matrix D = model.A_m.mat;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t j = 0; j < model.grid.full_dim(); ++j) {
      D(c, j) = Complex(0.0, 0.0);
      D((model.grid.nodes - 1) * n + c, j) = Complex(0.0, 0.0);
    }
  }
  const Matrix id = Matrix::identity(model.grid.full_dim());

  RelativeBoundReport out;
  for (double lambda : lambdas) {
    Matrix R;
    try {
      R = solve_linear(id * Complex(lambda, 0.0) - D, id);
    } catch (const SingularMatrix&) {
      std::ostringstream os;
      os << "relative_bound_probe: lambda = " << lambda << " is a Dirichlet eigenvalue";
      throw ResolventPole(os.str());
    }
    out.lambdas.push_back(lambda);
    out.values.push_back((feedback.mat * R).sup_norm());
  }

  const double vmax = *std::max_element(out.values.begin(), out.values.end());
  if (vmax == 0.0) {
    // Zero feedback: trivially bound 0.
    out.slope = 0.0;
    out.extrapolated = 0.0;
    out.bound_zero = true;
    return out;
  }
  out.slope = fit_loglog(out.lambdas, out.values).slope;
  out.bound_zero = out.slope < -0.05 && out.values.back() < out.values.front();
  out.extrapolated = out.bound_zero ? 0.0 : out.values.back();
  return out;
}

RelativeBoundReport relative_bound_probe(const DiscreteModel& model,
                                         const std::vector<double>& lambdas) {
  return relative_bound_probe(model, model.B, lambdas);
}

EvolutionReport evolve_and_structure_check(const DiscreteModel& model,
                                           const std::vector<double>& ts) {
  const OperatorTag tag =
      model.problem.has_perturbation() ? OperatorTag::AMP : OperatorTag::AM;
  const OperatorMatrix om = operator_matrix(model, tag);
  const GOperators g = build_G(model, tag);
  const Grid& grid = model.grid;
  const std::size_t ni = grid.interior_dim();
  const std::size_t nb = grid.boundary_dim();

  EvolutionReport report;
  report.conservation_applicable = model.problem.c.is_zero() &&
                                   model.problem.N0.max_abs() == 0.0 &&
                                   model.problem.N1.max_abs() == 0.0 &&
                                   !model.problem.has_perturbation();

  LinOp generator;
  GridFunction one = ones(grid);
  if (report.conservation_applicable) generator = wentzell_generator(model);

  for (double t : ts) {
    EvolutionEntry e{};
    e.t = t;
    const Matrix Et = matrix_exponential(om.A0.mat, t);
    const double norm = std::max(Et.sup_norm(), std::numeric_limits<double>::min());
    e.exp_norm = norm;
    e.lower_left = Et.block(ni, 0, nb, ni).sup_norm() / norm;

    const Matrix ul = Et.block(0, 0, ni, ni);
    const Matrix lr = Et.block(ni, ni, nb, nb);
    e.upper_left_residual = (ul - matrix_exponential(g.g00, t)).sup_norm() / norm;
    e.lower_right_residual = (lr - matrix_exponential(om.dtn, t)).sup_norm() / norm;

    if (report.conservation_applicable) {
      const Matrix Gt = matrix_exponential(generator.mat, t);
      Vector evolved = Gt * one.values;
      e.conservation = (evolved - one.values).sup_norm();
      report.max_conservation = std::max(report.max_conservation, e.conservation);
    }

    report.max_lower_left = std::max(report.max_lower_left, e.lower_left);
    report.max_block_residual =
        std::max(report.max_block_residual, std::max(e.upper_left_residual, e.lower_right_residual));
    report.entries.push_back(e);
  }
  return report;
}

CompactnessReport compactness_proxy(const WentzellProblem& problem, double lambda,
                                    const std::vector<std::size_t>& grid_sizes,
                                    std::size_t count) {
  if (grid_sizes.size() < 2) throw BadParameters("compactness_proxy: need at least two grids");
  std::vector<std::size_t> sizes = grid_sizes;
  std::sort(sizes.begin(), sizes.end());

  CompactnessReport report;
  report.grid_sizes = sizes;
  const Complex lam(lambda, 0.0);

  auto top = [&](const Matrix& R, std::size_t k) {
    std::vector<double> sv = singular_values(R);
    if (sv.size() > k) sv.resize(k);
    return sv;
  };

  for (std::size_t N : sizes) {
    const DiscreteModel model = build_model(problem, N);
    const LinOp G = wentzell_generator(model);
    Matrix RG, RA0, RN;
    try {
      RG = inverse(Matrix::identity(G.mat.rows()) * lam - G.mat);
      RA0 = inverse(Matrix::identity(model.A0.mat.rows()) * lam - model.A0.mat);
      const Matrix dtn = dtn_operator(model, Complex(0.0, 0.0)).mat;
      RN = inverse(Matrix::identity(dtn.rows()) * lam - dtn);
    } catch (const SingularMatrix&) {
      std::ostringstream os;
      os << "compactness_proxy: lambda = " << lambda << " is a pole at N = " << N;
      throw ResolventPole(os.str());
    }
    report.sigma_wentzell.push_back(top(RG, count));
    report.sigma_dirichlet.push_back(top(RA0, count));
    report.sigma_dtn.push_back(top(RN, count));
  }

  // The leading 2n singular values of the full-grid resolvent carry the
  // boundary-coupling scaling of the unweighted grid inner product and do
  // not stabilize under refinement; the metric starts past them.
  auto stabilization = [](const std::vector<double>& a, const std::vector<double>& b,
                          std::size_t skip) {
    double worst = 0.0;
    const std::size_t k = std::min(a.size(), b.size());
    for (std::size_t i = skip; i < k; ++i) {
      if (b[i] > 0.0) worst = std::max(worst, std::abs(a[i] - b[i]) / b[i]);
    }
    return worst;
  };
  const std::size_t g = sizes.size();
  const std::size_t skip = 2 * problem.n;
  report.stabilization_wentzell =
      stabilization(report.sigma_wentzell[g - 2], report.sigma_wentzell[g - 1], skip);
  report.stabilization_dirichlet =
      stabilization(report.sigma_dirichlet[g - 2], report.sigma_dirichlet[g - 1], 0);
  report.max_dtn_change = stabilization(report.sigma_dtn[g - 2], report.sigma_dtn[g - 1], 0);
  return report;
}

Theorem31Report theorem31_experiment(const WentzellProblem& problem, std::size_t N,
                                     const SectorScanOptions& options, double angle_floor) {
  const DiscreteModel model = build_model(problem, N);

  // Assumption surrogates.
  const HilleYosidaResult hy =
      hille_yosida_probe(model.A0.mat, log_spaced(1.0, 1e6, 30), Norm::Sup);
  if (!std::isfinite(hy.bound)) {
    throw AssumptionFailed("theorem31_experiment: Hille-Yosida bound for A0 is not finite");
  }
  const RelativeBoundReport rb = relative_bound_probe(model, log_spaced(1e2, 1e6, 9));
  const bool b_zero = model.B.mat.max_abs() == 0.0;
  if (!b_zero && !rb.bound_zero) {
    throw AssumptionFailed(
        "theorem31_experiment: ||B R(lambda, A0)|| does not decay (relative bound 0 surrogate)");
  }
  try {
    dirichlet_map(model, Complex(0.0, 0.0));
  } catch (const ResolventPole&) {
    throw AssumptionFailed("theorem31_experiment: Dirichlet map at 0 does not exist");
  }

  const LinOp G = wentzell_generator(model);
  const GOperators g0 = build_G(model, OperatorTag::AM);
  const Matrix dtn = g0.feedback * g0.lifting;

  Theorem31Report out;
  out.angle_floor = angle_floor;
  out.report_wentzell = sector_angle_estimate(G.mat, {}, options);
  out.report_dirichlet = sector_angle_estimate(model.A0.mat, {}, options);
  out.report_g0 = sector_angle_estimate(g0.g00, {}, options);
  out.report_dtn = sector_angle_estimate(dtn, {}, options);
  out.angle_wentzell = out.report_wentzell.angle_estimate;
  out.angle_dirichlet = out.report_dirichlet.angle_estimate;
  out.angle_g0 = out.report_g0.angle_estimate;
  out.angle_dtn = out.report_dtn.angle_estimate;

  const double rhs = std::min({out.angle_dirichlet, out.angle_g0, out.angle_dtn});
  const bool consistent = out.angle_wentzell >= rhs - 0.1;
  const bool floored = out.angle_wentzell >= angle_floor && out.angle_dirichlet >= angle_floor &&
                       out.angle_g0 >= angle_floor && out.angle_dtn >= angle_floor;
  out.pass = consistent && floored;
  if (!out.pass) {
    // Name the first unbounded ray of the worst operator.
    const SectorReport* worst = &out.report_wentzell;
    std::string name = "A^B";
    auto consider = [&](const SectorReport& r, const char* label) {
      if (r.angle_estimate < worst->angle_estimate) {
        worst = &r;
        name = label;
      }
    };
    consider(out.report_dirichlet, "A0");
    consider(out.report_g0, "G0");
    consider(out.report_dtn, "N");
    std::ostringstream os;
    os << "minimizing operator " << name << " with angle " << worst->angle_estimate;
    for (const RayEntry& e : worst->ray_table) {
      if (!e.bounded) {
        os << "; first unbounded ray theta = " << e.theta << " with sup " << e.sup_norm;
        break;
      }
    }
    out.failure = os.str();
  }
  return out;
}

}  // namespace wentzell
