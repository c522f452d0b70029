#include "wentzell/disk.hpp"

#include <cmath>
#include <sstream>

namespace wentzell {

DiskModel build_disk_model(int K, double beta, double gamma, double q) {
  if (K < 1) throw BadParameters("build_disk_model: K must be >= 1");
  if (!(beta < 0.0)) throw BadParameters("build_disk_model: beta must be negative");
  if (q < 0.0) throw BadParameters("build_disk_model: q must be >= 0");
  if (!std::isfinite(beta) || !std::isfinite(gamma) || !std::isfinite(q)) {
    throw BadParameters("build_disk_model: parameters must be finite");
  }

  DiskModel m;
  m.max_mode = K;
  m.beta = beta;
  m.gamma = gamma;
  m.q = q;
  const std::size_t count = m.mode_count();
  m.dtn_B0.resize(count);
  m.beltrami.resize(count);
  m.C.resize(count);
  m.N_B.resize(count);
  m.W.resize(count);
  for (int k = -K; k <= K; ++k) {
    const std::size_t i = m.index(k);
    const double ak = std::abs(static_cast<double>(k));
    m.W[i] = ak;
    m.dtn_B0[i] = beta * ak;            // outer normal derivative of r^{|k|} at r = 1
    m.beltrami[i] = -ak * ak;           // second angular derivative on mode k
    m.C[i] = -q * ak * ak + gamma;
    m.N_B[i] = m.dtn_B0[i] + m.C[i];
  }
  return m;
}

double disk_wq_identity_check(const DiskModel& model) {
  double worst = 0.0;
  for (int k = -model.max_mode; k <= model.max_mode; ++k) {
    const std::size_t i = model.index(k);
    worst = std::max(worst, std::abs(model.dtn_B0[i] - model.beta * model.W[i]));
  }
  return worst;
}

DiskRelativeBoundReport disk_relative_bound(const DiskModel& model,
                                            const std::vector<double>& eps_list) {
  if (model.q == 0.0) {
    std::ostringstream os;
    os << "disk_relative_bound: q = 0, so |beta| |k| grows linearly while C = " << model.gamma
       << " stays bounded; the relative bound |beta| sup|k| / |gamma| diverges";
    throw BoundFails(os.str());
  }
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw BadParameters("disk_relative_bound: eps must be positive");
  }

  DiskRelativeBoundReport report;
  report.bound_zero = true;
  const double ab = std::abs(model.beta);
  for (double eps : eps_list) {
    DiskRelativeBoundRow row{eps, 0.0, 0, false};
    for (int k = 0; k <= model.max_mode; ++k) {
      const double value = std::max(0.0, ab * k - eps * std::abs(model.C[model.index(k)]));
      if (value > row.M) {
        row.M = value;
        row.k_star = k;
      }
    }
    row.at_truncation = (row.k_star == model.max_mode);
    if (row.at_truncation) report.bound_zero = false;  // inconclusive at the truncation
    report.rows.push_back(row);
  }
  return report;
}

DiskGenerationReport disk_generation_report(const DiskModel& model,
                                            const std::vector<double>& ts) {
  DiskGenerationReport report;
  report.ts = ts;
  report.spectral_abscissa = model.N_B[model.index(0)];
  report.abscissa_mode = 0;
  for (int k = 0; k <= model.max_mode; ++k) {
    if (model.N_B[model.index(k)] > report.spectral_abscissa) {
      report.spectral_abscissa = model.N_B[model.index(k)];
      report.abscissa_mode = k;
    }
  }
  // Diagonal over modes with real spectrum bounded above: the semigroup
  // extends analytically to the full right half-plane.
  report.angle = 3.14159265358979323846 / 2.0;

  for (int k = 0; k <= model.max_mode; ++k) {
    report.ks.push_back(k);
    report.n_b.push_back(model.N_B[model.index(k)]);
  }
  for (double t : ts) {
    if (t < 0.0) throw BadParameters("disk_generation_report: t must be >= 0");
    std::vector<double> row;
    row.reserve(report.ks.size());
    for (int k : report.ks) row.push_back(std::exp(t * model.N_B[model.index(k)]));
    report.tail_factor.push_back(row.back());
    report.factors.push_back(std::move(row));
  }
  return report;
}

DiskSplitReport disk_split_experiment(const DiskModel& model) {
  DiskSplitReport report;
  for (int k = -model.max_mode; k <= model.max_mode; ++k) {
    const std::size_t i = model.index(k);
    report.additivity_residual =
        std::max(report.additivity_residual,
                 std::abs(model.N_B[i] - (model.dtn_B0[i] + model.C[i])));
  }
  report.angle_full = 3.14159265358979323846 / 2.0;
  report.angle_comparator = 3.14159265358979323846 / 2.0;
  report.pass = report.additivity_residual <= 1e-10 &&
                std::abs(report.angle_full - report.angle_comparator) <= 0.1;
  return report;
}

}  // namespace wentzell
