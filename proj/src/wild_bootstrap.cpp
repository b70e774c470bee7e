#include "netboot/wild_bootstrap.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "netboot/covariance.hpp"
#include "netboot/error.hpp"
#include "netboot/parallel.hpp"

namespace netboot {

namespace {

void check_rows(const Eigen::MatrixXd& y, Eigen::Index n, const char* what) {
  if (y.rows() != n) {
    std::ostringstream msg;
    msg << "data has " << y.rows() << " rows but " << what << " has " << n << " entries";
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
}

Eigen::VectorXd standard_normal(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
  return z;
}

}  // namespace

DwbWeights DwbWeights::build(const DistanceMatrix& d, double radius,
                             std::optional<double> clip_tol) {
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "DWB radius must be > 0");
  DwbWeights w;
  w.radius = radius;
  w.omega = overlap_weights(d, radius);
  const double tol = clip_tol.value_or(1e-10 * static_cast<double>(d.size()));
  w.omega_sqrt = sym_psd_sqrt(w.omega, tol);
  return w;
}

Eigen::VectorXd dwb_draw_weights(const DwbWeights& weights, Rng& rng) {
  return weights.omega_sqrt * standard_normal(weights.omega_sqrt.cols(), rng);
}

Eigen::MatrixXd dwb_pseudo_sample(const Eigen::MatrixXd& y, const Eigen::VectorXd& w) {
  check_rows(y, w.size(), "the weight vector");
  const Eigen::RowVectorXd mean = y.colwise().mean();
  Eigen::MatrixXd out = (y.rowwise() - mean).array().colwise() * w.array();
  out.rowwise() += mean;
  return out;
}

Eigen::MatrixXd dwb_variance(const Eigen::MatrixXd& y, const Eigen::MatrixXd& omega) {
  if (omega.rows() != omega.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "omega must be square");
  }
  check_rows(y, omega.rows(), "omega");
  const Eigen::MatrixXd e = demean(y);
  Eigen::MatrixXd out = e.transpose() * omega * e / static_cast<double>(y.rows());
  return 0.5 * (out + out.transpose());
}

BootstrapRun dwb_run(const Eigen::MatrixXd& y, const DistanceMatrix& d, double radius,
                     const BootstrapOptions& options) {
  if (options.replicates == 0) throw Error(ErrorCode::invalid_argument, "reps must be ≥ 1");
  check_rows(y, static_cast<Eigen::Index>(d.size()), "the network");
  return dwb_run(y, DwbWeights::build(d, radius), options);
}

BootstrapRun dwb_run(const Eigen::MatrixXd& y, const DwbWeights& weights,
                     const BootstrapOptions& options) {
  if (options.replicates == 0) throw Error(ErrorCode::invalid_argument, "reps must be ≥ 1");
  check_rows(y, weights.omega.rows(), "omega");
  const auto n = static_cast<std::size_t>(y.rows());
  const double inv_root_n = 1.0 / std::sqrt(static_cast<double>(n));

  BootstrapRun run;
  run.scheme = Scheme::dwb;
  run.n = n;
  run.v = static_cast<std::size_t>(y.cols());
  run.radius = weights.radius;
  run.replicates = options.replicates;
  run.seed = options.seed;
  run.sample_mean = y.colwise().mean().transpose();
  run.center = run.sample_mean;
  run.sigma_star = dwb_variance(y, weights.omega);

  const SmoothFunction* phi = options.phi ? &*options.phi : nullptr;
  double phi_center = 0.0;
  if (phi) {
    phi_center = phi->value(run.center);
    run.phi_name = phi->name;
    run.phi_sample_mean = phi_center;
    const Eigen::VectorXd g = phi->gradient(run.sample_mean);
    run.delta_method_variance = g.dot(run.sigma_star * g);
  }

  // sqrt(n)(Ybar* - Ybar) = n^-1/2 W^T E = n^-1/2 zeta^T (Omega^1/2 E), so the
  // n x n product is formed once instead of once per replicate.
  const Eigen::MatrixXd loadings = weights.omega_sqrt * demean(y);

  const std::size_t reps = options.replicates;
  run.t1.assign(reps, 0.0);
  std::vector<double> t2(phi ? reps : 0, 0.0);
  parallel_for(reps, options.threads, [&](std::size_t b) {
    Rng rng = substream(options.seed, StreamTag::dwb_weights, b);
    const Eigen::VectorXd zeta = standard_normal(loadings.rows(), rng);
    const Eigen::VectorXd scaled = inv_root_n * (loadings.transpose() * zeta);
    run.t1[b] = scaled.norm();
    if (phi) {
      const Eigen::VectorXd mean_star = run.sample_mean + inv_root_n * scaled;
      t2[b] = (phi->value(mean_star) - phi_center) / inv_root_n;
    }
  });
  if (phi) run.t2 = std::move(t2);
  return run;
}

}  // namespace netboot
