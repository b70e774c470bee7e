#pragma once

// Dependent wild bootstrap with network-topology weights: the pseudo-sample
// is Ybar + (Y_i - Ybar) W_i where W has covariance Omega (overlap weights).

#include <optional>

#include <Eigen/Dense>

#include "netboot/graph.hpp"
#include "netboot/inference.hpp"
#include "netboot/rng.hpp"

namespace netboot {

enum class WeightLaw { gaussian };

struct DwbWeights {
  double radius = 0.0;
  Eigen::MatrixXd omega;
  Eigen::MatrixXd omega_sqrt;  // symmetric square root of omega
  WeightLaw law = WeightLaw::gaussian;

  /// Negative eigenvalues of Omega down to -clip_tol are clipped to zero;
  /// the default tolerance is 1e-10 n.
  static DwbWeights build(const DistanceMatrix& d, double radius,
                          std::optional<double> clip_tol = std::nullopt);
};

/// W = Omega^{1/2} zeta with zeta iid standard normal.
Eigen::VectorXd dwb_draw_weights(const DwbWeights& weights, Rng& rng);

/// Row i of the result is Ybar + (Y_i - Ybar) W_i.
Eigen::MatrixXd dwb_pseudo_sample(const Eigen::MatrixXd& y, const Eigen::VectorXd& w);

/// n^-1 (Y - Ybar)^T Omega (Y - Ybar).
Eigen::MatrixXd dwb_variance(const Eigen::MatrixXd& y, const Eigen::MatrixXd& omega);

BootstrapRun dwb_run(const Eigen::MatrixXd& y, const DistanceMatrix& d, double radius,
                     const BootstrapOptions& options);

/// Same as above with precomputed weights (reused across Monte Carlo draws).
BootstrapRun dwb_run(const Eigen::MatrixXd& y, const DwbWeights& weights,
                     const BootstrapOptions& options);

}  // namespace netboot
