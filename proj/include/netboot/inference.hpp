#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "netboot/smooth.hpp"

namespace netboot {

enum class Scheme { block, dwb };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

struct BootstrapOptions {
  std::size_t replicates = 999;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::optional<SmoothFunction> phi;
};

/// Monte Carlo approximation of the bootstrap law of T1 (and T2).
struct BootstrapRun {
  Scheme scheme = Scheme::dwb;
  std::size_t n = 0;
  std::size_t v = 0;
  double radius = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;

  /// sqrt(n) |Ybar* - center|, one per replicate.
  std::vector<double> t1;
  /// sqrt(n) (phi(Ybar*) - phi(center)), present when phi was supplied.
  std::optional<std::vector<double>> t2;
  std::optional<std::string> phi_name;

  Eigen::MatrixXd sigma_star;
  /// Bootstrap centring: mu* for the block scheme, Ybar for the DWB.
  Eigen::VectorXd center;
  Eigen::VectorXd sample_mean;

  /// phi(Ybar) and grad(phi)(Ybar)^T Sigma* grad(phi)(Ybar).
  std::optional<double> phi_sample_mean;
  std::optional<double> delta_method_variance;

  // Block scheme only.
  std::optional<std::size_t> block_count;
  std::optional<double> mean_block_size;
  std::optional<double> mean_pseudo_sample_ratio;  // average of L_n / n
  std::optional<double> variance_factor;           // K_n delta / n
};

struct TestStatistics {
  double t1 = 0.0;
  std::optional<double> t2;
};

/// T1 = sqrt(n)|mean - mu|, T2 = sqrt(n)(phi(mean) - phi(mu)).
TestStatistics test_statistics(const Eigen::VectorXd& mean, const Eigen::VectorXd& mu,
                               std::size_t n, const SmoothFunction* phi = nullptr);

/// Generalised inverse inf{x : F_B(x) >= alpha}: the ceil(alpha B)-th order
/// statistic. Works on a private copy.
double empirical_quantile(std::span<const double> values, double alpha);

struct ConfidenceBall {
  Eigen::VectorXd center;
  double radius = 0.0;

  bool contains(const Eigen::VectorXd& mu) const;
};

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// {mu : sqrt(n)|Ybar - mu| <= c*(1 - alpha)}.
ConfidenceBall confidence_ball(const BootstrapRun& run, double alpha);

/// Equal-tailed interval for phi(mu) from the signed T2 replicates.
ConfidenceInterval confidence_interval(const BootstrapRun& run, double alpha);

/// sup_x |F_a(x) - F_b(x)| for the two empirical cdfs.
double kolmogorov_distance(std::span<const double> a, std::span<const double> b);

/// Exponent r of the transformed weak dependence coefficients gamma^r for
/// locally Lipschitz maps of order tau with p finite moments.
double dependence_transform_rate(double p, double tau, bool c4_zero);

}  // namespace netboot
