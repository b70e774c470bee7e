#include "netboot/inference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "netboot/error.hpp"

namespace netboot {

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::block ? "block" : "dwb";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "block") return Scheme::block;
  if (name == "dwb") return Scheme::dwb;
  throw Error(ErrorCode::invalid_argument, "unknown scheme '" + std::string(name) + "'");
}

TestStatistics test_statistics(const Eigen::VectorXd& mean, const Eigen::VectorXd& mu,
                               std::size_t n, const SmoothFunction* phi) {
  if (mean.size() != mu.size()) {
    throw Error(ErrorCode::dimension_mismatch, "mean and mu differ in dimension");
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  TestStatistics out;
  out.t1 = root_n * (mean - mu).norm();
  if (phi != nullptr) out.t2 = root_n * (phi->value(mean) - phi->value(mu));
  return out;
}

double empirical_quantile(std::span<const double> values, double alpha) {
  if (values.empty()) throw Error(ErrorCode::invalid_argument, "quantile of an empty sample");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "alpha must lie in (0, 1)");
  }
  std::vector<double> sorted(values.begin(), values.end());
  const auto b = static_cast<double>(sorted.size());
  // ceil(alpha B) with a guard against alpha*B landing a hair above an integer.
  const double scaled = alpha * b;
  auto rank = static_cast<std::size_t>(std::ceil(scaled - 1e-9 * std::max(1.0, scaled)));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   sorted.end());
  return sorted[rank - 1];
}

bool ConfidenceBall::contains(const Eigen::VectorXd& mu) const {
  return (center - mu).norm() <= radius;
}

ConfidenceBall confidence_ball(const BootstrapRun& run, double alpha) {
  const double c = empirical_quantile(run.t1, 1.0 - alpha);
  return {run.sample_mean, c / std::sqrt(static_cast<double>(run.n))};
}

ConfidenceInterval confidence_interval(const BootstrapRun& run, double alpha) {
  if (!run.t2 || !run.phi_sample_mean) {
    throw Error(ErrorCode::missing_replicates, "T2 interval requested but the run has no phi");
  }
  const double root_n = std::sqrt(static_cast<double>(run.n));
  const double upper_q = empirical_quantile(*run.t2, 1.0 - alpha / 2.0);
  const double lower_q = empirical_quantile(*run.t2, alpha / 2.0);
  return {*run.phi_sample_mean - upper_q / root_n, *run.phi_sample_mean - lower_q / root_n};
}

double kolmogorov_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::invalid_argument, "empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  // Walk the pooled support; both cdfs are right-continuous step functions.
  while (i < x.size() || j < y.size()) {
    double t;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      t = x[i];
    } else {
      t = y[j];
    }
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

double dependence_transform_rate(double p, double tau, bool c4_zero) {
  if (!(p > 1.0)) throw Error(ErrorCode::invalid_argument, "p must exceed 1");
  if (!(tau >= 1.0)) throw Error(ErrorCode::invalid_argument, "tau must be >= 1");
  if (!(tau < p)) throw Error(ErrorCode::invalid_argument, "tau must be < p");
  return c4_zero ? (p - tau) / (p - 1.0) : (p - tau) / (p + tau - 2.0);
}

}  // namespace netboot
