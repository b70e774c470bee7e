#pragma once

// Simulated networks and network-dependent processes with known truth,
// plus the Monte Carlo coverage harness built on them.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/LU>

#include "netboot/graph.hpp"
#include "netboot/inference.hpp"

namespace netboot {

enum class NetworkKind { line, cycle, star, lattice2d, erdos_renyi };

NetworkKind parse_network_kind(std::string_view name);
std::string_view to_string(NetworkKind kind);

struct NetworkSpec {
  NetworkKind kind = NetworkKind::cycle;
  std::size_t n = 0;
  double edge_probability = 0.0;  // erdos_renyi only
};

/// Unit-weight network. lattice2d places nodes row-major on a grid with
/// floor(sqrt(n)) columns. Deterministic for a fixed seed.
Network gen_network(const NetworkSpec& spec, std::uint64_t seed);

/// Spatial autoregression eps = lambda W eps + u with W = A / rho(A), A the
/// weighted adjacency matrix and u iid standard normal.
class CliffOrdModel {
 public:
  CliffOrdModel(const Network& net, double lambda);

  double lambda() const noexcept { return lambda_; }
  double spectral_radius() const noexcept { return spectral_radius_; }
  const Eigen::MatrixXd& weight_matrix() const noexcept { return weights_; }

  /// eps = (I - lambda W)^-1 u.
  Eigen::VectorXd solve(const Eigen::VectorXd& innovations) const;

  /// Var(sqrt(n) mean(eps)) = n^-1 1^T C C^T 1 with C = (I - lambda W)^-1.
  double true_variance() const;

  /// gamma_s = sqrt(2/pi) max_i sum_{j : d(i,j) >= s+1} |C_ij| for s = 0..s_max.
  std::vector<double> gamma_series(const DistanceMatrix& d) const;

  /// C, materialised on request.
  Eigen::MatrixXd inverse() const;

 private:
  double lambda_;
  double spectral_radius_ = 0.0;
  Eigen::MatrixXd weights_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// Perron root of a non-negative symmetric matrix by power iteration on
/// A + I (which avoids the +-rho oscillation of bipartite graphs).
double spectral_radius(const Eigen::MatrixXd& a, double rel_tol = 1e-10);

struct CliffOrdDraw {
  Eigen::MatrixXd eps;  // n x 1
  Eigen::VectorXd innovations;
  std::vector<double> gamma;
  double true_variance = 0.0;
};

CliffOrdDraw gen_cliff_ord(const Network& net, double lambda, std::uint64_t seed);

/// Y_i = |N(i;q+1)|^-1/2 sum_{j in N(i;q+1)} u_j with u iid standard normal.
Eigen::MatrixXd gen_ma_neighborhood(const DistanceMatrix& d, double q, std::uint64_t seed);

/// Var(sqrt(n) Ybar) for gen_ma_neighborhood.
double ma_neighborhood_true_variance(const DistanceMatrix& d, double q);

enum class ProcessKind { iid_normal, ma_neighborhood, cliff_ord, constant };

ProcessKind parse_process_kind(std::string_view name);
std::string_view to_string(ProcessKind kind);

struct ProcessSpec {
  ProcessKind kind = ProcessKind::iid_normal;
  double q = 0.0;         // ma_neighborhood radius
  double lambda = 0.0;    // cliff_ord
  double value = 0.0;     // constant
};

struct DgpSpec {
  NetworkSpec network;
  ProcessSpec process;
  std::uint64_t seed = 0;
};

/// A network drawn once plus everything needed to simulate data on it.
class Simulator {
 public:
  explicit Simulator(const DgpSpec& spec, unsigned threads = 0);

  const Network& network() const noexcept { return network_; }
  const DistanceMatrix& distances() const noexcept { return distances_; }
  const DgpSpec& spec() const noexcept { return spec_; }

  /// Sample for Monte Carlo repetition `rep` (n x 1).
  Eigen::MatrixXd draw(std::uint64_t rep) const;

  double true_mean() const noexcept;
  std::optional<double> true_variance() const;
  /// gamma series when the process defines one (cliff_ord, iid, constant).
  std::optional<std::vector<double>> gamma_series() const;

 private:
  DgpSpec spec_;
  Network network_;
  DistanceMatrix distances_;
  std::optional<CliffOrdModel> cliff_ord_;
};

struct CoverageOptions {
  Scheme scheme = Scheme::dwb;
  double radius = 1.0;
  std::size_t replicates = 399;
  double alpha = 0.1;
  std::size_t mc_reps = 1000;
  unsigned threads = 0;
};

struct CoverageRecord {
  bool covered = false;
  double t1 = 0.0;
  double radius = 0.0;      // confidence-ball radius
  double sigma_star = 0.0;  // v = 1
};

struct CoverageReport {
  double coverage = 0.0;
  double standard_error = 0.0;
  double nominal = 0.0;
  std::size_t mc_reps = 0;
  double mean_sigma_star = 0.0;
  std::optional<double> true_variance;
  double mean_ball_radius = 0.0;
  std::vector<CoverageRecord> records;
};

/// Fraction of repetitions whose (1 - alpha) confidence ball contains the
/// true mean, with binomial standard error. Repetition r uses data stream r
/// and a bootstrap seed derived from (seed, r).
CoverageReport run_coverage(const DgpSpec& spec, const CoverageOptions& options);

/// Same, reusing an already constructed simulator.
CoverageReport run_coverage(const Simulator& sim, const CoverageOptions& options);

}  // namespace netboot
