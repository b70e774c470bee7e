#include "netboot/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "netboot/block_bootstrap.hpp"
#include "netboot/error.hpp"
#include "netboot/parallel.hpp"
#include "netboot/rng.hpp"
#include "netboot/wild_bootstrap.hpp"

namespace netboot {

namespace {

Eigen::VectorXd standard_normal(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd u(static_cast<Eigen::Index>(n));
  for (auto& x : u) x = normal(rng);
  return u;
}

Eigen::MatrixXd adjacency(const Network& net) {
  const auto n = static_cast<Eigen::Index>(net.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : net.edges()) {
    a(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = e.weight;
    a(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = e.weight;
  }
  return a;
}

}  // namespace

NetworkKind parse_network_kind(std::string_view name) {
  if (name == "line") return NetworkKind::line;
  if (name == "cycle") return NetworkKind::cycle;
  if (name == "star") return NetworkKind::star;
  if (name == "lattice2d") return NetworkKind::lattice2d;
  if (name == "erdos_renyi") return NetworkKind::erdos_renyi;
  throw Error(ErrorCode::invalid_argument, "unknown network kind '" + std::string(name) + "'");
}

std::string_view to_string(NetworkKind kind) {
  switch (kind) {
    case NetworkKind::line: return "line";
    case NetworkKind::cycle: return "cycle";
    case NetworkKind::star: return "star";
    case NetworkKind::lattice2d: return "lattice2d";
    case NetworkKind::erdos_renyi: return "erdos_renyi";
  }
  return "unknown";
}

Network gen_network(const NetworkSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.n;
  if (n < 2) throw Error(ErrorCode::invalid_argument, "simulated networks need n >= 2");
  std::vector<Edge> edges;
  switch (spec.kind) {
    case NetworkKind::line:
      for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
      break;
    case NetworkKind::cycle:
      if (n < 3) throw Error(ErrorCode::invalid_argument, "a cycle needs n >= 3");
      for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
      edges.push_back({0, n - 1, 1.0});
      break;
    case NetworkKind::star:
      for (std::size_t i = 1; i < n; ++i) edges.push_back({0, i, 1.0});
      break;
    case NetworkKind::lattice2d: {
      const auto cols = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
      for (std::size_t k = 0; k < n; ++k) {
        if ((k + 1) % cols != 0 && k + 1 < n) edges.push_back({k, k + 1, 1.0});
        if (k + cols < n) edges.push_back({k, k + cols, 1.0});
      }
      break;
    }
    case NetworkKind::erdos_renyi: {
      const double p = spec.edge_probability;
      if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "erdos_renyi edge probability must lie in (0, 1)");
      }
      Rng rng = substream(seed, StreamTag::network, 0);
      std::bernoulli_distribution coin(p);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (coin(rng)) edges.push_back({i, j, 1.0});
        }
      }
      break;
    }
  }
  return Network::build(n, std::move(edges), WeightMode::unit);
}

double spectral_radius(const Eigen::MatrixXd& a, double rel_tol) {
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const Eigen::MatrixXd shifted = a + Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n).normalized();
  double estimate = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    const Eigen::VectorXd y = shifted * x;
    const double next = x.dot(y);  // Rayleigh quotient
    const double norm = y.norm();
    x = y / norm;
    if (iter > 0 && std::abs(next - estimate) <= rel_tol * std::abs(next)) {
      return next - 1.0;
    }
    estimate = next;
  }
  return estimate - 1.0;
}

CliffOrdModel::CliffOrdModel(const Network& net, double lambda) : lambda_(lambda) {
  if (!(lambda > -1.0 && lambda < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "cliff_ord lambda must lie in (-1, 1)");
  }
  const Eigen::MatrixXd a = adjacency(net);
  spectral_radius_ = netboot::spectral_radius(a);
  weights_ = spectral_radius_ > 0.0 ? Eigen::MatrixXd(a / spectral_radius_)
                                    : Eigen::MatrixXd::Zero(a.rows(), a.cols());
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(a.rows(), a.cols()) - lambda_ * weights_;
  lu_.compute(system);
  if (!(lu_.rcond() > 1e-14)) {
    throw Error(ErrorCode::singular_system, "I - lambda W is numerically singular");
  }
}

Eigen::VectorXd CliffOrdModel::solve(const Eigen::VectorXd& innovations) const {
  if (innovations.size() != weights_.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "innovation vector has the wrong length");
  }
  return lu_.solve(innovations);
}

double CliffOrdModel::true_variance() const {
  // W is symmetric, so C^T 1 = C 1.
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(weights_.rows());
  const Eigen::VectorXd row_sums = lu_.solve(ones);
  return row_sums.squaredNorm() / static_cast<double>(weights_.rows());
}

Eigen::MatrixXd CliffOrdModel::inverse() const { return lu_.inverse(); }

std::vector<double> CliffOrdModel::gamma_series(const DistanceMatrix& d) const {
  const std::size_t n = d.size();
  if (static_cast<Eigen::Index>(n) != weights_.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "distance matrix does not match the model");
  }
  const Eigen::MatrixXd c = inverse();
  const auto s_max = static_cast<std::size_t>(std::floor(d.max_finite()));
  const double mu = std::sqrt(2.0 / std::numbers::pi);
  std::vector<double> gamma(s_max + 1, 0.0);
  // bucket[t] = sum of |C_ij| with floor(d(i,j)) = t; the last bucket holds
  // disconnected pairs. d >= s+1 iff floor(d) >= s+1.
  std::vector<double> bucket(s_max + 2);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(bucket.begin(), bucket.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double dist = d(i, j);
      const std::size_t t = DistanceMatrix::is_finite(dist)
                                ? static_cast<std::size_t>(std::floor(dist))
                                : s_max + 1;
      bucket[t] += std::abs(c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    double tail = bucket[s_max + 1];
    for (std::size_t s = s_max + 1; s-- > 0;) {
      // tail = sum over floor(d) >= s+1
      gamma[s] = std::max(gamma[s], mu * tail);
      tail += bucket[s];
    }
  }
  return gamma;
}

CliffOrdDraw gen_cliff_ord(const Network& net, double lambda, std::uint64_t seed) {
  const CliffOrdModel model(net, lambda);
  Rng rng = substream(seed, StreamTag::innovations, 0);
  CliffOrdDraw out;
  out.innovations = standard_normal(net.node_count(), rng);
  out.eps = model.solve(out.innovations);
  out.gamma = model.gamma_series(distance_matrix(net));
  out.true_variance = model.true_variance();
  return out;
}

Eigen::MatrixXd gen_ma_neighborhood(const DistanceMatrix& d, double q, std::uint64_t seed) {
  if (!(q >= 0.0)) throw Error(ErrorCode::invalid_argument, "MA radius q must be >= 0");
  const std::size_t n = d.size();
  Rng rng = substream(seed, StreamTag::innovations, 0);
  const Eigen::VectorXd u = standard_normal(n, rng);
  Eigen::MatrixXd y(static_cast<Eigen::Index>(n), 1);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeSet ball = neighborhood(d, i, q + 1.0);
    double sum = 0.0;
    for (std::size_t j : ball) sum += u[static_cast<Eigen::Index>(j)];
    y(static_cast<Eigen::Index>(i), 0) = sum / std::sqrt(static_cast<double>(ball.size()));
  }
  return y;
}

double ma_neighborhood_true_variance(const DistanceMatrix& d, double q) {
  // Cov(Y_i, Y_j) = |N_i cap N_j| / sqrt(|N_i| |N_j|); summing over (i,j)
  // regroups by innovation k: sum_k (sum_{i : k in N_i} |N_i|^-1/2)^2.
  const auto balls = all_neighborhoods(d, q + 1.0);
  std::vector<double> loading(d.size(), 0.0);
  for (const auto& ball : balls) {
    const double w = 1.0 / std::sqrt(static_cast<double>(ball.size()));
    for (std::size_t k : ball) loading[k] += w;
  }
  double total = 0.0;
  for (double x : loading) total += x * x;
  return total / static_cast<double>(d.size());
}

ProcessKind parse_process_kind(std::string_view name) {
  if (name == "iid_normal") return ProcessKind::iid_normal;
  if (name == "ma_neighborhood") return ProcessKind::ma_neighborhood;
  if (name == "cliff_ord") return ProcessKind::cliff_ord;
  if (name == "constant") return ProcessKind::constant;
  throw Error(ErrorCode::invalid_argument, "unknown process kind '" + std::string(name) + "'");
}

std::string_view to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::iid_normal: return "iid_normal";
    case ProcessKind::ma_neighborhood: return "ma_neighborhood";
    case ProcessKind::cliff_ord: return "cliff_ord";
    case ProcessKind::constant: return "constant";
  }
  return "unknown";
}

Simulator::Simulator(const DgpSpec& spec, unsigned threads)
    : spec_(spec),
      network_(gen_network(spec.network, spec.seed)),
      distances_(distance_matrix(network_, threads)) {
  if (spec.process.kind == ProcessKind::cliff_ord) {
    cliff_ord_.emplace(network_, spec.process.lambda);
  }
  if (spec.process.kind == ProcessKind::ma_neighborhood && !(spec.process.q >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "MA radius q must be >= 0");
  }
}

Eigen::MatrixXd Simulator::draw(std::uint64_t rep) const {
  const std::uint64_t data_seed = derive_seed(spec_.seed, StreamTag::innovations, rep);
  const std::size_t n = distances_.size();
  switch (spec_.process.kind) {
    case ProcessKind::iid_normal: {
      Rng rng = substream(data_seed, StreamTag::innovations, 0);
      return standard_normal(n, rng);
    }
    case ProcessKind::ma_neighborhood:
      return gen_ma_neighborhood(distances_, spec_.process.q, data_seed);
    case ProcessKind::cliff_ord: {
      Rng rng = substream(data_seed, StreamTag::innovations, 0);
      return cliff_ord_->solve(standard_normal(n, rng));
    }
    case ProcessKind::constant:
      return Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n), 1, spec_.process.value);
  }
  return {};
}

double Simulator::true_mean() const noexcept {
  return spec_.process.kind == ProcessKind::constant ? spec_.process.value : 0.0;
}

std::optional<double> Simulator::true_variance() const {
  switch (spec_.process.kind) {
    case ProcessKind::iid_normal: return 1.0;
    case ProcessKind::ma_neighborhood:
      return ma_neighborhood_true_variance(distances_, spec_.process.q);
    case ProcessKind::cliff_ord: return cliff_ord_->true_variance();
    case ProcessKind::constant: return 0.0;
  }
  return std::nullopt;
}

std::optional<std::vector<double>> Simulator::gamma_series() const {
  const auto levels = static_cast<std::size_t>(std::floor(distances_.max_finite())) + 1;
  switch (spec_.process.kind) {
    case ProcessKind::cliff_ord: return cliff_ord_->gamma_series(distances_);
    case ProcessKind::iid_normal:
    case ProcessKind::constant: return std::vector<double>(levels, 0.0);
    case ProcessKind::ma_neighborhood: return std::nullopt;
  }
  return std::nullopt;
}

CoverageReport run_coverage(const DgpSpec& spec, const CoverageOptions& options) {
  const Simulator sim(spec, options.threads);
  return run_coverage(sim, options);
}

CoverageReport run_coverage(const Simulator& sim, const CoverageOptions& options) {
  if (options.mc_reps == 0) throw Error(ErrorCode::invalid_argument, "mc_reps must be ≥ 1");
  if (options.replicates == 0) throw Error(ErrorCode::invalid_argument, "reps must be ≥ 1");
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "alpha must lie in (0, 1)");
  }
  if (!(options.radius > 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be > 0");

  std::optional<DwbWeights> weights;
  if (options.scheme == Scheme::dwb) weights = DwbWeights::build(sim.distances(), options.radius);

  const Eigen::VectorXd truth = Eigen::VectorXd::Constant(1, sim.true_mean());
  CoverageReport report;
  report.nominal = 1.0 - options.alpha;
  report.mc_reps = options.mc_reps;
  report.true_variance = sim.true_variance();
  report.records.resize(options.mc_reps);

  parallel_for(options.mc_reps, options.threads, [&](std::size_t r) {
    const Eigen::MatrixXd y = sim.draw(r);
    BootstrapOptions boot;
    boot.replicates = options.replicates;
    boot.seed = derive_seed(sim.spec().seed, StreamTag::coverage_rep, r);
    boot.threads = 1;
    const BootstrapRun run = options.scheme == Scheme::dwb
                                 ? dwb_run(y, *weights, boot)
                                 : bb_run(y, sim.distances(), options.radius, boot);
    const ConfidenceBall ball = confidence_ball(run, options.alpha);
    auto& rec = report.records[r];
    rec.covered = ball.contains(truth);
    rec.t1 = test_statistics(run.sample_mean, truth, run.n).t1;
    rec.radius = ball.radius;
    rec.sigma_star = run.sigma_star(0, 0);
  });

  std::size_t hits = 0;
  double sigma_sum = 0.0, radius_sum = 0.0;
  for (const auto& rec : report.records) {
    hits += rec.covered ? 1 : 0;
    sigma_sum += rec.sigma_star;
    radius_sum += rec.radius;
  }
  const auto reps = static_cast<double>(options.mc_reps);
  report.coverage = static_cast<double>(hits) / reps;
  report.standard_error = std::sqrt(report.coverage * (1.0 - report.coverage) / reps);
  report.mean_sigma_star = sigma_sum / reps;
  report.mean_ball_radius = radius_sum / reps;
  return report;
}

}  // namespace netboot
