#include "netboot/block_bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "netboot/error.hpp"
#include "netboot/parallel.hpp"

namespace netboot {

std::size_t BlockSet::min_block_size() const {
  std::size_t best = blocks.empty() ? 0 : blocks.front().size();
  for (const auto& b : blocks) best = std::min(best, b.size());
  return best;
}

std::size_t BlockSet::max_block_size() const {
  std::size_t best = 0;
  for (const auto& b : blocks) best = std::max(best, b.size());
  return best;
}

BlockSet make_blocks(const DistanceMatrix& d, const Eigen::MatrixXd& y, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "block radius must be > 0");
  const std::size_t n = d.size();
  if (static_cast<std::size_t>(y.rows()) != n) {
    std::ostringstream msg;
    msg << "data has " << y.rows() << " rows but the network has " << n << " nodes";
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }

  BlockSet out;
  out.radius = radius;
  out.blocks = all_neighborhoods(d, radius + 1.0);
  out.block_sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), y.cols());
  std::size_t total = 0;
  for (std::size_t k = 0; k < n; ++k) {
    total += out.blocks[k].size();
    for (std::size_t j : out.blocks[k]) {
      out.block_sums.row(static_cast<Eigen::Index>(k)) += y.row(static_cast<Eigen::Index>(j));
    }
  }
  out.mean_block_size = static_cast<double>(total) / static_cast<double>(n);
  // floor(n / delta) = floor(n^2 / total), done in integers.
  out.block_count = (n * n) / total;
  if (out.block_count == 0) {
    std::ostringstream msg;
    msg << "radius " << radius << " gives average block size " << out.mean_block_size
        << " > n = " << n << "; choose a smaller radius";
    throw Error(ErrorCode::blocks_too_large, msg.str());
  }
  return out;
}

BlockReplicate bb_replicate_from(const BlockSet& blocks, std::vector<std::size_t> chosen) {
  const auto n = static_cast<double>(blocks.node_count());
  BlockReplicate rep;
  rep.quasi_average = Eigen::VectorXd::Zero(blocks.block_sums.cols());
  for (std::size_t k : chosen) {
    rep.quasi_average += blocks.block_sums.row(static_cast<Eigen::Index>(k)).transpose();
    rep.pseudo_sample_size += blocks.blocks[k].size();
  }
  rep.quasi_average /= n;
  rep.chosen = std::move(chosen);
  return rep;
}

BlockReplicate bb_resample(const BlockSet& blocks, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, blocks.node_count() - 1);
  std::vector<std::size_t> chosen(blocks.block_count);
  for (auto& k : chosen) k = pick(rng);
  return bb_replicate_from(blocks, std::move(chosen));
}

Eigen::VectorXd bb_center(const BlockSet& blocks) {
  const auto n = static_cast<double>(blocks.node_count());
  const Eigen::VectorXd zbar = blocks.block_sums.colwise().mean().transpose();
  return static_cast<double>(blocks.block_count) * zbar / n;
}

Eigen::MatrixXd bb_variance(const BlockSet& blocks) {
  const auto n = static_cast<double>(blocks.node_count());
  const Eigen::MatrixXd& z = blocks.block_sums;
  const Eigen::VectorXd zbar = z.colwise().mean().transpose();
  Eigen::MatrixXd second = z.transpose() * z / n;
  Eigen::MatrixXd out = (second - zbar * zbar.transpose()) / blocks.mean_block_size;
  return 0.5 * (out + out.transpose());
}

double bb_variance_factor(const BlockSet& blocks) {
  return static_cast<double>(blocks.block_count) * blocks.mean_block_size /
         static_cast<double>(blocks.node_count());
}

BootstrapRun bb_run(const Eigen::MatrixXd& y, const DistanceMatrix& d, double radius,
                    const BootstrapOptions& options) {
  if (options.replicates == 0) throw Error(ErrorCode::invalid_argument, "reps must be ≥ 1");
  const BlockSet blocks = make_blocks(d, y, radius);
  const std::size_t n = blocks.node_count();
  const double root_n = std::sqrt(static_cast<double>(n));

  BootstrapRun run;
  run.scheme = Scheme::block;
  run.n = n;
  run.v = static_cast<std::size_t>(y.cols());
  run.radius = radius;
  run.replicates = options.replicates;
  run.seed = options.seed;
  run.center = bb_center(blocks);
  run.sample_mean = y.colwise().mean().transpose();
  run.sigma_star = bb_variance(blocks);
  run.block_count = blocks.block_count;
  run.mean_block_size = blocks.mean_block_size;
  run.variance_factor = bb_variance_factor(blocks);

  const SmoothFunction* phi = options.phi ? &*options.phi : nullptr;
  double phi_center = 0.0;
  if (phi) {
    phi_center = phi->value(run.center);
    run.phi_name = phi->name;
    run.phi_sample_mean = phi->value(run.sample_mean);
    const Eigen::VectorXd g = phi->gradient(run.sample_mean);
    run.delta_method_variance = g.dot(run.sigma_star * g);
  }

  const std::size_t reps = options.replicates;
  run.t1.assign(reps, 0.0);
  std::vector<double> t2(phi ? reps : 0, 0.0);
  std::vector<std::size_t> sizes(reps, 0);
  parallel_for(reps, options.threads, [&](std::size_t b) {
    Rng rng = substream(options.seed, StreamTag::block_resample, b);
    const BlockReplicate rep = bb_resample(blocks, rng);
    run.t1[b] = root_n * (rep.quasi_average - run.center).norm();
    if (phi) t2[b] = root_n * (phi->value(rep.quasi_average) - phi_center);
    sizes[b] = rep.pseudo_sample_size;
  });
  if (phi) run.t2 = std::move(t2);

  double ratio = 0.0;
  for (std::size_t s : sizes) ratio += static_cast<double>(s) / static_cast<double>(n);
  run.mean_pseudo_sample_ratio = ratio / static_cast<double>(reps);
  return run;
}

}  // namespace netboot
