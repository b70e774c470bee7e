#pragma once

// Neighbourhood-block bootstrap. Block k is the open (s+1)-neighbourhood of
// node k; K = floor(n / delta(s)) blocks are drawn uniformly with
// replacement and combined through the quasi-average n^-1 sum_k Z*_k.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "netboot/graph.hpp"
#include "netboot/inference.hpp"
#include "netboot/rng.hpp"

namespace netboot {

struct BlockSet {
  double radius = 0.0;
  std::vector<NodeSet> blocks;    // blocks[k] = N(k; radius + 1)
  Eigen::MatrixXd block_sums;     // n x v, row k = sum of Y over blocks[k]
  std::size_t block_count = 0;    // K_n
  double mean_block_size = 0.0;   // delta_n(radius)

  std::size_t node_count() const { return blocks.size(); }
  std::size_t min_block_size() const;
  std::size_t max_block_size() const;
};

/// Throws Error(blocks_too_large) when K_n would be 0.
BlockSet make_blocks(const DistanceMatrix& d, const Eigen::MatrixXd& y, double radius);

struct BlockReplicate {
  std::vector<std::size_t> chosen;  // K_n block indices
  Eigen::VectorXd quasi_average;
  std::size_t pseudo_sample_size = 0;  // L_n
};

BlockReplicate bb_resample(const BlockSet& blocks, Rng& rng);

/// Quasi-average of an explicit block selection.
BlockReplicate bb_replicate_from(const BlockSet& blocks, std::vector<std::size_t> chosen);

/// mu* = E[quasi-average] = K_n Zbar / n.
Eigen::VectorXd bb_center(const BlockSet& blocks);

/// delta^-1 (n^-1 sum Z_i Z_i^T - Zbar Zbar^T).
Eigen::MatrixXd bb_variance(const BlockSet& blocks);

/// K_n delta / n: Var(sqrt(n) quasi-average) = factor * bb_variance. Equals 1
/// when n / delta is an integer.
double bb_variance_factor(const BlockSet& blocks);

BootstrapRun bb_run(const Eigen::MatrixXd& y, const DistanceMatrix& d, double radius,
                    const BootstrapOptions& options);

}  // namespace netboot
