#pragma once

#include <functional>
#include <string_view>

#include <Eigen/Dense>

#include "netboot/graph.hpp"

namespace netboot {

enum class KernelKind { truncated, bartlett, parzen };

/// Even kernel with k(0) = 1 that vanishes outside [-1, 1].
struct Kernel {
  KernelKind kind = KernelKind::bartlett;

  double operator()(double z) const noexcept;
};

KernelKind parse_kernel(std::string_view name);
std::string_view to_string(KernelKind kind);

/// Network HAC estimator
///   n^-1 sum_{i,j} k(d(i,j)/(b+1)) (Y_i - Ybar)(Y_j - Ybar)^T.
/// Y is n x v (row i = observation at node i). Pairs farther apart than
/// b+1, including disconnected ones, are skipped.
Eigen::MatrixXd hac_estimate(const Eigen::MatrixXd& y, const DistanceMatrix& d, Kernel kernel,
                             double bandwidth);

/// Same double sum with an arbitrary pair weight in place of the kernel.
Eigen::MatrixXd weighted_cross_covariance(
    const Eigen::MatrixXd& y, const std::function<double(std::size_t, std::size_t)>& weight);

/// Demeaned copy of y (columns centred at their means).
Eigen::MatrixXd demean(const Eigen::MatrixXd& y);

/// Averages M and M^T after checking the asymmetry is below 1e-10
/// (relative to the largest entry, floored at 1).
Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m);

/// Q max(Lambda, c I) Q^T from the eigendecomposition of M.
Eigen::MatrixXd psd_repair(const Eigen::MatrixXd& m, double floor_value);

/// Default repair floor: 1e-3 * trace(M) / v, kept strictly positive.
double default_repair_floor(const Eigen::MatrixXd& m);

/// Symmetric square root Q diag(sqrt(max(lambda, 0))) Q^T. Eigenvalues below
/// -clip_tol mean the input was not PSD and raise Error(not_psd).
Eigen::MatrixXd sym_psd_sqrt(const Eigen::MatrixXd& m, double clip_tol);

double min_eigenvalue(const Eigen::MatrixXd& m);

}  // namespace netboot
