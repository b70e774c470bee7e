#include "netboot/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "netboot/error.hpp"

namespace netboot {

namespace {

void require_finite(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw Error(ErrorCode::non_finite, "matrix has non-finite entries");
}

void require_square(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::dimension_mismatch, "matrix must be square");
}

}  // namespace

double Kernel::operator()(double z) const noexcept {
  const double a = std::abs(z);
  if (!(a <= 1.0)) return 0.0;  // also covers z = +-inf
  switch (kind) {
    case KernelKind::truncated:
      return 1.0;
    case KernelKind::bartlett:
      return 1.0 - a;
    case KernelKind::parzen:
      if (a <= 0.5) return 1.0 - 6.0 * a * a + 6.0 * a * a * a;
      return 2.0 * (1.0 - a) * (1.0 - a) * (1.0 - a);
  }
  return 0.0;
}

KernelKind parse_kernel(std::string_view name) {
  if (name == "truncated") return KernelKind::truncated;
  if (name == "bartlett") return KernelKind::bartlett;
  if (name == "parzen") return KernelKind::parzen;
  throw Error(ErrorCode::invalid_argument, "unknown kernel '" + std::string(name) + "'");
}

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::truncated: return "truncated";
    case KernelKind::bartlett: return "bartlett";
    case KernelKind::parzen: return "parzen";
  }
  return "unknown";
}

Eigen::MatrixXd demean(const Eigen::MatrixXd& y) {
  const Eigen::RowVectorXd mean = y.colwise().mean();
  return y.rowwise() - mean;
}

Eigen::MatrixXd weighted_cross_covariance(
    const Eigen::MatrixXd& y, const std::function<double(std::size_t, std::size_t)>& weight) {
  const auto n = static_cast<std::size_t>(y.rows());
  const Eigen::MatrixXd e = demean(y);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(y.cols(), y.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = weight(i, j);
      if (w == 0.0) continue;
      out.noalias() += w * e.row(static_cast<Eigen::Index>(i)).transpose() *
                       e.row(static_cast<Eigen::Index>(j));
    }
  }
  out /= static_cast<double>(n);
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd hac_estimate(const Eigen::MatrixXd& y, const DistanceMatrix& d, Kernel kernel,
                             double bandwidth) {
  if (static_cast<std::size_t>(y.rows()) != d.size()) {
    std::ostringstream msg;
    msg << "data has " << y.rows() << " rows but the network has " << d.size() << " nodes";
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
  if (!(bandwidth >= 0.0)) throw Error(ErrorCode::invalid_argument, "bandwidth must be >= 0");
  const double scale = bandwidth + 1.0;
  return weighted_cross_covariance(y, [&](std::size_t i, std::size_t j) {
    const double dist = d(i, j);
    if (!DistanceMatrix::is_finite(dist) || dist > scale) return 0.0;
    return kernel(dist / scale);
  });
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  require_square(m);
  require_finite(m);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "matrix is not symmetric (max |M - M^T| = " << asym << ")";
    throw Error(ErrorCode::not_symmetric, msg.str());
  }
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd psd_repair(const Eigen::MatrixXd& m, double floor_value) {
  if (!(floor_value > 0.0)) throw Error(ErrorCode::invalid_argument, "repair floor c_n must be > 0");
  const Eigen::MatrixXd sym = symmetrized(m);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::non_finite, "eigendecomposition failed");
  }
  const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(floor_value);
  const Eigen::MatrixXd& q = eig.eigenvectors();
  const Eigen::MatrixXd out = q * clipped.asDiagonal() * q.transpose();
  return 0.5 * (out + out.transpose());
}

double default_repair_floor(const Eigen::MatrixXd& m) {
  const double v = static_cast<double>(std::max<Eigen::Index>(m.rows(), 1));
  return std::max(1e-3 * m.trace() / v, 1e-12);
}

Eigen::MatrixXd sym_psd_sqrt(const Eigen::MatrixXd& m, double clip_tol) {
  if (!(clip_tol >= 0.0)) throw Error(ErrorCode::invalid_argument, "clip tolerance must be >= 0");
  const Eigen::MatrixXd sym = symmetrized(m);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::non_finite, "eigendecomposition failed");
  }
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  if (lambda.size() > 0 && lambda.minCoeff() < -clip_tol) {
    std::ostringstream msg;
    msg << "matrix is not positive semi-definite (min eigenvalue " << lambda.minCoeff() << ")";
    throw Error(ErrorCode::not_psd, msg.str());
  }
  const Eigen::VectorXd root = lambda.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd& q = eig.eigenvectors();
  const Eigen::MatrixXd out = q * root.asDiagonal() * q.transpose();
  return 0.5 * (out + out.transpose());
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd sym = symmetrized(m);
  if (sym.size() == 0) return 0.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::non_finite, "eigendecomposition failed");
  return eig.eigenvalues().minCoeff();
}

}  // namespace netboot
